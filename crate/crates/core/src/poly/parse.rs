use super::{PolyError, Polynomial, RingRef};
use crate::rational::Rational;

/// Parses an infix polynomial over `ring`: `+ - * ^`, parentheses, integer
/// literals, variable names, and division by a nonzero constant.
pub fn parse_polynomial(ring: &RingRef, text: &str) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        ring,
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a RingRef,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> PolyError {
        PolyError::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        self.pos = at;
                        return Err(self.error("division only by a nonzero constant"));
                    }
                    acc = acc.scale(&d.constant_coeff().recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = text.parse().map_err(|_| {
                self.pos = start;
                self.error("exponent too large")
            })?;
            if e > u16::MAX as u32 {
                self.pos = start;
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let value: Rational = text.parse().map_err(|_| self.error("bad integer literal"))?;
                Ok(Polynomial::constant(self.ring, value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.index_of(name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => {
                        self.pos = start;
                        Err(PolyError::UnknownVariable(name.to_string()))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};

    #[test]
    fn parses_and_prints() {
        let r = PolyRing::new(&["x", "y", "u", "v"], MonomialOrder::grevlex());
        let f = parse_polynomial(&r, "x*y - u*x^2 - v*y^2").unwrap();
        assert_eq!(f.to_string(), "-x^2*u - y^2*v + x*y");
        assert_eq!(parse_polynomial(&r, &f.to_string()).unwrap(), f);
        let g = parse_polynomial(&r, "(x - y*v)*(y - x*u)").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(parse_polynomial(&r, "3/6*x").unwrap(), parse_polynomial(&r, "x/2").unwrap());
        assert_eq!(parse_polynomial(&r, "-x^2").unwrap().to_string(), "-x^2");
    }

    #[test]
    fn reports_errors() {
        let r = PolyRing::new(&["x"], MonomialOrder::grevlex());
        assert!(matches!(parse_polynomial(&r, "x +"), Err(PolyError::Parse { .. })));
        assert_eq!(parse_polynomial(&r, "z"), Err(PolyError::UnknownVariable("z".into())));
        assert!(parse_polynomial(&r, "x/x").is_err());
    }
}
