use std::fmt;

use smallvec::SmallVec;

/// Exponent vectors stay inline up to this many variables.
pub const INLINE_VARS: usize = 10;

/// A power product, one exponent slot per ring variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; INLINE_VARS]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial {
            exps: SmallVec::from_slice(exps),
            degree,
        }
    }

    /// The monomial `x_var^power`.
    pub fn variable(nvars: usize, var: usize, power: u16) -> Self {
        let mut m = Self::one(nvars);
        m.exps[var] = power;
        m.degree = power as u32;
        m
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u16 {
        self.exps[var]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Degree restricted to the given variable indices.
    pub fn partial_degree(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.exps[v] as u32).sum()
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; INLINE_VARS]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a - b).collect();
        Monomial {
            exps,
            degree: self.degree - other.degree,
        }
    }

    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| self.div(other))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; INLINE_VARS]> =
            self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; INLINE_VARS]> =
            self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.min(b)).collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u16) -> Monomial {
        let exps: SmallVec<[u16; INLINE_VARS]> =
            self.exps.iter().map(|e| e.checked_mul(k).expect("exponent overflow")).collect();
        Monomial {
            exps,
            degree: self.degree * k as u32,
        }
    }

    /// Bitmask with bit `i % 64` set when variable `i` occurs.
    #[inline]
    pub fn support_mask(&self) -> u64 {
        let mut mask = 0u64;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                mask |= 1 << (i % 64);
            }
        }
        mask
    }

    /// Re-indexes variables: slot `i` of the result takes slot `map[i]` of `self`
    /// (`None` leaves it at zero).
    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> Monomial {
        let mut exps = SmallVec::from_elem(0, nvars);
        for (i, src) in map.iter().enumerate() {
            if let Some(s) = src {
                exps[i] = self.exps[*s];
            }
        }
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub(crate) fn set_exponent(&mut self, var: usize, e: u16) {
        self.degree = self.degree - self.exps[var] as u32 + e as u32;
        self.exps[var] = e;
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// Every monomial of total degree exactly `degree` in `nvars` variables, in
/// lexicographically descending exponent order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left as u16;
            out.push(Monomial::from_exponents(cur));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(nvars, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0u16; nvars];
    rec(nvars, 0, degree, &mut cur, &mut out);
    out
}
