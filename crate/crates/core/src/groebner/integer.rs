//! Fraction-free Buchberger over the integers. Polynomials are kept
//! primitive with integer coefficients, so no rational normalization (and
//! no denominator gcd) happens inside the inner loop. Used whenever no
//! cofactors are requested; the result is converted to monic rationals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::pairs::PairSet;
use crate::poly::{Monomial, MonomialOrder, Polynomial, RingRef, Term};
use crate::rational::Rational;

/// An integer that stays inline while it fits in an `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) if v != i64::MIN => Int::Small(v),
            _ => Int::Big(b),
        }
    }

    fn from_i128(v: i128) -> Int {
        match i64::try_from(v) {
            Ok(s) if s != i64::MIN => Int::Small(s),
            _ => Int::Big(BigInt::from(v)),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    fn neg(&self) -> Int {
        match self {
            Int::Small(v) => Int::Small(-v),
            Int::Big(b) => Int::from_big(-b),
        }
    }

    fn mul(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 * *b as i128),
            (Int::Big(a), Int::Small(b)) | (Int::Small(b), Int::Big(a)) => Int::from_big(a * *b),
            (Int::Big(a), Int::Big(b)) => Int::from_big(a * b),
        }
    }

    fn sub(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 - *b as i128),
            (Int::Big(a), Int::Small(b)) => Int::from_big(a - *b),
            (Int::Small(a), Int::Big(b)) => Int::from_big(*a - b),
            (Int::Big(a), Int::Big(b)) => Int::from_big(a - b),
        }
    }

    /// Non-negative gcd.
    fn gcd(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => {
                let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                Int::from_i128(x as i128)
            }
            (Int::Small(a), Int::Big(b)) | (Int::Big(b), Int::Small(a)) => {
                if *a == 0 {
                    return Int::from_big(b.abs());
                }
                let r = (b % BigInt::from(*a)).to_i64().unwrap();
                Int::Small(*a).gcd(&Int::Small(r))
            }
            (Int::Big(a), Int::Big(b)) => Int::from_big(a.gcd(b)),
        }
    }

    fn div_exact(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 / *b as i128),
            _ => Int::from_big(self.to_big() / o.to_big()),
        }
    }
}

pub(super) type ZTerms = Vec<(Monomial, Int)>;

fn from_poly(p: &Polynomial) -> ZTerms {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        if !c.is_integer() {
            den = den.lcm(&c.denom());
        }
    }
    let mut z: ZTerms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let v = if den.is_one() { c.numer() } else { c.numer() * (&den / c.denom()) };
            (m.clone(), Int::from_big(v))
        })
        .collect();
    make_primitive(&mut z, &[]);
    z
}

/// Monic rational polynomial with the same (sorted) support.
fn to_monic(ring: &RingRef, z: &ZTerms) -> Polynomial {
    let lc = &z[0].1;
    let terms: Vec<Term> = z
        .iter()
        .map(|(m, c)| {
            let q = match (c, lc) {
                (Int::Small(a), Int::Small(b)) => Rational::new(*a, *b),
                _ => Rational::from_big(BigRational::new(c.to_big(), lc.to_big())),
            };
            (m.clone(), q)
        })
        .collect();
    Polynomial::from_terms(ring, terms)
}

/// Divides `head` and `tail` by the content of their union and makes the
/// overall leading coefficient positive.
fn make_primitive(head: &mut ZTerms, tail: &[(Monomial, Int)]) -> Option<Int> {
    let mut g = Int::Small(0);
    for (_, c) in head.iter().chain(tail) {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    let lead_negative = head.first().or(tail.first()).is_some_and(|t| t.1.is_negative());
    if g.is_zero() || (g.is_one() && !lead_negative) {
        return None;
    }
    let g = if lead_negative { g.neg() } else { g };
    for t in head.iter_mut() {
        t.1 = t.1.div_exact(&g);
    }
    Some(g)
}

/// `a * qa * x - b * qb * y` for descending term slices.
fn combine(order: &MonomialOrder, x: &[(Monomial, Int)], a: &Int, qa: &Monomial, y: &[(Monomial, Int)], b: &Int, qb: &Monomial) -> ZTerms {
    let shift = |t: &(Monomial, Int), q: &Monomial, k: &Int, negate: bool| {
        let m = if q.is_one() { t.0.clone() } else { t.0.mul(q) };
        let c = if k.is_one() { t.1.clone() } else { t.1.mul(k) };
        (m, if negate { c.neg() } else { c })
    };
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let mut xm = x.first().map(|t| t.0.mul(qa));
    let mut ym = y.first().map(|t| t.0.mul(qb));
    loop {
        match (&xm, &ym) {
            (None, None) => break,
            (Some(_), None) => {
                out.extend(x[i..].iter().map(|t| shift(t, qa, a, false)));
                break;
            }
            (None, Some(_)) => {
                out.extend(y[j..].iter().map(|t| shift(t, qb, b, true)));
                break;
            }
            (Some(mx), Some(my)) => match order.cmp(mx, my) {
                Ordering::Greater => {
                    out.push((xm.take().unwrap(), x[i].1.mul(a)));
                    i += 1;
                    xm = x.get(i).map(|t| t.0.mul(qa));
                }
                Ordering::Less => {
                    out.push((ym.take().unwrap(), y[j].1.mul(b).neg()));
                    j += 1;
                    ym = y.get(j).map(|t| t.0.mul(qb));
                }
                Ordering::Equal => {
                    let c = x[i].1.mul(a).sub(&y[j].1.mul(b));
                    let m = xm.take().unwrap();
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                    i += 1;
                    j += 1;
                    xm = x.get(i).map(|t| t.0.mul(qa));
                    ym = y.get(j).map(|t| t.0.mul(qb));
                }
            },
        }
    }
    out
}

struct Divisors<'a> {
    polys: Vec<&'a ZTerms>,
    masks: Vec<u64>,
}

impl<'a> Divisors<'a> {
    fn new(polys: Vec<&'a ZTerms>) -> Self {
        let masks = polys.iter().map(|p| p[0].0.support_mask()).collect();
        Divisors { polys, masks }
    }

    fn find(&self, m: &Monomial) -> Option<usize> {
        let mm = m.support_mask();
        (0..self.polys.len()).find(|&k| self.masks[k] & !mm == 0 && self.polys[k][0].0.divides(m))
    }

    /// Full reduction, up to a nonzero integer factor; the result is primitive.
    fn reduce(&self, order: &MonomialOrder, f: ZTerms) -> ZTerms {
        let mut work = f;
        let mut start = 0;
        let mut rem: ZTerms = Vec::new();
        let one = Monomial::one(work.first().map_or(0, |t| t.0.nvars()));
        while start < work.len() {
            let Some(k) = self.find(&work[start].0) else {
                rem.push(work[start].clone());
                start += 1;
                continue;
            };
            let g = self.polys[k];
            let q = work[start].0.div(&g[0].0);
            let c = &work[start].1;
            let d = c.gcd(&g[0].1);
            let (a, b) = (g[0].1.div_exact(&d), c.div_exact(&d));
            if !a.is_one() {
                for t in rem.iter_mut() {
                    t.1 = t.1.mul(&a);
                }
            }
            work = combine(order, &work[start + 1..], &a, &one, &g[1..], &b, &q);
            start = 0;
            if !a.is_unit() {
                if let Some(g) = make_primitive(&mut rem, &work) {
                    for t in work.iter_mut() {
                        t.1 = t.1.div_exact(&g);
                    }
                }
            }
        }
        make_primitive(&mut rem, &[]);
        rem
    }
}

fn s_poly(order: &MonomialOrder, f: &ZTerms, g: &ZTerms, lcm: &Monomial) -> ZTerms {
    let qf = lcm.div(&f[0].0);
    let qg = lcm.div(&g[0].0);
    let d = f[0].1.gcd(&g[0].1);
    let a = g[0].1.div_exact(&d);
    let b = f[0].1.div_exact(&d);
    let mut s = combine(order, &f[1..], &a, &qf, &g[1..], &b, &qg);
    make_primitive(&mut s, &[]);
    s
}

/// A (not necessarily reduced) Groebner basis of `input`, primitive over Z.
pub(super) fn groebner(ring: &RingRef, input: &[Polynomial], degree_bound: Option<u32>) -> Vec<ZTerms> {
    let order = ring.order();
    let mut polys: Vec<ZTerms> = Vec::new();
    let mut pairs = PairSet::new(degree_bound);

    let mut inputs: Vec<(ZTerms, u32)> =
        input.iter().filter(|g| !g.is_zero()).map(|g| (from_poly(g), g.total_degree())).collect();
    inputs.sort_by(|a, b| order.cmp(&a.0[0].0, &b.0[0].0));
    let mut unit = false;
    for (z, sugar) in inputs {
        let h = Divisors::new(pairs.basis().iter().map(|&k| &polys[k]).collect()).reduce(order, z);
        if h.is_empty() {
            continue;
        }
        unit = h[0].0.is_one();
        pairs.install(h[0].0.clone(), sugar);
        polys.push(h);
        if unit {
            break;
        }
    }
    while !unit {
        let Some(pair) = pairs.pop() else { break };
        let s = s_poly(order, &polys[pair.i], &polys[pair.j], &pair.lcm);
        if s.is_empty() {
            continue;
        }
        let h = Divisors::new(pairs.basis().iter().map(|&k| &polys[k]).collect()).reduce(order, s);
        if h.is_empty() {
            continue;
        }
        unit = h[0].0.is_one();
        pairs.install(h[0].0.clone(), pair.sugar);
        polys.push(h);
    }
    if unit {
        let one = polys.pop().unwrap();
        return vec![one];
    }
    pairs.basis().iter().map(|&k| std::mem::take(&mut polys[k])).collect()
}

/// Moves integer polynomials into `ring` along `slots` (as in
/// [`Polynomial::remap_into`]); the images of distinct terms must stay distinct.
pub(super) fn remap(ring: &RingRef, z: &ZTerms, slots: &[Option<usize>]) -> ZTerms {
    let order = ring.order();
    let mut out: ZTerms = z.iter().map(|(m, c)| (m.remap(ring.nvars(), slots), c.clone())).collect();
    out.sort_by(|a, b| order.cmp(&b.0, &a.0));
    debug_assert!(out.windows(2).all(|w| w[0].0 != w[1].0));
    out
}

/// The reduced basis generated by a Groebner basis over Z: minimal,
/// interreduced, monic, ascending by leading monomial.
pub(super) fn reduced(ring: &RingRef, gens: Vec<ZTerms>) -> Vec<Polynomial> {
    let order = ring.order();
    let mut items: Vec<ZTerms> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    if items.iter().any(|g| g[0].0.is_one()) {
        return vec![Polynomial::one(ring)];
    }
    items.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut minimal: Vec<ZTerms> = Vec::new();
    for it in items {
        if minimal.iter().any(|g| g[0].0.divides(&it[0].0)) {
            continue;
        }
        minimal.push(it);
    }
    for i in 0..minimal.len() {
        let g = std::mem::take(&mut minimal[i]);
        let others = Divisors::new((0..minimal.len()).filter(|&k| k != i).map(|k| &minimal[k]).collect());
        minimal[i] = others.reduce(order, g);
    }
    minimal.iter().map(|z| to_monic(ring, z)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, PolyRing};

    #[test]
    fn hybrid_arithmetic_promotes_and_demotes() {
        let big = Int::Small(i64::MAX).mul(&Int::Small(4));
        assert!(matches!(big, Int::Big(_)));
        assert_eq!(big.div_exact(&Int::Small(4)), Int::Small(i64::MAX));
        assert_eq!(big.gcd(&Int::Small(6)), Int::Small(2));
        assert_eq!(Int::Small(-12).gcd(&Int::Small(18)), Int::Small(6));
        assert_eq!(Int::Small(3).sub(&Int::Small(3)), Int::Small(0));
    }

    #[test]
    fn clears_denominators_and_content() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::grevlex());
        let p = parse_polynomial(&r, "-1/2*x^2 + 3/4*y").unwrap();
        let z = from_poly(&p);
        assert_eq!(z[0].1, Int::Small(2));
        assert_eq!(z[1].1, Int::Small(-3));
        let back = to_monic(&r, &z);
        assert_eq!(back, parse_polynomial(&r, "x^2 - 3/2*y").unwrap());
    }
}
