use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::PolyError;
use crate::rational::Rational;

/// Variable names together with the active monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    order: MonomialOrder,
}

pub type RingRef = Arc<PolyRing>;

impl PolyRing {
    pub fn new<S: AsRef<str>>(names: &[S], order: MonomialOrder) -> RingRef {
        Arc::new(PolyRing {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            order,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same variables under another order.
    pub fn with_order(&self, order: MonomialOrder) -> RingRef {
        Arc::new(PolyRing {
            names: self.names.clone(),
            order,
        })
    }

    pub fn same_variables(&self, other: &PolyRing) -> bool {
        self.names == other.names
    }
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QQ[{}] {:?}", self.names.join(","), self.order)
    }
}

pub type Term = (Monomial, Rational);

/// A sparse polynomial with exact rational coefficients; terms are kept
/// strictly descending in the ring's order with no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<Term>,
}

fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &RingRef, c: Rational) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Rational) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// The variable with index `i`.
    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::monomial(ring, Monomial::variable(ring.nvars(), i, 1), Rational::one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Self, PolyError> {
        let i = ring.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    /// Canonicalizes an arbitrary term list.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<Term>) -> Self {
        let order = ring.order().clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += &c,
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if matches!(out.last(), Some(t) if t.1.is_zero()) {
            out.pop();
        }
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub(crate) fn from_sorted_terms(ring: &RingRef, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    /// Coefficient of the constant monomial, i.e. the value at the origin.
    pub fn constant_coeff(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> Rational {
        let order = self.ring.order();
        match self.terms.binary_search_by(|t| order.cmp(m, &t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Highest total degree among the terms; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    /// Lowest total degree among the terms (the m-adic order); `None` for zero.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|s| s.0.degree() == t.0.degree()),
        }
    }

    /// The sum of the terms of lowest total degree.
    pub fn lowest_form(&self) -> Polynomial {
        let Some(d) = self.lowest_degree() else {
            return self.clone();
        };
        let terms = self.terms.iter().filter(|t| t.0.degree() == d).cloned().collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn max_exponent(&self, var: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exponent(var)).max().unwrap_or(0)
    }

    pub fn uses_variable(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0.exponent(var) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    /// `self - c * m * q`, the reduction kernel.
    pub fn sub_mul_term(&self, c: &Rational, m: &Monomial, q: &Polynomial) -> Polynomial {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + q.terms.len());
        let mut i = 0;
        let mut qi = q.terms.iter().map(|(t, a)| (t.mul(m), a * c)).peekable();
        while i < self.terms.len() {
            let Some(qt) = qi.peek() else { break };
            match order.cmp(&self.terms[i].0, &qt.0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (t, a) = qi.next().unwrap();
                    out.push((t, -a));
                }
                Ordering::Equal => {
                    let (t, a) = qi.next().unwrap();
                    let s = &self.terms[i].1 - &a;
                    if !s.is_zero() {
                        out.push((t, s));
                    }
                    i += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(qi.map(|(t, a)| (t, -a)));
        Polynomial::from_sorted_terms(&self.ring, out)
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        assert!(same_ring(&self.ring, &other.ring), "polynomials over different rings");
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let neg = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), neg(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), neg(c))));
        Polynomial::from_sorted_terms(&self.ring, out)
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return Ok(large.mul_term(m, c));
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), c1 * c2));
            }
        }
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Re-expresses the polynomial in a ring with the same variables (possibly
    /// another order).
    pub fn to_ring(&self, ring: &RingRef) -> Polynomial {
        assert!(self.ring.same_variables(ring), "variable sets differ");
        if Arc::ptr_eq(&self.ring, ring) {
            return self.clone();
        }
        if self.ring.order() == ring.order() {
            return Polynomial {
                ring: ring.clone(),
                terms: self.terms.clone(),
            };
        }
        Polynomial::from_terms(ring, self.terms.clone())
    }

    /// Moves the polynomial into `ring`, where variable `i` of `self` becomes
    /// variable `map[i]` of the target.
    pub fn embed(&self, ring: &RingRef, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars());
        let mut inverse = vec![None; ring.nvars()];
        for (i, &t) in map.iter().enumerate() {
            inverse[t] = Some(i);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.remap(ring.nvars(), &inverse), c.clone())).collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Moves the polynomial into `ring`, where slot `i` of each target
    /// monomial takes the exponent of source variable `slots[i]` (`None` gives
    /// zero). Source variables not listed are dropped, so callers only use this
    /// on polynomials free of them.
    pub fn remap_into(&self, ring: &RingRef, slots: &[Option<usize>]) -> Polynomial {
        assert_eq!(slots.len(), ring.nvars());
        let terms = self.terms.iter().map(|(m, c)| (m.remap(ring.nvars(), slots), c.clone())).collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Substitutes `images[i]` for variable `i`; all images share one ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars());
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        let mut acc = Polynomial::zero(&target);
        // Cache powers per variable since the same exponents recur.
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = &powers[v][powers[v].len() - 1] * &images[v];
                    powers[v].push(next);
                }
                t = &t * &powers[v][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// `self / g` when `g` divides `self` exactly.
    pub fn divide_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        assert!(!g.is_zero(), "division by zero polynomial");
        let mut rest = self.clone();
        let mut quotient = Vec::new();
        while !rest.is_zero() {
            let q = rest.lm().try_div(g.lm())?;
            let c = rest.lc() / g.lc();
            rest = rest.sub_mul_term(&c, &q, g);
            quotient.push((q, c));
        }
        Some(Polynomial::from_sorted_terms(&self.ring, quotient))
    }

    /// Drops every term of total degree `>= bound`.
    pub fn truncate_degree(&self, bound: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|t| t.0.degree() < bound).cloned().collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Keeps only terms satisfying the predicate.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        let terms = self.terms.iter().filter(|t| keep(&t.0)).cloned().collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            if factors.is_empty() {
                s.push_str(&abs.to_pair_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_pair_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_variables(&other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(self.ring.names()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomials over different rings")
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
