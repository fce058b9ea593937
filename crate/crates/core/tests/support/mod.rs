//! Oracles shared by the integration tests. Nothing here calls the Groebner
//! machinery: every answer comes from exact row reduction over spans of
//! monomial multiples, or from counting.

#![allow(dead_code)]

use std::collections::BTreeMap;

use limclose_core::poly::{monomials_of_degree, Monomial};
use limclose_core::{Polynomial, Rational};

pub type Vector = BTreeMap<Vec<u16>, Rational>;

pub fn to_vector(p: &Polynomial) -> Vector {
    p.terms().iter().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

/// Row echelon form keyed by pivot (the largest key of each row).
#[derive(Default)]
pub struct Echelon {
    rows: BTreeMap<Vec<u16>, Vector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Vector) -> Vector {
        let mut cursor: Option<Vec<u16>> = None;
        loop {
            let next = match &cursor {
                None => v.keys().rev().find(|k| self.rows.contains_key(*k)).cloned(),
                Some(c) => v.range(..=c.clone()).rev().map(|(k, _)| k).find(|k| self.rows.contains_key(*k)).cloned(),
            };
            let Some(k) = next else { return v };
            let c = v[&k].clone();
            for (key, coeff) in &self.rows[&k] {
                let e = v.entry(key.clone()).or_insert_with(Rational::zero);
                *e -= &(&c * coeff);
                if e.is_zero() {
                    v.remove(key);
                }
            }
            cursor = Some(k);
        }
    }

    /// Adds a vector; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, v: Vector) -> bool {
        let v = self.reduce(v);
        let Some((pivot, lead)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        let row: Vector = v.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, v: Vector) -> bool {
        self.reduce(v).is_empty()
    }
}

pub fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
    (0..=degree).flat_map(|d| monomials_of_degree(nvars, d)).collect()
}

fn times(m: &Monomial, p: &Polynomial) -> Polynomial {
    p.mul_term(m, &Rational::one())
}

/// Span of `m * g` over the generators and all monomials `m` of degree at
/// most `cofactor_degree`.
pub fn bounded_span(gens: &[Polynomial], cofactor_degree: u32) -> Echelon {
    let mut e = Echelon::new();
    let Some(first) = gens.first() else { return e };
    for m in monomials_up_to(first.nvars(), cofactor_degree) {
        for g in gens {
            e.insert(to_vector(&times(&m, g)));
        }
    }
    e
}

/// Whether `f = Σ h_i g_i` with `deg h_i <= cofactor_degree`.
pub fn bounded_member(f: &Polynomial, gens: &[Polynomial], cofactor_degree: u32) -> bool {
    if f.is_zero() {
        return true;
    }
    bounded_span(gens, cofactor_degree).contains(to_vector(f))
}

/// Homogeneous component of degree `d` of the ideal generated by
/// homogeneous `gens`: the span of `m * g` with `deg m + deg g = d`.
pub fn graded_piece(gens: &[Polynomial], nvars: usize, d: u32) -> Echelon {
    let mut e = Echelon::new();
    for g in gens {
        let dg = g.total_degree();
        if dg > d {
            continue;
        }
        for m in monomials_of_degree(nvars, d - dg) {
            e.insert(to_vector(&times(&m, g)));
        }
    }
    e
}

/// Arithmetic in `K[x]/M` for a monomial ideal `M` with finitely many
/// standard monomials; `standard` decides membership in the complement.
pub struct TruncatedQuotient<F: Fn(&Monomial) -> bool> {
    pub nvars: usize,
    /// Degree bound for standard monomials.
    pub max_degree: u32,
    pub standard: F,
}

impl<F: Fn(&Monomial) -> bool> TruncatedQuotient<F> {
    pub fn basis(&self) -> Vec<Monomial> {
        monomials_up_to(self.nvars, self.max_degree).into_iter().filter(|m| (self.standard)(m)).collect()
    }

    pub fn project(&self, p: &Polynomial) -> Vector {
        p.terms()
            .iter()
            .filter(|(m, _)| (self.standard)(m))
            .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
            .collect()
    }

    /// The image of the ideal generated by `gens`.
    pub fn ideal_image(&self, gens: &[Polynomial]) -> Echelon {
        let mut e = Echelon::new();
        for m in self.basis() {
            for g in gens {
                e.insert(self.project(&times(&m, g)));
            }
        }
        e
    }

    /// `dim K[x]/(M + (gens))`.
    pub fn quotient_dim(&self, gens: &[Polynomial]) -> usize {
        self.basis().len() - self.ideal_image(gens).rank()
    }

    pub fn member(&self, f: &Polynomial, gens: &[Polynomial]) -> bool {
        self.ideal_image(gens).contains(self.project(f))
    }
}

/// Elements of total degree at most `bound` of the additive semigroup
/// generated by `gens`.
pub fn semigroup(gens: &[(u32, u32)], bound: u32) -> Vec<(u32, u32)> {
    let mut seen = vec![(0u32, 0u32)];
    let mut frontier = vec![(0u32, 0u32)];
    while let Some((i, j)) = frontier.pop() {
        for &(a, b) in gens {
            let p = (i + a, j + b);
            if p.0 + p.1 <= bound && !seen.contains(&p) {
                seen.push(p);
                frontier.push(p);
            }
        }
    }
    seen.sort();
    seen
}
