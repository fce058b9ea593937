use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, PolyError, Polynomial, RingRef};
use crate::rational::Rational;

/// The Catalan numbers `C_0..=C_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalanSeries {
    coefficients: Vec<BigInt>,
}

impl CatalanSeries {
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn last(&self) -> &BigInt {
        self.coefficients.last().expect("series always holds C_0")
    }

    /// Checks `C_0 = 1` and the convolution recurrence for every stored entry.
    pub fn satisfies_recurrence(&self) -> bool {
        let c = &self.coefficients;
        if c.first() != Some(&BigInt::one()) {
            return false;
        }
        (0..c.len().saturating_sub(1)).all(|n| {
            let s: BigInt = (0..=n).map(|i| &c[i] * &c[n - i]).sum();
            s == c[n + 1]
        })
    }
}

pub fn catalan(k: usize) -> CatalanSeries {
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for n in 0..k {
        let mut s = BigInt::zero();
        for i in 0..=n {
            s += &c[i] * &c[n - i];
        }
        c.push(s);
    }
    CatalanSeries { coefficients: c }
}

/// `sum_{i=0}^{k} C_i (u v)^i` in `ring`, where `u`, `v` are variable names.
pub fn catalan_truncated_generating_poly(ring: &RingRef, u: &str, v: &str, k: usize) -> Result<Polynomial, PolyError> {
    let ui = ring.index_of(u).ok_or_else(|| PolyError::UnknownVariable(u.to_string()))?;
    let vi = ring.index_of(v).ok_or_else(|| PolyError::UnknownVariable(v.to_string()))?;
    assert_ne!(ui, vi, "the two variables must differ");
    Ok(truncated_in(ring, ui, vi, k))
}

pub(crate) fn truncated_in(ring: &RingRef, ui: usize, vi: usize, k: usize) -> Polynomial {
    let series = catalan(k);
    let terms = series
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut m = Monomial::one(ring.nvars());
            m.set_exponent(ui, i as u16);
            if vi != ui {
                m.set_exponent(vi, i as u16);
            }
            (m, Rational::from_bigint(c.clone()))
        })
        .collect();
    Polynomial::from_terms(ring, terms)
}
