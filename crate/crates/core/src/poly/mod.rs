//! Exact polynomial arithmetic over the rationals.

mod catalan;
mod monomial;
mod order;
mod parse;
mod polynomial;

pub use catalan::{catalan, catalan_truncated_generating_poly, CatalanSeries};
pub use monomial::{monomials_of_degree, Monomial, INLINE_VARS};
pub use order::{InnerOrder, MonomialOrder, OrderKind};
pub use parse::parse_polynomial;
pub use polynomial::{PolyRing, Polynomial, RingRef, Term};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different variable sets or orders")]
    RingMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// Deletes every term whose exponent in one of `vars` is at least `n`, i.e.
/// reduces modulo the monomial ideal generated by the `n`-th powers of `vars`.
pub fn mod_monomial_power(p: &Polynomial, vars: &[usize], n: u16) -> Result<Polynomial, PolyError> {
    assert!(n >= 1, "power must be positive");
    if let Some(&bad) = vars.iter().find(|&&v| v >= p.nvars()) {
        return Err(PolyError::UnknownVariable(format!("#{bad}")));
    }
    Ok(p.filter_terms(|m| vars.iter().all(|&v| m.exponent(v) < n)))
}

/// As [`mod_monomial_power`], naming the variables.
pub fn mod_monomial_power_named(p: &Polynomial, vars: &[&str], n: u16) -> Result<Polynomial, PolyError> {
    let idx = vars
        .iter()
        .map(|name| p.ring().index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    mod_monomial_power(p, &idx, n)
}
