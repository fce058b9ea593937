//! The local ring of `K[x]/J` at the origin: membership, containment,
//! length and dimension, all decided by polynomial computations.

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::groebner::{buchberger_in, homogenize, BuchbergerOptions};
use crate::hilbert::HilbertSeries;
use crate::ideal::{Ideal, IdealError};
use crate::poly::{Monomial, MonomialOrder, OrderKind, PolyRing, Polynomial, RingRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("the ideal is not primary to the maximal ideal locally")]
    NotMPrimary,
    #[error("the ideal is the unit ideal locally")]
    LocallyUnit,
    #[error("`{0}` is a unit at the origin")]
    NotInMaximalIdeal(String),
    #[error("the defining ideal is not contained in the maximal ideal")]
    DefiningIdealNotInMaximal,
    #[error("value undetermined below the truncation cap {0}")]
    Undetermined(u32),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalOptions {
    /// Largest truncation order used by explicit `m^N` computations.
    pub trunc_max: u32,
    /// Number of consecutive equal chain terms that count as stable.
    pub stab_window: usize,
    /// Largest chain index tried by stabilization loops.
    pub n_max: u32,
}

impl Default for LocalOptions {
    fn default() -> Self {
        LocalOptions {
            trunc_max: 64,
            stab_window: 2,
            n_max: 12,
        }
    }
}

struct Inner {
    ring: RingRef,
    defining: Ideal,
    options: LocalOptions,
    dim: OnceLock<usize>,
}

/// `R = (K[x]/J)` localized at `m = (x)`. Cheap to clone.
#[derive(Clone)]
pub struct LocalRingContext(Arc<Inner>);

/// Representatives of elements of the maximal ideal of a local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    entries: Vec<Polynomial>,
}

impl Sequence {
    pub fn new(entries: Vec<Polynomial>) -> Self {
        Sequence { entries }
    }

    pub fn parse(ring: &RingRef, entries: &[&str]) -> Result<Self, crate::poly::PolyError> {
        let entries = entries
            .iter()
            .map(|s| crate::poly::parse_polynomial(ring, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sequence { entries })
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `x^[n] = (x_1^n, ..., x_r^n)`.
    pub fn power(&self, n: u32) -> Sequence {
        Sequence {
            entries: self.entries.iter().map(|x| x.pow(n)).collect(),
        }
    }

    /// `x_1 ... x_r`.
    pub fn product(&self, ring: &RingRef) -> Polynomial {
        self.entries.iter().fold(Polynomial::one(ring), |acc, x| &acc * x)
    }

    pub fn prefix(&self, j: usize) -> Sequence {
        Sequence {
            entries: self.entries[..j].to_vec(),
        }
    }

    pub fn suffix(&self, j: usize) -> Sequence {
        Sequence {
            entries: self.entries[j..].to_vec(),
        }
    }

    /// The ideal generated by the entries (without the defining relations).
    pub fn ideal(&self, ring: &RingRef) -> Ideal {
        Ideal::new(ring, self.entries.clone())
    }
}

impl std::fmt::Display for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl LocalRingContext {
    pub fn new(defining: Ideal, options: LocalOptions) -> Result<Self, LocalError> {
        if defining.generators().iter().any(|g| !g.constant_coeff().is_zero()) {
            return Err(LocalError::DefiningIdealNotInMaximal);
        }
        Ok(LocalRingContext(Arc::new(Inner {
            ring: defining.ring().clone(),
            defining,
            options,
            dim: OnceLock::new(),
        })))
    }

    /// Parses variable names and relations (grevlex order).
    pub fn from_strs(vars: &[&str], relations: &[&str]) -> Result<Self, LocalError> {
        let ring = PolyRing::new(vars, MonomialOrder::grevlex());
        let j = Ideal::parse(&ring, relations).map_err(|e| LocalError::NotInMaximalIdeal(e.to_string()))?;
        Self::new(j, LocalOptions::default())
    }

    pub fn with_options(&self, options: LocalOptions) -> Self {
        LocalRingContext(Arc::new(Inner {
            ring: self.0.ring.clone(),
            defining: self.0.defining.clone(),
            options,
            dim: OnceLock::new(),
        }))
    }

    /// The local ring of `R / N`.
    pub fn quotient(&self, extra: &Ideal) -> Result<Self, LocalError> {
        let j = self.0.defining.sum(extra)?;
        Self::new(j, self.0.options)
    }

    pub fn ring(&self) -> &RingRef {
        &self.0.ring
    }

    pub fn defining_ideal(&self) -> &Ideal {
        &self.0.defining
    }

    pub fn options(&self) -> &LocalOptions {
        &self.0.options
    }

    pub fn nvars(&self) -> usize {
        self.0.ring.nvars()
    }

    pub fn poly(&self, s: &str) -> Result<Polynomial, crate::poly::PolyError> {
        crate::poly::parse_polynomial(&self.0.ring, s)
    }

    pub fn ideal(&self, gens: &[&str]) -> Result<Ideal, crate::poly::PolyError> {
        Ideal::parse(&self.0.ring, gens)
    }

    pub fn sequence(&self, entries: &[&str]) -> Result<Sequence, crate::poly::PolyError> {
        Sequence::parse(&self.0.ring, entries)
    }

    pub fn maximal_ideal(&self) -> Ideal {
        Ideal::maximal(&self.0.ring)
    }

    /// `I + J`.
    pub fn with_relations(&self, i: &Ideal) -> Ideal {
        i.add_generators(self.0.defining.generators())
    }

    /// `dim R`.
    pub fn dim(&self) -> usize {
        *self.0.dim.get_or_init(|| {
            self.local_dim(&Ideal::zero(&self.0.ring))
                .expect("the defining ideal lies in the maximal ideal")
        })
    }

    /// Every entry must vanish at the origin.
    pub fn check_sequence(&self, x: &Sequence) -> Result<(), LocalError> {
        for e in x.entries() {
            if !e.constant_coeff().is_zero() {
                return Err(LocalError::NotInMaximalIdeal(e.to_string()));
            }
        }
        Ok(())
    }

    /// Whether `f` lies in `I R`.
    pub fn local_member(&self, f: &Polynomial, i: &Ideal) -> bool {
        let k = self.with_relations(i);
        member_in(&k, f)
    }

    /// `I1 R ⊆ I2 R`.
    pub fn local_contains(&self, big: &Ideal, small: &Ideal) -> bool {
        let k = self.with_relations(big);
        if is_locally_unit(&k) {
            return true;
        }
        small.generators().iter().all(|g| member_in(&k, g))
    }

    pub fn local_equal(&self, a: &Ideal, b: &Ideal) -> bool {
        self.local_contains(a, b) && self.local_contains(b, a)
    }

    /// Whether `I R = R`.
    pub fn is_locally_unit(&self, i: &Ideal) -> bool {
        is_locally_unit(&self.with_relations(i))
    }

    /// Hilbert series of the tangent cone of `R / I R`.
    pub fn tangent_cone_series(&self, i: &Ideal) -> HilbertSeries {
        let k = self.with_relations(i);
        let cone = tangent_cone(&k);
        cone.lead_hilbert_series()
    }

    /// `N -> dim_K K[x]/(J + I + m^N)` for `N = 0..=upto`, read off the
    /// tangent cone.
    pub fn truncation_lengths(&self, i: &Ideal, upto: u32) -> Vec<u64> {
        let hs = self.tangent_cone_series(i);
        (0..=upto as usize).map(|n| hs.cumulative(n) as u64).collect()
    }

    /// `dim_K K[x]/(J + I + m^N)` by an explicit Groebner basis.
    pub fn truncation_length_direct(&self, i: &Ideal, n: u32) -> Result<u64, LocalError> {
        if n > self.0.options.trunc_max {
            return Err(LocalError::Undetermined(self.0.options.trunc_max));
        }
        let k = self.with_relations(i).sum(&Ideal::maximal_power(&self.0.ring, n))?;
        Ok(k.vecspace_dim()?)
    }

    /// `ℓ(R / I R)`.
    pub fn local_length(&self, i: &Ideal) -> Result<u64, LocalError> {
        let k = self.with_relations(i);
        if is_locally_unit(&k) {
            return Ok(0);
        }
        if let Some(d) = globally_m_primary_length(&k) {
            return Ok(d);
        }
        let hs = tangent_cone(&k).lead_hilbert_series();
        if hs.dim() == 0 {
            Ok(hs.degree() as u64)
        } else {
            Err(LocalError::NotMPrimary)
        }
    }

    /// `dim R / I R`.
    pub fn local_dim(&self, i: &Ideal) -> Result<usize, LocalError> {
        let k = self.with_relations(i);
        if is_locally_unit(&k) {
            return Err(LocalError::LocallyUnit);
        }
        Ok(tangent_cone(&k).lead_hilbert_series().dim())
    }

    /// A system of parameters: `d` elements generating an `m`-primary ideal.
    pub fn is_sop(&self, x: &Sequence) -> bool {
        if x.len() != self.dim() || self.check_sequence(x).is_err() {
            return false;
        }
        matches!(self.local_dim(&x.ideal(&self.0.ring)), Ok(0))
    }

    /// `I R ⊆ m^k R`.
    pub fn contained_in_m_power(&self, i: &Ideal, k: u32) -> bool {
        assert!(k >= 1);
        // J + m^k is primary to the origin, so global membership decides.
        let target = self.with_relations(&Ideal::maximal_power(&self.0.ring, k));
        i.generators().iter().all(|g| target.contains(g))
    }

    /// Generators of `I` not in `m^k R`, reduced modulo `J + m^k`.
    pub fn witnesses_outside_m_power(&self, i: &Ideal, k: u32) -> Vec<Polynomial> {
        let target = self.with_relations(&Ideal::maximal_power(&self.0.ring, k));
        i.generators()
            .iter()
            .map(|g| target.gb().reduce(g))
            .filter(|r| !r.is_zero())
            .collect()
    }
}

impl std::fmt::Debug for LocalRingContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QQ[{}]/{:?} at origin", self.0.ring.names().join(","), self.0.defining)
    }
}

fn is_locally_unit(k: &Ideal) -> bool {
    k.generators().iter().any(|g| !g.constant_coeff().is_zero())
}

/// `f ∈ K A_m` iff `K : f` has an element that is a unit at the origin.
fn member_in(k: &Ideal, f: &Polynomial) -> bool {
    if f.is_zero() || is_locally_unit(k) {
        return true;
    }
    let nf = k.gb().reduce(f);
    if nf.is_zero() {
        return true;
    }
    if globally_m_primary_length(k).is_some() {
        return false;
    }
    let colon = k.colon(&nf).expect("nonzero");
    colon.generators().iter().any(|g| !g.constant_coeff().is_zero())
}

/// `dim_K A/K` when `A/K` is finite-dimensional and supported only at the
/// origin.
fn globally_m_primary_length(k: &Ideal) -> Option<u64> {
    if !k.is_zero_dimensional() {
        return None;
    }
    let d = k.vecspace_dim().ok()?;
    if d == 0 {
        return Some(0);
    }
    let ring = k.ring();
    let power = u16::try_from(d).ok()?;
    let all_nilpotent = (0..ring.nvars()).all(|v| {
        let p = Polynomial::monomial(ring, Monomial::variable(ring.nvars(), v, power), crate::Rational::one());
        k.gb().contains(&p)
    });
    all_nilpotent.then_some(d)
}

/// The ideal of lowest-degree forms of elements of `k`.
///
/// Homogenizes with a fresh variable `h`, computes a basis under the order
/// "degree, then larger power of `h`", dehomogenizes, and keeps lowest forms;
/// the dehomogenized basis is a standard basis for the local degree order.
pub fn tangent_cone(k: &Ideal) -> Ideal {
    let ring = k.ring();
    if k.generators().iter().all(|g| g.is_homogeneous()) {
        return k.clone();
    }
    let n = ring.nvars();
    let mut names: Vec<String> = ring.names().to_vec();
    names.push("_h".to_string());
    let hring = PolyRing::new(&names, MonomialOrder::with_kind(OrderKind::DegreeThenVar { var: n }));
    let homog: Vec<Polynomial> = k.generators().iter().map(|g| homogenize(g, &hring)).collect();
    let gb = buchberger_in(&hring, &homog, BuchbergerOptions::default()).expect("same ring");
    let slots: Vec<Option<usize>> = (0..n).map(Some).collect();
    let forms = gb
        .generators()
        .iter()
        .map(|g| g.remap_into(ring, &slots).lowest_form())
        .collect();
    Ideal::new(ring, forms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_sees_units() {
        let ctx = LocalRingContext::from_strs(&["x", "y"], &[]).unwrap();
        let x = ctx.poly("x").unwrap();
        assert!(ctx.local_member(&x, &ctx.ideal(&["x"]).unwrap()));
        assert!(!ctx.local_member(&ctx.poly("1").unwrap(), &ctx.ideal(&["x"]).unwrap()));
        assert!(ctx.local_equal(&ctx.ideal(&["(1 + y)*x"]).unwrap(), &ctx.ideal(&["x"]).unwrap()));
        assert!(!ctx.ideal(&["(1 + y)*x"]).unwrap().equals(&ctx.ideal(&["x"]).unwrap()));
        assert!(ctx.local_contains(&ctx.ideal(&["x"]).unwrap(), &ctx.ideal(&["x^2"]).unwrap()));
        assert!(!ctx.local_contains(&ctx.ideal(&["x^2"]).unwrap(), &ctx.ideal(&["x"]).unwrap()));
    }

    #[test]
    fn lengths_and_dimensions() {
        let ctx = LocalRingContext::from_strs(&["x", "y"], &[]).unwrap();
        assert_eq!(ctx.local_length(&ctx.ideal(&["x", "y"]).unwrap()).unwrap(), 1);
        // x (1 - x) has two points; only the origin counts.
        assert_eq!(ctx.local_length(&ctx.ideal(&["x - x^2", "y"]).unwrap()).unwrap(), 1);
        assert_eq!(ctx.local_length(&ctx.ideal(&["x^2 - x^3", "y^2"]).unwrap()).unwrap(), 4);
        assert_eq!(ctx.local_dim(&ctx.ideal(&["x*y + x^3"]).unwrap()).unwrap(), 1);
        assert!(ctx.local_length(&ctx.ideal(&["x"]).unwrap()).is_err());
        assert_eq!(ctx.dim(), 2);
    }

    #[test]
    fn tangent_cone_matches_truncation() {
        let ctx = LocalRingContext::from_strs(&["x", "y", "u", "v"], &["x*y - u*x^2 - v*y^2"]).unwrap();
        let i = ctx.ideal(&["u", "v"]).unwrap();
        let fast = ctx.truncation_lengths(&i, 6);
        for n in 1..=6 {
            assert_eq!(fast[n as usize], ctx.truncation_length_direct(&i, n).unwrap());
        }
        assert_eq!(ctx.local_dim(&i).unwrap(), 1);
        assert_eq!(ctx.dim(), 3);
    }
}
