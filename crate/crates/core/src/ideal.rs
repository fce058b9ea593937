//! Ideals of the ambient polynomial ring and the usual constructions on them.

use std::sync::OnceLock;

use thiserror::Error;

use crate::groebner::{buchberger_in, homogenize, BuchbergerOptions, GroebnerBasis, GroebnerError};
use crate::hilbert::HilbertSeries;
use crate::poly::{InnerOrder, Monomial, MonomialOrder, OrderKind, PolyRing, Polynomial, RingRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("ideals live in different ambient rings")]
    AmbientMismatch,
    #[error("cannot take a colon by the zero polynomial")]
    ZeroDivisor,
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("the quotient is not finite-dimensional")]
    NotZeroDimensional,
    #[error("malformed ring map: {0}")]
    MalformedMap(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// An ideal given by generators, with a lazily computed reduced basis in the
/// ring's own order.
#[derive(Clone)]
pub struct Ideal {
    ring: RingRef,
    generators: Vec<Polynomial>,
    gb: OnceLock<GroebnerBasis>,
}

impl Ideal {
    pub fn new(ring: &RingRef, generators: Vec<Polynomial>) -> Self {
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.to_ring(ring))
            .collect();
        Ideal {
            ring: ring.clone(),
            generators,
            gb: OnceLock::new(),
        }
    }

    pub fn zero(ring: &RingRef) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn unit(ring: &RingRef) -> Self {
        Self::new(ring, vec![Polynomial::one(ring)])
    }

    /// The ideal of all variables.
    pub fn maximal(ring: &RingRef) -> Self {
        Self::new(ring, (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect())
    }

    /// The k-th power of the maximal ideal, generated by all degree-k monomials.
    pub fn maximal_power(ring: &RingRef, k: u32) -> Self {
        let gens = crate::poly::monomials_of_degree(ring.nvars(), k)
            .into_iter()
            .map(|m| Polynomial::monomial(ring, m, crate::Rational::one()))
            .collect();
        Self::new(ring, gens)
    }

    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<Self, crate::poly::PolyError> {
        let gens = gens
            .iter()
            .map(|s| crate::poly::parse_polynomial(ring, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(ring, gens))
    }

    fn with_gb(ring: &RingRef, gb: GroebnerBasis) -> Self {
        let generators = gb.generators().to_vec();
        let cell = OnceLock::new();
        let _ = cell.set(gb);
        Ideal {
            ring: ring.clone(),
            generators,
            gb: cell,
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Reduced Groebner basis in the ring's order.
    pub fn gb(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| {
            buchberger_in(&self.ring, &self.generators, BuchbergerOptions::default())
                .expect("generators share the ideal's ring")
        })
    }

    /// The reduced basis as a new ideal (canonical generators).
    pub fn reduced(&self) -> Ideal {
        Ideal::with_gb(&self.ring, self.gb().clone())
    }

    pub fn reduced_generators(&self) -> &[Polynomial] {
        self.gb().generators()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant()) || self.gb().is_unit()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        f.is_zero() || self.gb().contains(f)
    }

    /// Whether `other` is contained in `self`.
    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        self.gb().contains_all(other.generators())
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.ring.same_variables(&other.ring) && self.contains_ideal(other) && other.contains_ideal(self)
    }

    /// Re-expresses the ideal in a ring with the same variables.
    pub fn to_ring(&self, ring: &RingRef) -> Ideal {
        Ideal::new(ring, self.generators.clone())
    }

    fn check(&self, other: &Ideal) -> Result<(), IdealError> {
        if self.ring.same_variables(&other.ring) {
            Ok(())
        } else {
            Err(IdealError::AmbientMismatch)
        }
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Ideal::new(&self.ring, gens))
    }

    pub fn add_generators(&self, extra: &[Polynomial]) -> Ideal {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a * b);
            }
        }
        Ok(Ideal::new(&self.ring, gens))
    }

    pub fn power(&self, k: u32) -> Ideal {
        assert!(k >= 1, "power must be positive");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.product(self).expect("same ring");
            // Keep the generator list small.
            acc = acc.reduced();
        }
        acc
    }

    /// `I ∩ J` by eliminating `t` from `t I + (1 - t) J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let ext = Extension::new(&self.ring, 1);
        let t = ext.extra_var(0);
        let one_minus_t = &Polynomial::one(&ext.ring) - &t;
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(&t * &ext.lift(g));
        }
        for g in &other.generators {
            gens.push(&one_minus_t * &ext.lift(g));
        }
        Ok(ext.eliminate_extra(&gens))
    }

    /// `I : g`.
    pub fn colon(&self, g: &Polynomial) -> Result<Ideal, IdealError> {
        if g.is_zero() {
            return Err(IdealError::ZeroDivisor);
        }
        let g = g.to_ring(&self.ring);
        if g.is_constant() {
            return Ok(self.clone());
        }
        if g.is_monomial() {
            return Ok(self.colon_monomial(g.lm()));
        }
        if self.contains(&g) {
            return Ok(Ideal::unit(&self.ring));
        }
        let principal = Ideal::new(&self.ring, vec![g.clone()]);
        let meet = self.intersect(&principal)?;
        let gens = meet
            .generators()
            .iter()
            .map(|h| h.divide_exact(&g).expect("intersection lies in (g)"))
            .collect();
        Ok(Ideal::new(&self.ring, gens))
    }

    /// `I : x^a` without elimination. For a homogeneous ideal and a reverse
    /// lexicographic basis with `x_i` last, dividing every basis element by
    /// the largest power of `x_i` it allows (up to `a_i`) gives a basis of
    /// `I : x_i^{a_i}`. The generators are homogenized first and the result
    /// dehomogenized at the end; setting the new variable to 1 commutes with
    /// colons by monomials, so the homogenized ideal need not be saturated.
    pub fn colon_monomial(&self, m: &Monomial) -> Ideal {
        let ring = &self.ring;
        let n = ring.nvars();
        if m.is_one() {
            return self.clone();
        }
        let mut names: Vec<String> = ring.names().to_vec();
        names.push("_h".to_string());
        let hring = PolyRing::new(&names, MonomialOrder::grevlex());
        let mut cur: Vec<Polynomial> = self.generators.iter().filter(|g| !g.is_zero()).map(|g| homogenize(g, &hring)).collect();
        // Smallest variable first: its basis is the closest to a plain
        // grevlex one, and later steps start from a smaller ideal.
        for v in (0..n).rev() {
            let a = m.exponent(v);
            if a == 0 {
                continue;
            }
            let mut perm: Vec<usize> = (0..=n).filter(|&k| k != v).collect();
            perm.push(v);
            let vring = hring.with_order(MonomialOrder::grevlex().with_permutation(perm));
            let gb = buchberger_in(&vring, &cur, BuchbergerOptions::default()).expect("same variables");
            cur = gb
                .generators()
                .iter()
                .map(|g| {
                    let k = g.terms().iter().map(|(t, _)| t.exponent(v)).min().unwrap_or(0).min(a);
                    let d = Polynomial::monomial(&vring, Monomial::variable(n + 1, v, k), crate::Rational::one());
                    g.divide_exact(&d).expect("a common factor")
                })
                .collect();
        }
        let slots: Vec<Option<usize>> = (0..n).map(Some).collect();
        let gens = cur.iter().map(|g| g.remap_into(ring, &slots)).collect();
        Ideal::new(ring, gens)
    }

    /// `I : (g_1 ... g_k)`, one factor at a time.
    pub fn colon_by_factors(&self, factors: &[Polynomial]) -> Result<Ideal, IdealError> {
        let mut acc = self.clone();
        for g in factors {
            if acc.is_unit() {
                break;
            }
            acc = acc.colon(g)?.reduced();
        }
        Ok(acc)
    }

    /// `I : J`, the intersection of the colons by the generators of `J`.
    pub fn colon_ideal(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        let mut acc: Option<Ideal> = None;
        for g in other.generators() {
            let c = self.colon(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// `I : g^∞` and the first exponent `k` with `I : g^k = I : g^(k+1)`.
    pub fn saturate(&self, g: &Polynomial) -> Result<(Ideal, u32), IdealError> {
        let mut cur = self.colon(g)?;
        let mut k = 1;
        loop {
            let next = cur.colon(g)?;
            if next.equals(&cur) {
                return Ok((cur.reduced(), k));
            }
            cur = next;
            k += 1;
        }
    }

    /// `I ∩ K[remaining variables]`, returned in the same ring.
    pub fn eliminate(&self, drop: &[usize]) -> Ideal {
        if drop.is_empty() {
            return self.clone();
        }
        let n = self.ring.nvars();
        let mut perm: Vec<usize> = drop.to_vec();
        perm.extend((0..n).filter(|v| !drop.contains(v)));
        let order = MonomialOrder::with_kind(OrderKind::Block {
            elim: drop.len(),
            inner: InnerOrder::Grevlex,
        })
        .with_permutation(perm);
        let er = self.ring.with_order(order);
        let gb = buchberger_in(&er, &self.generators, BuchbergerOptions::default()).expect("same variables");
        let gens = gb
            .generators()
            .iter()
            .filter(|g| drop.iter().all(|&v| !g.uses_variable(v)))
            .map(|g| g.to_ring(&self.ring))
            .collect();
        Ideal::new(&self.ring, gens)
    }

    /// Krull dimension of the quotient: the largest set of variables
    /// containing the support of no leading monomial.
    pub fn krull_dim(&self) -> Result<usize, IdealError> {
        if self.is_unit() {
            return Err(IdealError::UnitIdeal);
        }
        let n = self.ring.nvars();
        assert!(n <= 20, "too many variables for subset search");
        let supports: Vec<u32> = self
            .gb()
            .generators()
            .iter()
            .map(|g| {
                let mut s = 0u32;
                for (i, &e) in g.lm().exponents().iter().enumerate() {
                    if e > 0 {
                        s |= 1 << i;
                    }
                }
                s
            })
            .collect();
        let mut best = 0;
        for set in 0u32..(1u32 << n) {
            let size = set.count_ones() as usize;
            if size > best && supports.iter().all(|&s| s & !set != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    /// Hilbert series of the quotient by the leading-monomial ideal, which
    /// the quotient by the ideal shares in the affine (non-graded) sense.
    pub fn lead_hilbert_series(&self) -> HilbertSeries {
        let lms: Vec<Monomial> = self.gb().leading_monomials();
        HilbertSeries::of_monomial_ideal(self.ring.nvars(), &lms)
    }

    /// Whether every variable has a pure power among the leading monomials.
    pub fn is_zero_dimensional(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let lms = self.gb().leading_monomials();
        (0..self.ring.nvars()).all(|v| lms.iter().any(|m| m.exponent(v) > 0 && m.degree() == m.exponent(v) as u32))
    }

    /// `dim_K K[x]/I`, the number of standard monomials.
    pub fn vecspace_dim(&self) -> Result<u64, IdealError> {
        if !self.is_zero_dimensional() {
            return Err(IdealError::NotZeroDimensional);
        }
        if self.is_unit() {
            return Ok(0);
        }
        Ok(self.lead_hilbert_series().total().expect("zero-dimensional"))
    }

    /// The standard monomials of a zero-dimensional ideal.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>, IdealError> {
        if !self.is_zero_dimensional() {
            return Err(IdealError::NotZeroDimensional);
        }
        let lms = self.gb().leading_monomials();
        let n = self.ring.nvars();
        let mut out = Vec::new();
        if self.is_unit() {
            return Ok(out);
        }
        let mut stack = vec![Monomial::one(n)];
        let mut seen = std::collections::HashSet::new();
        while let Some(m) = stack.pop() {
            if !seen.insert(m.clone()) || lms.iter().any(|l| l.divides(&m)) {
                continue;
            }
            for v in 0..n {
                stack.push(m.mul(&Monomial::variable(n, v, 1)));
            }
            out.push(m);
        }
        let order = self.ring.order().clone();
        out.sort_by(|a, b| order.cmp(a, b));
        Ok(out)
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// The ambient ring with extra variables placed first and eliminated by a
/// block order.
pub(crate) struct Extension {
    pub ring: RingRef,
    base: RingRef,
    extra: usize,
}

impl Extension {
    pub fn new(base: &RingRef, extra: usize) -> Self {
        let mut names: Vec<String> = (0..extra).map(|i| format!("_t{i}")).collect();
        names.extend(base.names().iter().cloned());
        let ring = PolyRing::new(&names, MonomialOrder::block(extra));
        Extension {
            ring,
            base: base.clone(),
            extra,
        }
    }

    pub fn extra_var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ring, i)
    }

    pub fn lift(&self, p: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.base.nvars()).map(|i| i + self.extra).collect();
        p.embed(&self.ring, &map)
    }

    pub fn project(&self, p: &Polynomial) -> Polynomial {
        let slots: Vec<Option<usize>> = (0..self.base.nvars()).map(|i| Some(i + self.extra)).collect();
        p.remap_into(&self.base, &slots)
    }

    pub fn eliminate_extra(&self, gens: &[Polynomial]) -> Ideal {
        let gb = buchberger_in(&self.ring, gens, BuchbergerOptions::default()).expect("same variables");
        let kept = gb
            .generators()
            .iter()
            .filter(|g| (0..self.extra).all(|v| !g.uses_variable(v)))
            .map(|g| self.project(g))
            .collect();
        Ideal::new(&self.base, kept)
    }
}

/// A ring map `K[source]/I_s -> K[target]/I_t` given by the images of the
/// source variables.
#[derive(Clone, Debug)]
pub struct RingMapPresentation {
    source: RingRef,
    source_relations: Ideal,
    target: RingRef,
    target_relations: Ideal,
    images: Vec<Polynomial>,
}

impl RingMapPresentation {
    pub fn new(
        source_relations: Ideal,
        target_relations: Ideal,
        images: Vec<Polynomial>,
    ) -> Result<Self, IdealError> {
        let source = source_relations.ring().clone();
        let target = target_relations.ring().clone();
        if images.len() != source.nvars() {
            return Err(IdealError::MalformedMap(format!(
                "{} images for {} source variables",
                images.len(),
                source.nvars()
            )));
        }
        if images.iter().any(|p| !p.ring().same_variables(&target)) {
            return Err(IdealError::MalformedMap("an image is not in the target ring".into()));
        }
        let images: Vec<Polynomial> = images.into_iter().map(|p| p.to_ring(&target)).collect();
        for rel in source_relations.generators() {
            let img = rel.substitute(&images);
            if !target_relations.contains(&img) {
                return Err(IdealError::MalformedMap(format!("relation {rel} does not map into the target relations")));
            }
        }
        Ok(RingMapPresentation {
            source,
            source_relations,
            target,
            target_relations,
            images,
        })
    }

    pub fn source(&self) -> &RingRef {
        &self.source
    }

    pub fn target(&self) -> &RingRef {
        &self.target
    }

    pub fn source_relations(&self) -> &Ideal {
        &self.source_relations
    }

    pub fn target_relations(&self) -> &Ideal {
        &self.target_relations
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Image of a source polynomial.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        p.to_ring(&self.source).substitute(&self.images)
    }

    /// Basis of `target relations + extra + (s_i - image_i)` in the graph ring,
    /// target variables first and eliminated.
    fn graph_basis(&self, extra: &[Polynomial]) -> Result<GroebnerBasis, IdealError> {
        let nt = self.target.nvars();
        let mut names: Vec<String> = self.target.names().iter().map(|n| format!("_{n}")).collect();
        names.extend(self.source.names().iter().cloned());
        let ring = PolyRing::new(&names, MonomialOrder::block(nt));
        let tmap: Vec<usize> = (0..nt).collect();
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in self.target_relations.generators().iter().chain(extra) {
            gens.push(g.embed(&ring, &tmap));
        }
        for (i, img) in self.images.iter().enumerate() {
            gens.push(&Polynomial::var(&ring, nt + i) - &img.embed(&ring, &tmap));
        }
        Ok(buchberger_in(&ring, &gens, BuchbergerOptions::default())?)
    }

    /// Preimage of an ideal of the target (relations included), returned with
    /// the source relations adjoined.
    pub fn contract(&self, ideal: &Ideal) -> Result<Ideal, IdealError> {
        if !ideal.ring().same_variables(&self.target) {
            return Err(IdealError::AmbientMismatch);
        }
        let nt = self.target.nvars();
        let ns = self.source.nvars();
        let gb = self.graph_basis(ideal.generators())?;
        let slots: Vec<Option<usize>> = (0..ns).map(|i| Some(nt + i)).collect();
        let kept: Vec<Polynomial> = gb
            .generators()
            .iter()
            .filter(|g| (0..nt).all(|v| !g.uses_variable(v)))
            .map(|g| g.remap_into(&self.source, &slots))
            .collect();
        Ok(Ideal::new(&self.source, kept).sum(&self.source_relations)?)
    }

    /// Whether each target element lies in the image of the map.
    pub fn in_image(&self, elements: &[Polynomial]) -> Result<Vec<bool>, IdealError> {
        let nt = self.target.nvars();
        let gb = self.graph_basis(&[])?;
        let tmap: Vec<usize> = (0..nt).collect();
        Ok(elements
            .iter()
            .map(|s| {
                let nf = gb.reduce(&s.to_ring(&self.target).embed(gb.ring(), &tmap));
                (0..nt).all(|v| !nf.uses_variable(v))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> RingRef {
        PolyRing::new(vars, MonomialOrder::grevlex())
    }

    fn id(r: &RingRef, g: &[&str]) -> Ideal {
        Ideal::parse(r, g).unwrap()
    }

    #[test]
    fn basic_constructions() {
        let r = ring(&["x", "y"]);
        assert!(id(&r, &["x"]).sum(&id(&r, &["y"])).unwrap().equals(&id(&r, &["x", "y"])));
        assert!(id(&r, &["x"]).product(&id(&r, &["y"])).unwrap().equals(&id(&r, &["x*y"])));
        let m3 = id(&r, &["x", "y"]).power(3);
        assert_eq!(m3.reduced_generators().len(), 4);
        assert_eq!(m3.vecspace_dim().unwrap(), 6);
    }

    #[test]
    fn intersections_and_colons() {
        let r = ring(&["x", "y"]);
        assert!(id(&r, &["x"]).intersect(&id(&r, &["y"])).unwrap().equals(&id(&r, &["x*y"])));
        assert!(id(&r, &["x^2"]).colon(&crate::poly::parse_polynomial(&r, "x").unwrap()).unwrap().equals(&id(&r, &["x"])));
        assert!(id(&r, &["x*y"]).colon(&crate::poly::parse_polynomial(&r, "x").unwrap()).unwrap().equals(&id(&r, &["y"])));
        let (sat, k) = id(&r, &["x^2*y"]).saturate(&crate::poly::parse_polynomial(&r, "y").unwrap()).unwrap();
        assert!(sat.equals(&id(&r, &["x^2"])));
        assert_eq!(k, 1);
    }

    #[test]
    fn elimination_of_the_cusp() {
        let r = ring(&["t", "x", "y"]);
        let e = id(&r, &["x - t^2", "y - t^3"]).eliminate(&[0]);
        assert!(e.equals(&id(&r, &["x^3 - y^2"])));
    }

    #[test]
    fn dimensions() {
        let r = ring(&["x", "y", "u", "v"]);
        assert_eq!(Ideal::zero(&r).krull_dim().unwrap(), 4);
        assert_eq!(id(&r, &["x*y - u*x^2 - v*y^2"]).krull_dim().unwrap(), 3);
        let r2 = ring(&["x", "y"]);
        assert_eq!(id(&r2, &["x^2", "y^3"]).vecspace_dim().unwrap(), 6);
        assert_eq!(id(&r2, &["x", "y"]).krull_dim().unwrap(), 0);
        assert!(id(&r2, &["x"]).vecspace_dim().is_err());
        assert!(Ideal::unit(&r2).krull_dim().is_err());
    }

    #[test]
    fn contraction_along_a_square() {
        let src = ring(&["a"]);
        let tgt = ring(&["t"]);
        let map = RingMapPresentation::new(
            Ideal::zero(&src),
            Ideal::zero(&tgt),
            vec![crate::poly::parse_polynomial(&tgt, "t^2").unwrap()],
        )
        .unwrap();
        let c = map.contract(&id(&tgt, &["t^2"])).unwrap();
        assert!(c.equals(&id(&src, &["a"])));
        let t = |s: &str| crate::poly::parse_polynomial(&tgt, s).unwrap();
        assert_eq!(map.in_image(&[t("t^4 + 1"), t("t^3"), t("t")]).unwrap(), vec![true, false, false]);
    }
}
