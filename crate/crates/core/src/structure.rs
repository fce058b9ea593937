//! Structural invariants of a local ring read off from limit closures:
//! the unmixed component, the dimension filtration, Hilbert–Samuel data,
//! the `I`/`J` difference functions and topology scans.
//!
//! Intersections `∩_n (x_1^n, ..., x_j^n)^lim` are approximated by the ideal
//! generated by those reduced generators of the `n`-th closure whose cyclic
//! submodule has dimension below `j`. Every such generator lies in the
//! intersection, so the result is contained in the true value; the loop stops
//! once two consecutive candidates agree locally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ideal::{Ideal, IdealError, RingMapPresentation};
use crate::limclose::{limit_closure, LimitError};
use crate::local::{LocalError, LocalOptions, LocalRingContext, Sequence};
use crate::poly::{monomials_of_degree, Polynomial};
use crate::Rational;

#[derive(Debug, Clone, Error)]
pub enum StructureError {
    #[error("the sequence is not a system of parameters")]
    NotSop,
    #[error("intersection of closures did not stabilize within {0} terms")]
    Unstabilized(u32),
    #[error("generator `{0}` fails the dimension criterion")]
    CriterionFailed(String),
    #[error("the ring is not unmixed; pass to the quotient by its unmixed component first")]
    NotUnmixed,
    #[error("the extension is not suitable: {0}")]
    BadExtension(String),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureOptions {
    /// Largest `n` used in closure intersections.
    pub intersection_max: u32,
    /// Consecutive equal candidates required to stop.
    pub window: usize,
    /// Further systems of parameters tried after the given one: rotations
    /// first, then random perturbations.
    pub retries: u32,
    pub seed: u64,
}

impl Default for StructureOptions {
    fn default() -> Self {
        StructureOptions {
            intersection_max: 8,
            window: 2,
            retries: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum UnmixedMode {
    TheoremA,
    /// Top-dimensional primary components of the defining ideal.
    Assisted(Vec<Ideal>),
    /// Both computations; the result carries the agreement verdict.
    Both(Vec<Ideal>),
}

#[derive(Clone, Debug)]
pub struct UnmixedComponentResult {
    /// Ambient representative with the defining relations adjoined.
    pub component: Ideal,
    pub sequence: Sequence,
    /// Number of `n` values intersected (0 in assisted mode).
    pub intersection_depth: u32,
    pub cross_check: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct DimensionFiltration {
    /// Non-zero levels `D_i` in increasing order, ending with the unit ideal.
    pub chain: Vec<Ideal>,
    pub dims: Vec<usize>,
    /// `∩_n (x_1^n, ..., x_j^n)^lim` for `j = 1..=d`.
    pub intersections: Vec<Ideal>,
    pub sequence: Sequence,
    pub goodness_verified: bool,
    /// Systems of parameters tried, the given one included.
    pub attempts: u32,
}

impl DimensionFiltration {
    /// The level equal to `∩_n (x_1^n, ..., x_j^n)^lim`: the largest `D_i`
    /// with `d_i < j`, or `None` for the zero level.
    pub fn level_for(&self, j: usize) -> Option<&Ideal> {
        self.dims.iter().rposition(|&d| d < j).map(|i| &self.chain[i])
    }
}

#[derive(Clone, Debug)]
pub struct HSReport {
    pub ideal: Ideal,
    /// `ℓ(R/q^k)` for `k = 1..=K`.
    pub values: Vec<u64>,
    pub degree: usize,
    pub multiplicity: Option<u64>,
    pub onset: Option<u32>,
}

impl HSReport {
    /// `d`-th finite differences, indexed by `k = d..=K` with `ℓ(R/q^0) = 0`.
    pub fn differences(&self) -> Vec<(u32, i128)> {
        let d = self.degree;
        let mut vals: Vec<i128> = vec![0];
        vals.extend(self.values.iter().map(|&v| v as i128));
        let mut out = Vec::new();
        for k in d..vals.len() {
            let mut acc = 0i128;
            let mut binom = 1i128;
            for i in 0..=d {
                let term = binom * vals[k - i];
                acc += if i % 2 == 0 { term } else { -term };
                binom = binom * (d - i) as i128 / (i + 1) as i128;
            }
            out.push((k as u32, acc));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IJRow {
    pub n: u32,
    pub length: u64,
    pub multiplicity: u64,
    pub closure_length: u64,
    pub i: i128,
    pub j: i128,
}

#[derive(Clone, Debug)]
pub struct IJTable {
    pub sequence: Sequence,
    pub multiplicity: u64,
    pub rows: Vec<IJRow>,
}

impl IJTable {
    pub fn is_nonnegative(&self) -> bool {
        self.rows.iter().all(|r| r.i >= 0 && r.j >= 0)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].i <= w[1].i && w[0].j <= w[1].j)
    }
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub k: u32,
    /// Least `v` with `(x^[v])^lim ⊆ m^k`, if one was found.
    pub v: Option<u32>,
    pub witness: Option<Polynomial>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScanVerdict {
    EquivalenceEvidence { n0: u32 },
    FailureAt { k: u32, witness: Polynomial },
}

#[derive(Clone, Debug)]
pub struct TopologyScan {
    pub sequence: Sequence,
    pub v_max: u32,
    pub rows: Vec<ScanRow>,
    pub verdict: ScanVerdict,
    pub warnings: Vec<String>,
}

pub const AFFINE_SHADOW_NOTE: &str =
    "computed in the localized affine ring; statements about the completion are not verified";

#[derive(Clone, Debug)]
pub struct TheoremEIdentities {
    /// `ℓ(S/R)`, which is the length of the first local cohomology module.
    pub cohomology_length: u64,
    /// `ℓ(R/(x)^lim) = e - ℓ(H/(x)H)`.
    pub length_identity: bool,
    /// `ℓ((x)^lim/(x)) = ℓ(H_1(x; H))`.
    pub koszul_identity: bool,
}

#[derive(Clone, Debug)]
pub struct CyclicCoverReport {
    pub closure_source: Ideal,
    pub closure_target: Ideal,
    pub contracted: Ideal,
    pub contraction_equal: bool,
    pub length_ideal: u64,
    pub length_closure: u64,
    pub length_target: u64,
    pub multiplicity: Option<u64>,
    /// Present when both rings are graded, the map preserves degree, and
    /// `m S ⊆ R`.
    pub identities: Option<TheoremEIdentities>,
    pub warnings: Vec<String>,
}

fn require_sop(ctx: &LocalRingContext, x: &Sequence) -> Result<(), StructureError> {
    if ctx.is_sop(x) {
        Ok(())
    } else {
        Err(StructureError::NotSop)
    }
}

/// `dim R g` for `g` outside `J`, via `dim R/(J : g)`; `None` when `g = 0` in `R`.
fn cyclic_dim(ctx: &LocalRingContext, g: &Polynomial) -> Result<Option<usize>, StructureError> {
    let zero = Ideal::zero(ctx.ring());
    if ctx.local_member(g, &zero) {
        return Ok(None);
    }
    let colon = ctx.defining_ideal().colon(g)?;
    Ok(Some(ctx.local_dim(&colon)?))
}

fn passes_criterion(ctx: &LocalRingContext, g: &Polynomial, bound: usize) -> Result<bool, StructureError> {
    Ok(cyclic_dim(ctx, g)?.map_or(true, |d| d < bound))
}

/// Dimension of the submodule generated by the ideal, `None` if it is zero.
fn ideal_dim(ctx: &LocalRingContext, i: &Ideal) -> Result<Option<usize>, StructureError> {
    let mut best: Option<usize> = None;
    for g in i.generators() {
        if let Some(d) = cyclic_dim(ctx, g)? {
            best = Some(best.map_or(d, |b| b.max(d)));
        }
    }
    Ok(best)
}

/// `∩_n (x_1^n, ..., x_j^n)^lim` restricted to elements of dimension `< j`.
fn closure_intersection(
    ctx: &LocalRingContext,
    x: &Sequence,
    j: usize,
    opts: &StructureOptions,
) -> Result<(Ideal, u32), StructureError> {
    let ring = ctx.ring();
    let head = x.prefix(j);
    let window = opts.window.max(1);
    let mut run = 0usize;
    let mut prev: Option<Ideal> = None;
    for n in 1..=opts.intersection_max {
        let closure = limit_closure(ctx, &head.power(n))?.closure;
        let mut kept = Vec::new();
        for g in closure.reduced_generators() {
            if passes_criterion(ctx, g, j)? {
                kept.push(g.clone());
            }
        }
        let candidate = ctx.with_relations(&Ideal::new(ring, kept)).reduced();
        run = match &prev {
            Some(p) if ctx.local_equal(p, &candidate) => run + 1,
            _ => 1,
        };
        if run >= window {
            return Ok((candidate, n));
        }
        prev = Some(candidate);
    }
    Err(StructureError::Unstabilized(opts.intersection_max))
}

fn assisted_component(ctx: &LocalRingContext, components: &[Ideal]) -> Result<Ideal, StructureError> {
    let d = ctx.dim();
    let mut acc = Ideal::unit(ctx.ring());
    for c in components {
        let c = c.to_ring(ctx.ring());
        acc = acc.intersect(&c)?;
    }
    let u = ctx.with_relations(&acc).reduced();
    for g in u.generators() {
        if !passes_criterion(ctx, g, d)? {
            return Err(StructureError::CriterionFailed(g.to_string()));
        }
    }
    Ok(u)
}

pub fn unmixed_component(
    ctx: &LocalRingContext,
    x: &Sequence,
    mode: &UnmixedMode,
    opts: &StructureOptions,
) -> Result<UnmixedComponentResult, StructureError> {
    require_sop(ctx, x)?;
    let d = ctx.dim();
    let (component, depth, cross_check) = match mode {
        UnmixedMode::TheoremA => {
            let (u, depth) = closure_intersection(ctx, x, d, opts)?;
            (u, depth, None)
        }
        UnmixedMode::Assisted(comps) => (assisted_component(ctx, comps)?, 0, None),
        UnmixedMode::Both(comps) => {
            let (u, depth) = closure_intersection(ctx, x, d, opts)?;
            let oracle = assisted_component(ctx, comps)?;
            let agree = ctx.local_equal(&u, &oracle);
            (u, depth, Some(agree))
        }
    };
    Ok(UnmixedComponentResult {
        component,
        sequence: x.clone(),
        intersection_depth: depth,
        cross_check,
    })
}

/// For `M = R`, `Ann H^d_m(R)` is the unmixed component; every generator is
/// re-checked against the dimension criterion.
pub fn ann_top_cohomology(
    ctx: &LocalRingContext,
    x: &Sequence,
    opts: &StructureOptions,
) -> Result<Ideal, StructureError> {
    let u = unmixed_component(ctx, x, &UnmixedMode::TheoremA, opts)?.component;
    let d = ctx.dim();
    for g in u.generators() {
        if !passes_criterion(ctx, g, d)? {
            return Err(StructureError::CriterionFailed(g.to_string()));
        }
    }
    Ok(u)
}

/// `D_i ∩ (x_{d_i+1}, ..., x_d) = 0` in `R` for every level below the top.
pub fn is_good_sop(ctx: &LocalRingContext, x: &Sequence, filtration: &DimensionFiltration) -> bool {
    let ring = ctx.ring();
    let zero = Ideal::zero(ring);
    let top = filtration.chain.len().saturating_sub(1);
    filtration.chain[..top].iter().zip(&filtration.dims).all(|(level, &di)| {
        let tail = ctx.with_relations(&x.suffix(di).ideal(ring));
        match level.intersect(&tail) {
            Ok(meet) => ctx.local_contains(&zero, &meet),
            Err(_) => false,
        }
    })
}

fn filtration_candidate(
    ctx: &LocalRingContext,
    x: &Sequence,
    opts: &StructureOptions,
) -> Result<DimensionFiltration, StructureError> {
    let d = ctx.dim();
    let ring = ctx.ring();
    let zero = Ideal::zero(ring);
    let mut intersections = Vec::with_capacity(d);
    let mut chain: Vec<Ideal> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for j in 1..=d {
        let (e, _) = closure_intersection(ctx, x, j, opts)?;
        intersections.push(e.clone());
        if ctx.local_contains(&zero, &e) {
            continue;
        }
        if chain.last().is_some_and(|last| ctx.local_equal(last, &e)) {
            continue;
        }
        let level_dim = ideal_dim(ctx, &e)?.expect("non-zero level");
        chain.push(e);
        dims.push(level_dim);
    }
    chain.push(Ideal::unit(ring));
    dims.push(d);
    Ok(DimensionFiltration {
        chain,
        dims,
        intersections,
        sequence: x.clone(),
        goodness_verified: false,
        attempts: 0,
    })
}

/// `x_i + (random element of m^c)` for every entry.
fn perturb(ctx: &LocalRingContext, x: &Sequence, c: u32, rng: &mut ChaCha8Rng) -> Sequence {
    let ring = ctx.ring();
    let monos = monomials_of_degree(ctx.nvars(), c);
    let entries = x
        .entries()
        .iter()
        .map(|e| {
            let mut p = e.clone();
            for _ in 0..2 {
                let m = monos[rng.gen_range(0..monos.len())].clone();
                let coeff = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                p = &p + &Polynomial::monomial(ring, m, Rational::from_int(coeff));
            }
            p
        })
        .collect();
    Sequence::new(entries)
}

/// Candidate filtration from the closure intersections, verified against the
/// goodness condition; rotations and perturbations of x are tried on failure.
pub fn dimension_filtration(
    ctx: &LocalRingContext,
    x: &Sequence,
    opts: &StructureOptions,
) -> Result<DimensionFiltration, StructureError> {
    require_sop(ctx, x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let d = x.len() as u32;
    let mut first: Option<DimensionFiltration> = None;
    for attempt in 0..=opts.retries {
        // Rotations of x first, then perturbations of slowly growing degree.
        let current = if attempt < d {
            rotate(x, attempt as usize)
        } else {
            let candidate = perturb(ctx, x, 1 + (attempt - d) / 3, &mut rng);
            if !ctx.is_sop(&candidate) {
                continue;
            }
            candidate
        };
        let mut f = filtration_candidate(ctx, &current, opts)?;
        f.attempts = attempt + 1;
        if is_good_sop(ctx, &current, &f) {
            f.goodness_verified = true;
            return Ok(f);
        }
        first.get_or_insert(f);
    }
    Ok(first.expect("the given sequence is always tried"))
}

fn rotate(x: &Sequence, k: usize) -> Sequence {
    let mut e = x.entries().to_vec();
    e.rotate_left(k);
    Sequence::new(e)
}

/// `ℓ(R/q^k)` for `k = 1..=K` and the Samuel multiplicity as the stable
/// `d`-th difference.
pub fn hilbert_samuel(ctx: &LocalRingContext, q: &Ideal, k_max: u32) -> Result<HSReport, StructureError> {
    assert!(k_max >= 1);
    if ctx.is_locally_unit(q) || ctx.local_dim(q)? != 0 {
        return Err(LocalError::NotMPrimary.into());
    }
    let d = ctx.dim();
    let mut values = Vec::with_capacity(k_max as usize);
    let mut power = q.clone();
    for k in 1..=k_max {
        if k > 1 {
            power = ctx.with_relations(&power.product(q)?).reduced();
        }
        values.push(ctx.local_length(&power)?);
    }
    let mut report = HSReport {
        ideal: q.clone(),
        values,
        degree: d,
        multiplicity: None,
        onset: None,
    };
    let diffs = report.differences();
    if diffs.len() >= 2 {
        let last = diffs[diffs.len() - 1].1;
        let start = diffs.iter().rposition(|&(_, v)| v != last).map_or(0, |i| i + 1);
        if diffs.len() - start >= 2 && last > 0 {
            report.multiplicity = Some(last as u64);
            report.onset = Some(diffs[start].0);
        }
    }
    Ok(report)
}

/// `e(x)` from a Hilbert–Samuel table of `(x)` long enough to see `d` stable
/// differences.
pub fn sop_multiplicity(ctx: &LocalRingContext, x: &Sequence) -> Result<u64, StructureError> {
    require_sop(ctx, x)?;
    let q = x.ideal(ctx.ring());
    let mut k_max = ctx.dim() as u32 + 2;
    loop {
        let hs = hilbert_samuel(ctx, &q, k_max)?;
        if let Some(e) = hs.multiplicity {
            return Ok(e);
        }
        if k_max >= 2 * ctx.dim() as u32 + 8 {
            return Err(StructureError::Unstabilized(k_max));
        }
        k_max += 2;
    }
}

/// `I(n) = ℓ(R/(x^[n])) - n^d e` and `J(n) = n^d e - ℓ(R/(x^[n])^lim)`.
pub fn ij_functions(ctx: &LocalRingContext, x: &Sequence, n_max: u32) -> Result<IJTable, StructureError> {
    let e = sop_multiplicity(ctx, x)?;
    let d = ctx.dim() as u32;
    let ring = ctx.ring();
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let xn = x.power(n);
        let length = ctx.local_length(&xn.ideal(ring))?;
        let closure = limit_closure(ctx, &xn)?;
        let closure_length = ctx.local_length(&closure.closure)?;
        let multiplicity = (n as u64).pow(d) * e;
        rows.push(IJRow {
            n,
            length,
            multiplicity,
            closure_length,
            i: length as i128 - multiplicity as i128,
            j: multiplicity as i128 - closure_length as i128,
        });
    }
    Ok(IJTable {
        sequence: x.clone(),
        multiplicity: e,
        rows,
    })
}

/// For each `k ≤ n0`, the least `v ≤ v_max` with `(x^[v])^lim ⊆ m^k`.
pub fn topology_scan(ctx: &LocalRingContext, x: &Sequence, n0: u32, v_max: u32) -> Result<TopologyScan, StructureError> {
    ctx.check_sequence(x)?;
    let mut warnings = vec![AFFINE_SHADOW_NOTE.to_string()];
    if !ctx.is_sop(x) {
        warnings.push("the sequence is not a system of parameters".to_string());
    }
    let mut closures: Vec<Ideal> = Vec::new();
    let mut closure = |v: u32| -> Result<Ideal, StructureError> {
        while closures.len() < v as usize {
            let next = closures.len() as u32 + 1;
            closures.push(limit_closure(ctx, &x.power(next))?.closure);
        }
        Ok(closures[v as usize - 1].clone())
    };
    let mut rows = Vec::new();
    let mut failure: Option<(u32, Polynomial)> = None;
    let mut v_start = 1;
    for k in 1..=n0 {
        let mut found = None;
        // Closures descend in v, so the search resumes where the last one ended.
        for v in v_start..=v_max {
            if ctx.contained_in_m_power(&closure(v)?, k) {
                found = Some(v);
                break;
            }
        }
        let witness = match found {
            Some(v) => {
                v_start = v;
                None
            }
            None => {
                let w = ctx.witnesses_outside_m_power(&closure(v_max)?, k);
                let w = w.into_iter().min_by_key(|p| (p.total_degree(), p.len()));
                if failure.is_none() {
                    if let Some(w) = &w {
                        failure = Some((k, w.clone()));
                    }
                }
                w
            }
        };
        rows.push(ScanRow { k, v: found, witness });
    }
    let verdict = match failure {
        Some((k, witness)) => ScanVerdict::FailureAt { k, witness },
        None => ScanVerdict::EquivalenceEvidence { n0 },
    };
    Ok(TopologyScan {
        sequence: x.clone(),
        v_max,
        rows,
        verdict,
        warnings,
    })
}

/// Compares `(x)^lim` in the source with the contraction of `(x)^lim` in
/// the target of a module-finite extension.
pub fn cyclic_cover_closure_check(
    map: &RingMapPresentation,
    x: &Sequence,
    options: LocalOptions,
    opts: &StructureOptions,
) -> Result<CyclicCoverReport, StructureError> {
    let src = LocalRingContext::new(map.source_relations().clone(), options)?;
    let tgt = LocalRingContext::new(map.target_relations().clone(), options)?;
    require_sop(&src, x)?;
    let y = Sequence::new(x.entries().iter().map(|e| map.apply(e)).collect());
    if !tgt.is_sop(&y) {
        return Err(StructureError::BadExtension("the image is not a system of parameters of the target".into()));
    }
    let u = closure_intersection(&src, x, src.dim(), opts)?.0;
    if !src.local_contains(&Ideal::zero(src.ring()), &u) {
        return Err(StructureError::NotUnmixed);
    }
    let mut warnings = vec![AFFINE_SHADOW_NOTE.to_string()];
    let kernel = map.contract(&Ideal::zero(map.target()))?;
    if !src.local_contains(&Ideal::zero(src.ring()), &kernel) {
        return Err(StructureError::BadExtension("the map is not injective".into()));
    }

    let closure_source = limit_closure(&src, x)?.closure;
    let closure_target = limit_closure(&tgt, &y)?.closure;
    let contracted = map.contract(&closure_target)?;
    let contraction_equal = src.local_equal(&closure_source, &contracted);
    let length_ideal = src.local_length(&x.ideal(src.ring()))?;
    let length_closure = src.local_length(&closure_source)?;
    let length_target = tgt.local_length(&y.ideal(tgt.ring()))?;
    let multiplicity = sop_multiplicity(&src, x).ok();

    let identities = match (graded_cokernel_length(map)?, multiplicity) {
        (Some(h), Some(e)) if src.dim() == 2 => {
            if maximal_ideal_kills_cokernel(map)? {
                Some(TheoremEIdentities {
                    cohomology_length: h,
                    length_identity: length_closure as i128 == e as i128 - h as i128,
                    koszul_identity: length_ideal - length_closure == 2 * h,
                })
            } else {
                warnings.push("m S is not contained in R; cohomology identities skipped".into());
                None
            }
        }
        _ => {
            warnings.push("cohomology identities need a graded extension of a two-dimensional ring".into());
            None
        }
    };
    Ok(CyclicCoverReport {
        closure_source,
        closure_target,
        contracted,
        contraction_equal,
        length_ideal,
        length_closure,
        length_target,
        multiplicity,
        identities,
        warnings,
    })
}

/// `Σ_k dim S_k - dim R_k` for a degree-preserving map of standard graded
/// rings, when finite.
pub fn graded_cokernel_length(map: &RingMapPresentation) -> Result<Option<u64>, StructureError> {
    let homogeneous_rel = |i: &Ideal| i.generators().iter().all(|g| g.is_homogeneous());
    let linear_images = map
        .images()
        .iter()
        .all(|p| p.is_homogeneous() && p.total_degree() == 1);
    if !homogeneous_rel(map.source_relations()) || !homogeneous_rel(map.target_relations()) || !linear_images {
        return Ok(None);
    }
    let hs_r = map.source_relations().reduced().lead_hilbert_series();
    let hs_s = map.target_relations().reduced().lead_hilbert_series();
    if hs_r.dim() != hs_s.dim() {
        return Ok(None);
    }
    // Both functions are polynomial past the numerator degrees; d + 1
    // agreeing values there make them equal from then on.
    let deg = hs_r.numerator().len().max(hs_s.numerator().len()) + 1;
    let d = hs_r.dim();
    if (deg..=deg + d + 1).any(|k| hs_r.value(k) != hs_s.value(k)) {
        return Ok(None);
    }
    let total = hs_s.cumulative(deg) - hs_r.cumulative(deg);
    Ok(u64::try_from(total).ok())
}

/// `m_R · S ⊆ R`, checked on products of source variables with target
/// variables.
fn maximal_ideal_kills_cokernel(map: &RingMapPresentation) -> Result<bool, StructureError> {
    let target = map.target();
    let mut products = Vec::new();
    for img in map.images() {
        for v in 0..target.nvars() {
            products.push(img * &Polynomial::var(target, v));
        }
    }
    Ok(map.in_image(&products)?.into_iter().all(|b| b))
}
