//! Buchberger's algorithm, multivariate division with cofactors, reduced
//! bases, and ideal membership.

mod integer;
mod pairs;

use thiserror::Error;

use crate::poly::{Monomial, MonomialOrder, OrderKind, PolyRing, Polynomial, RingRef, Term};
use crate::rational::Rational;
use pairs::{Pair, PairSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("a degree bound needs a degree-compatible monomial order")]
    BoundNeedsGradedOrder,
    #[error("degree {degree} is outside the certified range (< {bound})")]
    OutOfRange { degree: u32, bound: u32 },
    #[error("bases use different monomial orders")]
    OrderMismatch,
    #[error("polynomials live over different variable sets")]
    RingMismatch,
}

/// Result of dividing `f` by a list: `f = sum coefficients[i] * divisors[i] + remainder`.
#[derive(Clone, Debug)]
pub struct Cofactors {
    pub remainder: Polynomial,
    pub coefficients: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: RingRef,
    generators: Vec<Polynomial>,
    reduced: bool,
    degree_bound: Option<u32>,
    /// The original generators and, per basis element, its expression in them.
    input: Vec<Polynomial>,
    representation: Option<Vec<Vec<Polynomial>>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuchbergerOptions {
    pub degree_bound: Option<u32>,
    pub track_cofactors: bool,
}

/// Outcome of a membership test; `certificate` expresses `f` in the original
/// generators whenever it is a member and tracking was enabled.
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    pub remainder: Polynomial,
    pub certificate: Option<Vec<Polynomial>>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        self.ring.order()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn into_generators(self) -> Vec<Polynomial> {
        self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn degree_bound(&self) -> Option<u32> {
        self.degree_bound
    }

    pub fn input(&self) -> &[Polynomial] {
        &self.input
    }

    /// Per basis element, the coefficients over the input generators.
    pub fn representation(&self) -> Option<&[Vec<Polynomial>]> {
        self.representation.as_deref()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| g.lm().clone()).collect()
    }

    /// Full normal form (no cofactors).
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let f = f.to_ring(&self.ring);
        let r = Reducer::new(&self.generators);
        r.reduce(&f, None)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// Whether every generator of `other` reduces to zero here.
    pub fn contains_all(&self, other: &[Polynomial]) -> bool {
        let r = Reducer::new(&self.generators);
        other.iter().all(|g| r.reduce(&g.to_ring(&self.ring), None).is_zero())
    }
}

/// Divisor lookup over a fixed list of polynomials.
struct Reducer<'a> {
    divisors: &'a [Polynomial],
    masks: Vec<u64>,
}

impl<'a> Reducer<'a> {
    fn new(divisors: &'a [Polynomial]) -> Self {
        let masks = divisors.iter().map(|d| d.lm().support_mask()).collect();
        Reducer { divisors, masks }
    }

    #[inline]
    fn find(&self, m: &Monomial) -> Option<usize> {
        let mm = m.support_mask();
        (0..self.divisors.len()).find(|&k| self.masks[k] & !mm == 0 && self.divisors[k].lm().divides(m))
    }

    /// Reduces every term, leading term first. When `cofactors` is given it
    /// accumulates the quotient terms per divisor.
    fn reduce(&self, f: &Polynomial, mut cofactors: Option<&mut Vec<Vec<Term>>>) -> Polynomial {
        let ring = f.ring().clone();
        let mut work: Vec<Term> = f.terms().to_vec();
        let mut start = 0;
        let mut rem: Vec<Term> = Vec::new();
        while start < work.len() {
            let (m, c) = &work[start];
            match self.find(m) {
                None => {
                    rem.push(work[start].clone());
                    start += 1;
                }
                Some(k) => {
                    let g = &self.divisors[k];
                    let q = m.div(g.lm());
                    let coef = if g.lc().is_one() { c.clone() } else { c / g.lc() };
                    if let Some(cf) = cofactors.as_deref_mut() {
                        cf[k].push((q.clone(), coef.clone()));
                    }
                    work = sub_scaled_tail(&ring, &work[start + 1..], &coef, &q, &g.terms()[1..]);
                    start = 0;
                }
            }
        }
        Polynomial::from_sorted_terms(&ring, rem)
    }
}

/// `a - coef * q * b` for sorted term slices.
fn sub_scaled_tail(ring: &RingRef, a: &[Term], coef: &Rational, q: &Monomial, b: &[Term]) -> Vec<Term> {
    let order = ring.order();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(t, c)| (t.mul(q), c * coef)).peekable();
    while i < a.len() {
        let Some(bt) = bi.peek() else { break };
        match order.cmp(&a[i].0, &bt.0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let (t, c) = bi.next().unwrap();
                out.push((t, -c));
            }
            std::cmp::Ordering::Equal => {
                let (t, c) = bi.next().unwrap();
                let s = &a[i].1 - &c;
                if !s.is_zero() {
                    out.push((t, s));
                }
                i += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(bi.map(|(t, c)| (t, -c)));
    out
}

/// Multivariate division of `f` by `basis` (in list order, leading term first).
pub fn normal_form(f: &Polynomial, basis: &[Polynomial]) -> Cofactors {
    let ring = f.ring().clone();
    let slots: Vec<usize> = (0..basis.len()).filter(|&i| !basis[i].is_zero()).collect();
    let nonzero: Vec<Polynomial> = slots.iter().map(|&i| basis[i].to_ring(&ring)).collect();
    let r = Reducer::new(&nonzero);
    let mut cf = vec![Vec::new(); nonzero.len()];
    let remainder = r.reduce(f, Some(&mut cf));
    let mut coefficients = vec![Polynomial::zero(&ring); basis.len()];
    for (slot, terms) in slots.into_iter().zip(cf) {
        coefficients[slot] = Polynomial::from_terms(&ring, terms);
    }
    Cofactors {
        remainder,
        coefficients,
    }
}

struct State {
    ring: RingRef,
    polys: Vec<Polynomial>,
    reps: Option<Vec<Vec<Polynomial>>>,
    pairs: PairSet,
}

impl State {
    fn reducers(&self) -> Vec<Polynomial> {
        self.pairs.basis().iter().map(|&k| self.polys[k].clone()).collect()
    }

    fn install(&mut self, h: Polynomial, sugar: u32, rep: Option<Vec<Polynomial>>) {
        self.pairs.install(h.lm().clone(), sugar);
        self.polys.push(h);
        if let (Some(reps), Some(rep)) = (self.reps.as_mut(), rep) {
            reps.push(rep);
        }
    }

    fn spoly(&self, p: &Pair) -> (Polynomial, Option<Vec<Polynomial>>) {
        let (a, b) = (&self.polys[p.i], &self.polys[p.j]);
        let qa = p.lcm.div(a.lm());
        let qb = p.lcm.div(b.lm());
        let ca = a.lc().recip();
        let cb = b.lc().recip();
        let s = a.mul_term(&qa, &ca).sub_mul_term(&cb, &qb, b);
        let rep = self.reps.as_ref().map(|reps| {
            let m_a = Polynomial::monomial(&self.ring, qa.clone(), ca.clone());
            let m_b = Polynomial::monomial(&self.ring, qb.clone(), cb.clone());
            reps[p.i]
                .iter()
                .zip(&reps[p.j])
                .map(|(ra, rb)| &(&m_a * ra) - &(&m_b * rb))
                .collect()
        });
        (s, rep)
    }
}

fn combine_rep(
    ring: &RingRef,
    rep: Vec<Polynomial>,
    cofactors: &[Vec<Term>],
    reducer_ids: &[usize],
    reps: &[Vec<Polynomial>],
) -> Vec<Polynomial> {
    let mut rep = rep;
    for (slot, terms) in cofactors.iter().enumerate() {
        if terms.is_empty() {
            continue;
        }
        let q = Polynomial::from_terms(ring, terms.clone());
        let src = &reps[reducer_ids[slot]];
        for (r, s) in rep.iter_mut().zip(src) {
            *r = &*r - &(&q * s);
        }
    }
    rep
}

/// Computes a Groebner basis of `gens` under `order`.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder, opts: BuchbergerOptions) -> Result<GroebnerBasis, GroebnerError> {
    if opts.degree_bound.is_some() && !order.is_degree_compatible() {
        return Err(GroebnerError::BoundNeedsGradedOrder);
    }
    let Some(first) = gens.first() else {
        return Err(GroebnerError::RingMismatch);
    };
    let ring = first.ring().with_order(order.clone());
    buchberger_in(&ring, gens, opts)
}

/// As [`buchberger`], with the ring (and so the order) given explicitly; an
/// empty generator list is allowed.
pub fn buchberger_in(ring: &RingRef, gens: &[Polynomial], opts: BuchbergerOptions) -> Result<GroebnerBasis, GroebnerError> {
    if opts.degree_bound.is_some() && !ring.order().is_degree_compatible() {
        return Err(GroebnerError::BoundNeedsGradedOrder);
    }
    if gens.iter().any(|g| !g.ring().same_variables(ring)) {
        return Err(GroebnerError::RingMismatch);
    }
    let input: Vec<Polynomial> = gens.iter().map(|g| g.to_ring(ring)).collect();
    if ring.order().kind() == OrderKind::Grevlex
        && opts.degree_bound.is_none()
        && input.iter().any(|g| !g.is_homogeneous())
    {
        return Ok(via_homogenization(ring, input, opts));
    }
    if !opts.track_cofactors {
        let zs = integer::groebner(ring, &input, opts.degree_bound);
        return Ok(GroebnerBasis {
            ring: ring.clone(),
            generators: integer::reduced(ring, zs),
            reduced: true,
            degree_bound: opts.degree_bound,
            input,
            representation: None,
        });
    }
    let ninput = input.len();
    let mut st = State {
        ring: ring.clone(),
        polys: Vec::new(),
        reps: opts.track_cofactors.then(Vec::new),
        pairs: PairSet::new(opts.degree_bound),
    };

    // Install inputs one at a time, each reduced against what is already there,
    // smallest leading monomial first.
    let mut order_idx: Vec<usize> = (0..ninput).filter(|&i| !input[i].is_zero()).collect();
    order_idx.sort_by(|&a, &b| ring.order().cmp(input[a].lm(), input[b].lm()).then(a.cmp(&b)));
    for i in order_idx {
        let unit_rep = st.reps.as_ref().map(|_| {
            (0..ninput)
                .map(|k| if k == i { Polynomial::one(ring) } else { Polynomial::zero(ring) })
                .collect::<Vec<_>>()
        });
        let (h, rep) = reduce_tracked(&st, &input[i], unit_rep);
        if h.is_zero() {
            continue;
        }
        let sugar = input[i].total_degree();
        let (h, rep) = make_monic(h, rep);
        st.install(h, sugar, rep);
    }

    while let Some(pair) = st.pairs.pop() {
        let (s, rep) = st.spoly(&pair);
        let (h, rep) = reduce_tracked(&st, &s, rep);
        if h.is_zero() {
            continue;
        }
        let (h, rep) = make_monic(h, rep);
        let unit = h.is_constant();
        st.install(h, pair.sugar, rep);
        if unit {
            break;
        }
    }

    let gens: Vec<usize> = st.pairs.basis().to_vec();
    let representation = st
        .reps
        .as_ref()
        .map(|reps| gens.iter().map(|&k| reps[k].clone()).collect::<Vec<_>>());
    let generators = gens.iter().map(|&k| st.polys[k].clone()).collect();
    let gb = GroebnerBasis {
        ring: ring.clone(),
        generators,
        reduced: false,
        degree_bound: opts.degree_bound,
        input,
        representation,
    };
    Ok(reduce_basis(gb))
}

/// `g` made homogeneous with the last variable of `hring`, which must extend
/// the ring of `g` by one variable.
pub(crate) fn homogenize(g: &Polynomial, hring: &RingRef) -> Polynomial {
    let top = g.total_degree();
    let terms: Vec<Term> = g
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.push((top - m.degree()) as u16);
            (Monomial::from_exponents(&e), c.clone())
        })
        .collect();
    Polynomial::from_terms(hring, terms)
}

/// Grevlex basis of an inhomogeneous ideal: a basis of the homogenized
/// generators under grevlex with the new variable last dehomogenizes to a
/// basis of the original ideal. Degrees never drop in the homogeneous run,
/// which keeps intermediate coefficients small.
fn via_homogenization(ring: &RingRef, input: Vec<Polynomial>, opts: BuchbergerOptions) -> GroebnerBasis {
    let n = ring.nvars();
    let mut names: Vec<String> = ring.names().to_vec();
    names.push("_h".to_string());
    let perm: Vec<usize> = match ring.order().permutation() {
        Some(p) => p.iter().copied().chain(std::iter::once(n)).collect(),
        None => (0..=n).collect(),
    };
    let hring = PolyRing::new(&names, MonomialOrder::grevlex().with_permutation(perm));
    let homog: Vec<Polynomial> = input.iter().map(|g| homogenize(g, &hring)).collect();
    if !opts.track_cofactors {
        let zs = integer::groebner(&hring, &homog, None);
        let slots: Vec<Option<usize>> = (0..n).map(Some).collect();
        let zs = zs.into_iter().map(|z| integer::remap(ring, &z, &slots)).collect();
        return GroebnerBasis {
            ring: ring.clone(),
            generators: integer::reduced(ring, zs),
            reduced: true,
            degree_bound: None,
            input,
            representation: None,
        };
    }
    let hgb = buchberger_in(&hring, &homog, opts).expect("homogeneous input");
    let slots: Vec<Option<usize>> = (0..n).map(Some).collect();
    let back = |p: &Polynomial| p.remap_into(ring, &slots);
    let gb = GroebnerBasis {
        ring: ring.clone(),
        generators: hgb.generators().iter().map(back).collect(),
        reduced: false,
        degree_bound: None,
        input,
        representation: hgb
            .representation
            .as_ref()
            .map(|reps| reps.iter().map(|r| r.iter().map(back).collect()).collect()),
    };
    reduce_basis(gb)
}

fn make_monic(h: Polynomial, rep: Option<Vec<Polynomial>>) -> (Polynomial, Option<Vec<Polynomial>>) {
    if h.lc().is_one() {
        return (h, rep);
    }
    let inv = h.lc().recip();
    let rep = rep.map(|r| r.iter().map(|p| p.scale(&inv)).collect());
    (h.scale(&inv), rep)
}

fn reduce_tracked(st: &State, f: &Polynomial, rep: Option<Vec<Polynomial>>) -> (Polynomial, Option<Vec<Polynomial>>) {
    let reducers = st.reducers();
    let r = Reducer::new(&reducers);
    match (rep, st.reps.as_ref()) {
        (Some(rep), Some(reps)) => {
            let mut cf = vec![Vec::new(); reducers.len()];
            let h = r.reduce(f, Some(&mut cf));
            let rep = combine_rep(&st.ring, rep, &cf, st.pairs.basis(), reps);
            (h, Some(rep))
        }
        _ => (r.reduce(f, None), None),
    }
}

/// The unique reduced basis: minimal, monic, tails fully reduced, sorted by
/// ascending leading monomial. Idempotent.
pub fn reduce_basis(gb: GroebnerBasis) -> GroebnerBasis {
    let GroebnerBasis {
        ring,
        generators,
        degree_bound,
        input,
        representation,
        ..
    } = gb;
    let mut items: Vec<(Polynomial, Option<Vec<Polynomial>>)> = match representation {
        Some(reps) => generators.into_iter().zip(reps).map(|(g, r)| (g, Some(r))).collect(),
        None => generators.into_iter().map(|g| (g, None)).collect(),
    };
    items.retain(|(g, _)| !g.is_zero());
    if let Some(pos) = items.iter().position(|(g, _)| g.is_constant()) {
        let (g, r) = items.swap_remove(pos);
        items = vec![make_monic(g, r)];
    }

    // Minimalize: drop elements whose leading monomial is divisible by another's.
    let order = ring.order().clone();
    items.sort_by(|a, b| order.cmp(a.0.lm(), b.0.lm()));
    let mut minimal: Vec<(Polynomial, Option<Vec<Polynomial>>)> = Vec::new();
    for it in items {
        if minimal.iter().any(|(g, _)| g.lm().divides(it.0.lm())) {
            continue;
        }
        minimal.push(it);
    }

    // Interreduce tails against all other elements.
    let tracked = minimal.iter().all(|(_, r)| r.is_some()) && !minimal.is_empty();
    let n = minimal.len();
    for i in 0..n {
        let others: Vec<Polynomial> = (0..n).filter(|&k| k != i).map(|k| minimal[k].0.clone()).collect();
        let ids: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        let r = Reducer::new(&others);
        let g = &minimal[i].0;
        let head = Polynomial::monomial(&ring, g.lm().clone(), g.lc().clone());
        let tail = g.filter_terms(|m| m != g.lm());
        if tracked {
            let mut cf = vec![Vec::new(); others.len()];
            let t = r.reduce(&tail, Some(&mut cf));
            let reps: Vec<Vec<Polynomial>> = minimal.iter().map(|(_, r)| r.clone().unwrap()).collect();
            let rep = combine_rep(&ring, reps[i].clone(), &cf, &ids, &reps);
            let (p, rep) = make_monic(&head + &t, Some(rep));
            minimal[i] = (p, rep);
        } else {
            let t = r.reduce(&tail, None);
            let (p, _) = make_monic(&head + &t, None);
            minimal[i] = (p, None);
        }
    }

    let representation = if tracked {
        Some(minimal.iter().map(|(_, r)| r.clone().unwrap()).collect())
    } else {
        None
    };
    GroebnerBasis {
        ring,
        generators: minimal.into_iter().map(|(g, _)| g).collect(),
        reduced: true,
        degree_bound,
        input,
        representation,
    }
}

/// Membership test with a certificate over the original generators when
/// cofactors were tracked.
pub fn ideal_member(f: &Polynomial, gb: &GroebnerBasis) -> Result<Membership, GroebnerError> {
    if !f.ring().same_variables(&gb.ring) {
        return Err(GroebnerError::RingMismatch);
    }
    if let Some(bound) = gb.degree_bound {
        let degree = f.total_degree();
        if degree >= bound {
            return Err(GroebnerError::OutOfRange { degree, bound });
        }
    }
    let f = f.to_ring(&gb.ring);
    let cf = normal_form(&f, &gb.generators);
    let member = cf.remainder.is_zero();
    let certificate = match (&gb.representation, member) {
        (Some(reps), true) => {
            let mut cert = vec![Polynomial::zero(&gb.ring); gb.input.len()];
            for (q, rep) in cf.coefficients.iter().zip(reps) {
                if q.is_zero() {
                    continue;
                }
                for (c, r) in cert.iter_mut().zip(rep) {
                    *c = &*c + &(q * r);
                }
            }
            Some(cert)
        }
        _ => None,
    };
    Ok(Membership {
        member,
        remainder: cf.remainder,
        certificate,
    })
}

/// Equality of the generated ideals via reduced bases.
pub fn ideal_equal(a: &GroebnerBasis, b: &GroebnerBasis) -> Result<bool, GroebnerError> {
    if !a.ring.same_variables(&b.ring) {
        return Err(GroebnerError::RingMismatch);
    }
    if a.order() != b.order() {
        return Err(GroebnerError::OrderMismatch);
    }
    let ra = if a.reduced { a.generators.clone() } else { reduce_basis(a.clone()).generators };
    let rb = if b.reduced { b.generators.clone() } else { reduce_basis(b.clone()).generators };
    Ok(ra == rb)
}

/// The S-polynomial of two polynomials (leading coefficients normalized).
pub fn s_polynomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let lcm = a.lm().lcm(b.lm());
    let qa = lcm.div(a.lm());
    let qb = lcm.div(b.lm());
    a.mul_term(&qa, &a.lc().recip()).sub_mul_term(&b.lc().recip(), &qb, b)
}

/// Checks Buchberger's criterion exhaustively over all pairs.
pub fn satisfies_buchberger_criterion(gens: &[Polynomial]) -> bool {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let s = s_polynomial(&gens[i], &gens[j]);
            if !normal_form(&s, gens).remainder.is_zero() {
                return false;
            }
        }
    }
    true
}
