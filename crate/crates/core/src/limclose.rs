//! Limit closures `(x)^lim = ∪_n (x_1^{n+1}, ..., x_r^{n+1}) : (x_1 ... x_r)^n`.

use thiserror::Error;

use crate::ideal::Ideal;
use crate::local::{LocalError, LocalRingContext, Sequence};
use crate::poly::{Monomial, Polynomial};
use crate::Rational;

#[derive(Debug, Clone, Error)]
pub enum LimitError {
    #[error("colon chain did not stabilize by index {n_max}")]
    Unstabilized { n_max: u32, chain: Vec<Ideal> },
    #[error("the sequence is not a system of parameters")]
    NotSop,
    #[error(transparent)]
    Local(#[from] LocalError),
}

#[derive(Clone, Debug)]
pub struct LimitClosureResult {
    /// Ambient representative, defining relations included, reduced.
    pub closure: Ideal,
    /// First chain index of the stable run (1-based).
    pub stabilization_index: u32,
    /// Chain terms for indices `1..=stabilization_index + window - 1`.
    pub chain: Vec<Ideal>,
    pub sequence: Sequence,
    /// Whether the closure is a proper ideal of the local ring.
    pub is_proper: bool,
}

/// Generalized closure data: `(head^n | tail^m)`.
#[derive(Clone, Debug)]
pub struct MixedClosureSpec {
    pub head: Sequence,
    pub head_power: u32,
    pub tail: Sequence,
    pub tail_power: u32,
}

/// An invertible linear change of coordinates under which a sequence of
/// independent linear forms becomes a sequence of variables. Colons by
/// monomials behave far better in Buchberger's algorithm than colons by
/// products of linear forms.
struct LinearChange {
    ctx: LocalRingContext,
    sequence: Sequence,
    /// Image of each new variable in the old coordinates.
    to_old: Vec<Polynomial>,
}

impl LinearChange {
    fn for_sequence(ctx: &LocalRingContext, x: &Sequence) -> Option<LinearChange> {
        let ring = ctx.ring();
        let n = ring.nvars();
        let e = x.entries();
        if e.iter().all(|p| p.is_monomial()) {
            return None;
        }
        let roots: Vec<(Rational, Polynomial, u32)> = e.iter().map(linear_root).collect::<Option<_>>()?;
        let rows: Vec<Vec<Rational>> = roots.iter().map(|(_, l, _)| linear_coefficients(l, n)).collect();
        let pivots = pivot_columns(&rows)?;
        // Row `pivots[i]` holds entry `i`; the other rows are unit vectors.
        let mut p = vec![vec![Rational::zero(); n]; n];
        for c in 0..n {
            p[c][c] = Rational::one();
        }
        for (i, &c) in pivots.iter().enumerate() {
            p[c] = rows[i].clone();
        }
        let inv = invert(&p)?;
        let form = |coeffs: &[Rational]| {
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .fold(Polynomial::zero(ring), |acc, (v, c)| &acc + &Polynomial::var(ring, v).scale(c))
        };
        let to_new: Vec<Polynomial> = inv.iter().map(|row| form(row)).collect();
        let to_old: Vec<Polynomial> = p.iter().map(|row| form(row)).collect();
        let relations: Vec<Polynomial> = ctx.defining_ideal().generators().iter().map(|g| g.substitute(&to_new)).collect();
        let moved = LocalRingContext::new(Ideal::new(ring, relations), *ctx.options()).ok()?;
        let sequence = Sequence::new(
            pivots
                .iter()
                .zip(&roots)
                .map(|(&c, (k, _, a))| Polynomial::var(ring, c).pow(*a).scale(k))
                .collect(),
        );
        Some(LinearChange {
            ctx: moved,
            sequence,
            to_old,
        })
    }

    fn back(&self, i: &Ideal) -> Ideal {
        let gens = i.generators().iter().map(|g| g.substitute(&self.to_old)).collect();
        Ideal::new(i.ring(), gens).reduced()
    }
}

/// `p = c * l^a` with `l` a linear form whose first nonzero coefficient is 1.
fn linear_root(p: &Polynomial) -> Option<(Rational, Polynomial, u32)> {
    if p.is_zero() || !p.is_homogeneous() {
        return None;
    }
    let a = p.total_degree();
    if a == 0 {
        return None;
    }
    let ring = p.ring();
    let n = ring.nvars();
    let j = (0..n).find(|&v| !p.coeff_of(&Monomial::variable(n, v, a as u16)).is_zero())?;
    let c = p.coeff_of(&Monomial::variable(n, j, a as u16));
    let scale = (&c * &Rational::from_int(a as i64)).recip();
    let mut l = Polynomial::var(ring, j);
    for k in 0..n {
        if k == j {
            continue;
        }
        let mut e = vec![0u16; n];
        e[j] = (a - 1) as u16;
        e[k] += 1;
        let coeff = p.coeff_of(&Monomial::from_exponents(&e));
        if !coeff.is_zero() {
            l = &l + &Polynomial::var(ring, k).scale(&(&coeff * &scale));
        }
    }
    (&l.pow(a).scale(&c) == p).then_some((c, l, a))
}

fn linear_coefficients(p: &Polynomial, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|v| p.coeff_of(&Monomial::variable(n, v, 1)))
        .collect()
}

/// Pivot column of each row after elimination, or `None` if the rows are
/// dependent.
fn pivot_columns(rows: &[Vec<Rational>]) -> Option<Vec<usize>> {
    let mut work: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::with_capacity(rows.len());
    for i in 0..work.len() {
        let c = work[i].iter().position(|a| !a.is_zero())?;
        let lead = work[i][c].recip();
        let pivot_row: Vec<Rational> = work[i].iter().map(|a| a * &lead).collect();
        for row in work.iter_mut().skip(i + 1) {
            let f = row[c].clone();
            if !f.is_zero() {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a -= &(&f * b);
                }
            }
        }
        pivots.push(c);
    }
    Some(pivots)
}

fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let lead = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &lead;
        }
        let pivot_row = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `(x_1^{n+1}, ..., x_r^{n+1}) + J : (x_1 ... x_r)^n`.
pub fn colon_step(ctx: &LocalRingContext, x: &Sequence, n: u32) -> Result<Ideal, LimitError> {
    assert!(n >= 1, "chain index starts at 1");
    ctx.check_sequence(x)?;
    if let Some(ch) = LinearChange::for_sequence(ctx, x) {
        return Ok(ch.back(&direct_colon_step(&ch.ctx, &ch.sequence, n)));
    }
    Ok(direct_colon_step(ctx, x, n))
}

fn direct_colon_step(ctx: &LocalRingContext, x: &Sequence, n: u32) -> Ideal {
    let ring = ctx.ring();
    let base = ctx.with_relations(&x.power(n + 1).ideal(ring));
    let g = x.product(ring).pow(n);
    colon_or_unit(&base, &g)
}

fn colon_or_unit(base: &Ideal, g: &Polynomial) -> Ideal {
    if g.is_zero() {
        return Ideal::unit(base.ring());
    }
    base.colon(g).expect("nonzero").reduced()
}

/// Iterates a chain until `window` consecutive terms agree locally.
fn stabilize(
    ctx: &LocalRingContext,
    mut term: impl FnMut(u32) -> Result<Ideal, LimitError>,
) -> Result<(Ideal, u32, Vec<Ideal>), LimitError> {
    let window = ctx.options().stab_window.max(1);
    let n_max = ctx.options().n_max;
    let mut chain: Vec<Ideal> = Vec::new();
    let mut run = 1usize;
    for n in 1..=n_max {
        let next = term(n)?;
        if ctx.is_locally_unit(&next) {
            chain.push(next.clone());
            return Ok((next, n, chain));
        }
        if let Some(prev) = chain.last() {
            // The chain ascends, so one containment decides equality.
            if ctx.local_contains(prev, &next) {
                run += 1;
            } else {
                run = 1;
            }
        }
        chain.push(next);
        if run >= window {
            let s = chain.len() - window + 1;
            return Ok((chain[s - 1].clone(), s as u32, chain));
        }
    }
    Err(LimitError::Unstabilized { n_max, chain })
}

pub fn limit_closure(ctx: &LocalRingContext, x: &Sequence) -> Result<LimitClosureResult, LimitError> {
    ctx.check_sequence(x)?;
    let (closure, s, chain) = match LinearChange::for_sequence(ctx, x) {
        Some(ch) => {
            let (c, s, chain) = stabilize(&ch.ctx, |n| Ok(direct_colon_step(&ch.ctx, &ch.sequence, n)))?;
            (ch.back(&c), s, chain.iter().map(|i| ch.back(i)).collect())
        }
        None => stabilize(ctx, |n| Ok(direct_colon_step(ctx, x, n)))?,
    };
    let is_proper = !ctx.is_locally_unit(&closure);
    Ok(LimitClosureResult {
        closure,
        stabilization_index: s,
        chain,
        sequence: x.clone(),
        is_proper,
    })
}

/// `∪_k (head^{n(k+1)}, tail^m) + J : (head product)^{nk}`.
pub fn limit_closure_mixed(ctx: &LocalRingContext, spec: &MixedClosureSpec) -> Result<Ideal, LimitError> {
    assert!(spec.head_power >= 1 && spec.tail_power >= 1);
    assert!(!spec.head.is_empty(), "the head must be non-empty");
    ctx.check_sequence(&spec.head)?;
    ctx.check_sequence(&spec.tail)?;
    if spec.tail.is_empty() {
        return Ok(limit_closure(ctx, &spec.head.power(spec.head_power))?.closure);
    }
    let ring = ctx.ring();
    let tail = spec.tail.power(spec.tail_power);
    let head_prod = spec.head.product(ring).pow(spec.head_power);
    let (closure, _, _) = stabilize(ctx, |k| {
        let mut gens = spec.head.power(spec.head_power * (k + 1)).entries().to_vec();
        gens.extend(tail.entries().iter().cloned());
        let base = ctx.with_relations(&Ideal::new(ring, gens));
        Ok(colon_or_unit(&base, &head_prod.pow(k)))
    })?;
    Ok(closure)
}

/// Whether `1 ∉ (x)^lim` for a system of parameters `x`.
pub fn monomial_property(ctx: &LocalRingContext, x: &Sequence) -> Result<bool, LimitError> {
    if !ctx.is_sop(x) {
        return Err(LimitError::NotSop);
    }
    Ok(limit_closure(ctx, x)?.is_proper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_sequences_are_closed() {
        let ctx = LocalRingContext::from_strs(&["x", "y", "z"], &[]).unwrap();
        let x = ctx.sequence(&["x", "y", "z"]).unwrap();
        let r = limit_closure(&ctx, &x).unwrap();
        assert!(r.closure.equals(&ctx.ideal(&["x", "y", "z"]).unwrap()));
        assert_eq!(r.stabilization_index, 1);
        assert!(r.is_proper);
        assert!(monomial_property(&ctx, &x).unwrap());
    }

    #[test]
    fn long_sequences_close_to_the_unit_ideal() {
        let ctx = LocalRingContext::from_strs(&["x", "y"], &[]).unwrap();
        let r = limit_closure(&ctx, &ctx.sequence(&["x", "y", "x + y"]).unwrap()).unwrap();
        assert!(!r.is_proper);
    }

    #[test]
    fn linear_changes_agree_with_direct_colons() {
        let ctx = LocalRingContext::from_strs(&["x", "y", "z"], &["x*y", "x*z"]).unwrap();
        let x = ctx.sequence(&["y", "x + z"]).unwrap();
        for n in 1..=3 {
            let moved = colon_step(&ctx, &x, n).unwrap();
            let direct = direct_colon_step(&ctx, &x, n);
            assert!(moved.equals(&direct), "n = {n}");
            let powered = x.power(2);
            assert!(colon_step(&ctx, &powered, n).unwrap().equals(&direct_colon_step(&ctx, &powered, n)));
        }
    }

    #[test]
    fn mixed_closure_degenerates_consistently() {
        let ctx = LocalRingContext::from_strs(&["x", "y"], &[]).unwrap();
        let spec = MixedClosureSpec {
            head: ctx.sequence(&["x"]).unwrap(),
            head_power: 1,
            tail: ctx.sequence(&["y"]).unwrap(),
            tail_power: 1,
        };
        let c = limit_closure_mixed(&ctx, &spec).unwrap();
        assert!(ctx.local_equal(&c, &ctx.ideal(&["x", "y"]).unwrap()));
    }
}
