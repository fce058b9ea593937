//! Determinantal maps `R/(x)^lim -> R/(y)^lim` for `y = A x`, and the
//! harness comparing their injectivity with `y` being a system of parameters.

use rand::Rng;
use thiserror::Error;

use crate::groebner::{buchberger_in, ideal_member, BuchbergerOptions};
use crate::ideal::{Ideal, IdealError};
use crate::limclose::{limit_closure, LimitError};
use crate::local::{LocalRingContext, Sequence};
use crate::poly::{monomials_of_degree, Polynomial};
use crate::Rational;

#[derive(Debug, Clone, Error)]
pub enum DetMapError {
    #[error("sequences have lengths {0} and {1}; a square matrix is needed")]
    LengthMismatch(usize, usize),
    #[error("entry {index} of y (`{entry}`) is not in (x) + J")]
    NotInIdeal { index: usize, entry: String },
    #[error("row {0} of the matrix does not express y_{0} modulo J")]
    BadMatrix(usize),
    #[error("x is not a system of parameters")]
    NotSop,
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// `y = A x` modulo the defining relations, with the determinant of `A`.
#[derive(Clone, Debug)]
pub struct DetMapProblem {
    pub x: Sequence,
    pub y: Sequence,
    pub matrix: Vec<Vec<Polynomial>>,
    pub det: Polynomial,
    /// Per row, coefficients on the defining relations: `y_i = Σ A_ij x_j + Σ c_ik J_k`,
    /// when the matrix came from a division.
    pub relation_cofactors: Option<Vec<Vec<Polynomial>>>,
}

impl DetMapProblem {
    /// Validates a caller-supplied matrix.
    pub fn with_matrix(ctx: &LocalRingContext, x: &Sequence, y: &Sequence, matrix: Vec<Vec<Polynomial>>) -> Result<Self, DetMapError> {
        let t = x.len();
        if y.len() != t {
            return Err(DetMapError::LengthMismatch(t, y.len()));
        }
        let ring = ctx.ring();
        let relations = ctx.defining_ideal();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != t {
                return Err(DetMapError::BadMatrix(i));
            }
            let mut r = y.entries()[i].to_ring(ring);
            for (a, xj) in row.iter().zip(x.entries()) {
                r = &r - &(a * xj);
            }
            if !relations.contains(&r) {
                return Err(DetMapError::BadMatrix(i));
            }
        }
        if matrix.len() != t {
            return Err(DetMapError::BadMatrix(matrix.len()));
        }
        let det = determinant(&matrix);
        Ok(DetMapProblem {
            x: x.clone(),
            y: y.clone(),
            matrix,
            det,
            relation_cofactors: None,
        })
    }

    /// `y_i - Σ A_ij x_j ∈ J` for every row, recomputed from scratch.
    pub fn rows_hold(&self, ctx: &LocalRingContext) -> bool {
        let relations = ctx.defining_ideal();
        self.matrix.iter().zip(self.y.entries()).all(|(row, yi)| {
            let mut r = yi.to_ring(ctx.ring());
            for (a, xj) in row.iter().zip(self.x.entries()) {
                r = &r - &(a * xj);
            }
            relations.contains(&r)
        })
    }

    /// Cramer's rule: `det(A) x_j ∈ (y) + J` for every `j`.
    pub fn cramer_holds(&self, ctx: &LocalRingContext) -> bool {
        let target = ctx.with_relations(&self.y.ideal(ctx.ring()));
        self.x.entries().iter().all(|xj| target.contains(&(&self.det * xj)))
    }

    /// Another valid matrix for the same pair: each row moves by a random
    /// Koszul syzygy of `x` and a random multiple of a defining relation
    /// placed in one column.
    pub fn perturbed<R: Rng>(&self, ctx: &LocalRingContext, rng: &mut R) -> DetMapProblem {
        let ring = ctx.ring();
        let t = self.x.len();
        let xs = self.x.entries();
        let relations = ctx.defining_ideal().generators();
        let monomials: Vec<_> = (0..=1).flat_map(|d| monomials_of_degree(ring.nvars(), d)).collect();
        let random_multiplier = |rng: &mut R| {
            let m = monomials[rng.gen_range(0..monomials.len())].clone();
            let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            Polynomial::monomial(ring, m, Rational::from_int(c))
        };
        let mut matrix = self.matrix.clone();
        for row in matrix.iter_mut() {
            if t >= 2 {
                let j = rng.gen_range(0..t);
                let k = (j + rng.gen_range(1..t)) % t;
                let c = random_multiplier(rng);
                row[j] = &row[j] + &(&c * &xs[k]);
                row[k] = &row[k] - &(&c * &xs[j]);
            }
            if !relations.is_empty() {
                let g = &relations[rng.gen_range(0..relations.len())];
                let j = rng.gen_range(0..t);
                let c = random_multiplier(rng);
                row[j] = &row[j] + &(&c * g);
            }
        }
        let det = determinant(&matrix);
        DetMapProblem {
            x: self.x.clone(),
            y: self.y.clone(),
            matrix,
            det,
            relation_cofactors: None,
        }
    }
}

/// Recovers `A` with `y = A x` modulo `J` from membership certificates over
/// the generators `x_1, ..., x_t, J_1, ..., J_s`; the `J` coefficients are
/// kept separately.
pub fn express_in_terms(ctx: &LocalRingContext, y: &Sequence, x: &Sequence) -> Result<DetMapProblem, DetMapError> {
    let t = x.len();
    if y.len() != t {
        return Err(DetMapError::LengthMismatch(t, y.len()));
    }
    let ring = ctx.ring();
    let mut gens: Vec<Polynomial> = x.entries().iter().map(|p| p.to_ring(ring)).collect();
    gens.extend(ctx.defining_ideal().generators().iter().cloned());
    let opts = BuchbergerOptions {
        track_cofactors: true,
        ..Default::default()
    };
    let gb = buchberger_in(ring, &gens, opts).map_err(IdealError::from)?;
    let mut matrix = Vec::with_capacity(t);
    let mut cofactors = Vec::with_capacity(t);
    for (index, yi) in y.entries().iter().enumerate() {
        let m = ideal_member(&yi.to_ring(ring), &gb).map_err(IdealError::from)?;
        let cert = match (m.member, m.certificate) {
            (true, Some(c)) => c,
            _ => {
                return Err(DetMapError::NotInIdeal {
                    index,
                    entry: yi.to_string(),
                })
            }
        };
        matrix.push(cert[..t].to_vec());
        cofactors.push(cert[t..].to_vec());
    }
    let det = determinant(&matrix);
    Ok(DetMapProblem {
        x: x.clone(),
        y: y.clone(),
        matrix,
        det,
        relation_cofactors: Some(cofactors),
    })
}

/// Exact determinant: cofactor expansion up to size 4, fraction-free
/// elimination beyond.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    if m.len() <= 4 {
        determinant_expansion(m)
    } else {
        determinant_bareiss(m)
    }
}

/// Laplace expansion along the first row.
pub fn determinant_expansion(m: &[Vec<Polynomial>]) -> Polynomial {
    let t = m.len();
    assert!(t >= 1, "empty matrix");
    if t == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring().clone();
    let mut acc = Polynomial::zero(&ring);
    for j in 0..t {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &m[0][j] * &determinant_expansion(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Bareiss elimination; every division is exact.
pub fn determinant_bareiss(m: &[Vec<Polynomial>]) -> Polynomial {
    let t = m.len();
    assert!(t >= 1, "empty matrix");
    let ring = m[0][0].ring().clone();
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one(&ring);
    for k in 0..t - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..t).find(|&i| !a[i][k].is_zero()) else {
                return Polynomial::zero(&ring);
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..t {
            for j in k + 1..t {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.divide_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[t - 1][t - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Whether multiplication by `det(A)` is injective from `R/(x)^lim` to
/// `R/(y)^lim`: the kernel is `((y)^lim : det A) / (x)^lim`.
pub fn detmap_injective(ctx: &LocalRingContext, p: &DetMapProblem) -> Result<bool, DetMapError> {
    let cx = limit_closure(ctx, &p.x)?.closure;
    let cy = limit_closure(ctx, &p.y)?.closure;
    Ok(ctx.local_contains(&cx, &kernel_preimage(ctx, &cy, &p.det)?))
}

fn kernel_preimage(ctx: &LocalRingContext, cy: &Ideal, det: &Polynomial) -> Result<Ideal, DetMapError> {
    let k = ctx.with_relations(cy);
    if det.is_zero() || k.contains(det) {
        return Ok(Ideal::unit(ctx.ring()));
    }
    Ok(k.colon(det)?)
}

/// `det(A) (x)^lim ⊆ (y)^lim`, locally.
pub fn detmap_well_defined(ctx: &LocalRingContext, p: &DetMapProblem) -> Result<bool, DetMapError> {
    let cx = limit_closure(ctx, &p.x)?.closure;
    let cy = limit_closure(ctx, &p.y)?.closure;
    let image = Ideal::new(ctx.ring(), cx.generators().iter().map(|g| g * &p.det).collect());
    Ok(ctx.local_contains(&cy, &image))
}

#[derive(Clone, Debug)]
pub struct TheoremCReport {
    pub problem: DetMapProblem,
    pub y_is_sop: bool,
    pub injective: bool,
    pub agree: bool,
    pub ell: u32,
    /// Whether every entry of `x` lies in `m^ell`.
    pub x_in_m_ell: bool,
    pub equidimensional_asserted: bool,
    pub caveats: Vec<String>,
}

pub const EQUIDIMENSIONAL_CAVEAT: &str = "equidimensionality not asserted";

/// Computes both sides of the equivalence between `y` being a system of
/// parameters and injectivity of the determinantal map. Agreement is only
/// expected once `x ⊆ m^ell` for `ell` large enough, and only for
/// equidimensional catenary rings, which the caller asserts.
pub fn theorem_c_check(
    ctx: &LocalRingContext,
    x: &Sequence,
    y: &Sequence,
    ell: u32,
    equidimensional: bool,
) -> Result<TheoremCReport, DetMapError> {
    if !ctx.is_sop(x) {
        return Err(DetMapError::NotSop);
    }
    let problem = express_in_terms(ctx, y, x)?;
    let y_is_sop = ctx.is_sop(y);
    let injective = detmap_injective(ctx, &problem)?;
    let x_in_m_ell = ell == 0 || ctx.contained_in_m_power(&x.ideal(ctx.ring()), ell);
    let mut caveats = Vec::new();
    if !equidimensional {
        caveats.push(EQUIDIMENSIONAL_CAVEAT.to_string());
    }
    if !x_in_m_ell {
        caveats.push(format!("x is not contained in m^{ell}; agreement is not guaranteed"));
    }
    Ok(TheoremCReport {
        problem,
        y_is_sop,
        injective,
        agree: y_is_sop == injective,
        ell,
        x_in_m_ell,
        equidimensional_asserted: equidimensional,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> LocalRingContext {
        LocalRingContext::from_strs(&["x", "y"], &[]).unwrap()
    }

    #[test]
    fn diagonal_powers() {
        let ctx = plane();
        let x = ctx.sequence(&["x", "y"]).unwrap();
        let y = ctx.sequence(&["x^2", "y^2"]).unwrap();
        let p = express_in_terms(&ctx, &y, &x).unwrap();
        assert_eq!(p.matrix[0][0], ctx.poly("x").unwrap());
        assert!(p.matrix[0][1].is_zero() && p.matrix[1][0].is_zero());
        assert_eq!(p.det, ctx.poly("x*y").unwrap());
        assert!(p.cramer_holds(&ctx));
        assert!(detmap_injective(&ctx, &p).unwrap());
    }

    #[test]
    fn identity_and_zero_determinant() {
        let ctx = plane();
        let x = ctx.sequence(&["x", "y"]).unwrap();
        let p = express_in_terms(&ctx, &x, &x).unwrap();
        assert!(p.det.is_one());
        let y = ctx.sequence(&["x", "x"]).unwrap();
        let one = Polynomial::one(ctx.ring());
        let zero = Polynomial::zero(ctx.ring());
        let q = DetMapProblem::with_matrix(&ctx, &x, &y, vec![vec![one.clone(), zero.clone()], vec![one, zero]]).unwrap();
        assert!(q.det.is_zero());
        assert!(!detmap_injective(&ctx, &q).unwrap());
    }

    #[test]
    fn not_in_ideal_is_reported() {
        let ctx = plane();
        let x = ctx.sequence(&["x", "y^2"]).unwrap();
        let y = ctx.sequence(&["x", "y"]).unwrap();
        assert!(matches!(express_in_terms(&ctx, &y, &x), Err(DetMapError::NotInIdeal { index: 1, .. })));
    }

    #[test]
    fn bareiss_matches_expansion() {
        let ctx = LocalRingContext::from_strs(&["a", "b", "c"], &[]).unwrap();
        let e = |s: &str| ctx.poly(s).unwrap();
        let m = vec![
            vec![e("a"), e("b"), e("0"), e("1")],
            vec![e("c"), e("a + b"), e("b^2"), e("0")],
            vec![e("0"), e("0"), e("c"), e("a*b")],
            vec![e("1"), e("b"), e("a"), e("c - 1")],
        ];
        assert_eq!(determinant_bareiss(&m), determinant_expansion(&m));
        let mut swapped = m.clone();
        swapped[0][0] = e("0");
        assert_eq!(determinant_bareiss(&swapped), determinant_expansion(&swapped));
    }
}
