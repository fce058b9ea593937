//! Properties of local rings, limit closures, the structural invariants and
//! determinantal maps, on a battery of fixtures with known geometry.

mod support;

use limclose_core::detmaps::{determinant_bareiss, determinant_expansion, detmap_injective, detmap_well_defined, express_in_terms};
use limclose_core::ideal::Ideal;
use limclose_core::limclose::{colon_step, limit_closure};
use limclose_core::local::{LocalRingContext, Sequence};
use limclose_core::poly::Monomial;
use limclose_core::structure::{
    dimension_filtration, hilbert_samuel, ij_functions, topology_scan, unmixed_component, ScanVerdict, StructureOptions, UnmixedMode,
};
use limclose_core::{Polynomial, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::TruncatedQuotient;

struct Fixture {
    name: &'static str,
    ctx: LocalRingContext,
    sops: Vec<Sequence>,
    cohen_macaulay: bool,
    unmixed: bool,
}

fn fixture(name: &'static str, vars: &[&str], rels: &[&str], sops: &[&[&str]], cm: bool, unmixed: bool) -> Fixture {
    let ctx = LocalRingContext::from_strs(vars, rels).unwrap();
    let sops = sops.iter().map(|s| ctx.sequence(s).unwrap()).collect();
    Fixture {
        name,
        ctx,
        sops,
        cohen_macaulay: cm,
        unmixed,
    }
}

fn battery() -> Vec<Fixture> {
    vec![
        fixture("plane", &["x", "y"], &[], &[&["x", "y"], &["x^2 + y^3", "y^2 - x*y"]], true, true),
        fixture("space", &["x", "y", "z"], &[], &[&["x", "y", "z"], &["x + y", "y + z", "z^2 + x"]], true, true),
        fixture("cusp", &["x", "y"], &["y^2 - x^3"], &[&["x"], &["y"]], true, true),
        fixture("catalan", &["x", "y", "u", "v"], &["x*y - u*x^2 - v*y^2"], &[&["u", "v", "x + y"]], true, true),
        fixture("split", &["x", "y", "z"], &["x*y", "x*z"], &[&["y", "x + z"], &["x + y", "z"]], false, false),
        fixture("planes", &["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"], &[&["x + z", "y + w"]], false, true),
    ]
}

fn split() -> Fixture {
    battery().into_iter().find(|f| f.name == "split").unwrap()
}

fn zero(ctx: &LocalRingContext) -> Ideal {
    Ideal::zero(ctx.ring())
}

#[test]
fn dimension_matches_the_global_dimension() {
    // Every minimal prime of each defining ideal passes through the origin.
    for f in battery() {
        let j = f.ctx.defining_ideal();
        assert_eq!(f.ctx.local_dim(&zero(&f.ctx)).unwrap(), j.krull_dim().unwrap(), "{}", f.name);
        assert_eq!(f.ctx.dim(), j.krull_dim().unwrap(), "{}", f.name);
    }
}

#[test]
fn sop_verdict_survives_permutation_and_units() {
    for f in battery() {
        let ring = f.ctx.ring();
        for x in &f.sops {
            assert!(f.ctx.is_sop(x), "{} {x}", f.name);
            let mut rev = x.entries().to_vec();
            rev.reverse();
            assert!(f.ctx.is_sop(&Sequence::new(rev)));
            let unit = &Polynomial::one(ring) + &Polynomial::var(ring, 0);
            let scaled: Vec<Polynomial> = x.entries().iter().map(|e| &unit * e).collect();
            assert!(f.ctx.is_sop(&Sequence::new(scaled)));
            // Dropping an entry never leaves a sop.
            if x.len() > 1 {
                assert!(!f.ctx.is_sop(&x.prefix(x.len() - 1)));
            }
        }
    }
}

#[test]
fn colon_chain_ascends() {
    for f in battery() {
        for x in &f.sops {
            let chain: Vec<Ideal> = (1..=4).map(|n| colon_step(&f.ctx, x, n).unwrap()).collect();
            for w in chain.windows(2) {
                assert!(f.ctx.local_contains(&w[1], &w[0]), "{} {x}", f.name);
            }
        }
    }
}

#[test]
fn closure_contains_the_parameter_ideal() {
    for f in battery() {
        for x in &f.sops {
            let r = limit_closure(&f.ctx, x).unwrap();
            let base = f.ctx.with_relations(&x.ideal(f.ctx.ring()));
            assert!(f.ctx.local_contains(&r.closure, &base), "{} {x}", f.name);
            assert!(r.is_proper);
            assert_eq!(f.ctx.local_equal(&r.closure, &base), f.cohen_macaulay, "{} {x}", f.name);
            // Finite length for a full sop.
            let len = f.ctx.local_length(&r.closure).unwrap();
            assert!(len <= f.ctx.local_length(&base).unwrap());
            for (i, c) in r.chain.iter().enumerate() {
                assert!(f.ctx.local_contains(&r.closure, c), "chain term {i}");
            }
        }
    }
}

#[test]
fn closure_shrinks_under_powers_and_ignores_units() {
    for f in battery() {
        let ring = f.ctx.ring();
        for x in &f.sops {
            let c1 = limit_closure(&f.ctx, x).unwrap().closure;
            let c2 = limit_closure(&f.ctx, &x.power(2)).unwrap().closure;
            assert!(f.ctx.local_contains(&c1, &c2), "{} {x}", f.name);
            let unit = &Polynomial::one(ring) - &Polynomial::var(ring, ring.nvars() - 1);
            let scaled = Sequence::new(x.entries().iter().map(|e| &unit * e).collect());
            let cs = limit_closure(&f.ctx, &scaled).unwrap().closure;
            assert!(f.ctx.local_equal(&c1, &cs), "{} {x}", f.name);
        }
    }
}

#[test]
fn lower_dimensional_part_lies_in_every_closure() {
    let f = split();
    let x = f.ctx.poly("x").unwrap();
    for s in &f.sops {
        for n in 1..=3 {
            let c = limit_closure(&f.ctx, &s.power(n)).unwrap().closure;
            assert!(f.ctx.local_member(&x, &c), "{s} n={n}");
        }
    }
}

#[test]
fn closure_in_the_quotient_by_the_unmixed_part() {
    let f = split();
    let n_ideal = f.ctx.ideal(&["x"]).unwrap();
    let q = f.ctx.quotient(&n_ideal).unwrap();
    for s in &f.sops {
        for n in 1..=3 {
            let xs = s.power(n);
            let upstairs = limit_closure(&f.ctx, &xs).unwrap().closure.sum(&n_ideal).unwrap();
            let downstairs = limit_closure(&q, &xs).unwrap().closure;
            assert!(q.local_equal(&upstairs, &downstairs), "{s} n={n}");
        }
    }
}

#[test]
fn truncation_lengths_stabilize_at_the_local_length() {
    for f in battery() {
        for x in &f.sops {
            let i = x.ideal(f.ctx.ring());
            let len = f.ctx.local_length(&i).unwrap();
            let table = f.ctx.truncation_lengths(&i, 24);
            assert!(table.windows(2).all(|w| w[0] <= w[1]), "{} {x}", f.name);
            let first = table.iter().position(|&v| v == len).expect("reaches the length");
            assert!(table[first..].iter().all(|&v| v == len));
            let n = u32::try_from(first).unwrap() + 1;
            assert_eq!(f.ctx.truncation_length_direct(&i, 2 * n).unwrap(), len);
        }
    }
}

#[test]
fn witness_outside_m_squared() {
    let f = split();
    let ring = f.ctx.ring();
    let s = &f.sops[0];
    let c = limit_closure(&f.ctx, &s.power(2)).unwrap().closure;
    assert!(!f.ctx.contained_in_m_power(&c, 2));
    let w = f.ctx.witnesses_outside_m_power(&c, 2);
    assert!(!w.is_empty());
    let m2 = Ideal::maximal_power(ring, 2);
    assert!(w.iter().all(|g| !f.ctx.local_member(g, &m2)));
}

#[test]
fn unmixed_component_agrees_with_the_decomposition() {
    let opts = StructureOptions::default();
    let f = split();
    let top = vec![f.ctx.ideal(&["x"]).unwrap()];
    let x = f.ctx.poly("x").unwrap();
    for s in &f.sops {
        let r = unmixed_component(&f.ctx, s, &UnmixedMode::Both(top.clone()), &opts).unwrap();
        assert_eq!(r.cross_check, Some(true), "{s}");
        assert!(f.ctx.local_equal(&r.component, &f.ctx.ideal(&["x"]).unwrap()));
        // Every generator passes the dimension criterion; y does not.
        let j = f.ctx.defining_ideal();
        for g in r.component.generators() {
            if !f.ctx.local_member(g, &zero(&f.ctx)) {
                assert!(f.ctx.local_dim(&j.colon(g).unwrap()).unwrap() < f.ctx.dim());
            }
        }
        let y = f.ctx.poly("y").unwrap();
        assert_eq!(f.ctx.local_dim(&j.colon(&y).unwrap()).unwrap(), f.ctx.dim());
        assert!(f.ctx.local_member(&x, &r.component));
    }

    for f in battery().into_iter().filter(|f| f.unmixed) {
        for s in &f.sops {
            let r = unmixed_component(&f.ctx, s, &UnmixedMode::TheoremA, &opts).unwrap();
            assert!(f.ctx.local_equal(&r.component, &zero(&f.ctx)), "{} {s}", f.name);
        }
    }

    let planes = battery().into_iter().find(|f| f.name == "planes").unwrap();
    let comps = vec![planes.ctx.ideal(&["x", "y"]).unwrap(), planes.ctx.ideal(&["z", "w"]).unwrap()];
    let r = unmixed_component(&planes.ctx, &planes.sops[0], &UnmixedMode::Both(comps), &opts).unwrap();
    assert_eq!(r.cross_check, Some(true));
}

#[test]
fn filtration_levels_telescope() {
    let opts = StructureOptions::default();
    for f in battery() {
        for s in &f.sops {
            let filt = dimension_filtration(&f.ctx, s, &opts).unwrap();
            assert!(filt.dims.windows(2).all(|w| w[0] < w[1]), "{} {s}", f.name);
            for w in filt.chain.windows(2) {
                assert!(f.ctx.local_contains(&w[1], &w[0]));
            }
            if !filt.goodness_verified {
                continue;
            }
            for j in 1..=f.ctx.dim() {
                let expected = filt.level_for(j).cloned().unwrap_or_else(|| zero(&f.ctx));
                assert!(f.ctx.local_equal(&filt.intersections[j - 1], &expected), "{} {s} j={j}", f.name);
            }
        }
    }
}

#[test]
fn filtration_with_an_embedded_point_has_three_levels() {
    // (x) ∩ (y, z) ∩ m^3: a plane, a line and an embedded point.
    let ctx = LocalRingContext::from_strs(&["x", "y", "z"], &["x^2*y", "x*y^2", "x*y*z", "x^2*z", "x*z^2"]).unwrap();
    let s = ctx.sequence(&["x + y", "z"]).unwrap();
    let opts = StructureOptions::default();
    let filt = dimension_filtration(&ctx, &s, &opts).unwrap();
    assert_eq!(filt.dims, vec![0, 1, 2]);
    assert!(ctx.local_equal(&filt.chain[0], &ctx.ideal(&["x*y", "x*z"]).unwrap()));
    assert!(ctx.local_equal(&filt.chain[1], &ctx.ideal(&["x"]).unwrap()));
    let comps = vec![ctx.ideal(&["x"]).unwrap()];
    let u = unmixed_component(&ctx, &s, &UnmixedMode::Both(comps), &opts).unwrap();
    assert_eq!(u.cross_check, Some(true));
    assert!(ctx.local_equal(&u.component, &filt.chain[1]));
}

#[test]
fn samuel_table_on_the_catalan_hypersurface() {
    let f = battery().into_iter().find(|f| f.name == "catalan").unwrap();
    assert!(hilbert_samuel(&f.ctx, &f.ctx.ideal(&["y", "u", "v"]).unwrap(), 3).is_err());
    // A hypersurface is Cohen-Macaulay, so l(R/q^k) = e * C(k + 2, 3).
    let hs = hilbert_samuel(&f.ctx, &f.ctx.ideal(&["u", "v", "x + y"]).unwrap(), 5).unwrap();
    assert_eq!(hs.values, vec![2, 8, 20, 40, 70]);
    assert_eq!(hs.multiplicity, Some(2));
}

#[test]
fn ij_functions_are_bounded_and_increasing() {
    for f in battery() {
        let d = f.ctx.dim() as u32;
        for s in &f.sops {
            let n_max = if f.ctx.nvars() >= 4 && f.cohen_macaulay { 2 } else { 4 };
            let t = ij_functions(&f.ctx, s, n_max).unwrap();
            assert!(t.is_nonnegative() && t.is_nondecreasing(), "{} {s}", f.name);
            if f.cohen_macaulay {
                assert!(t.rows.iter().all(|r| r.i == 0 && r.j == 0), "{} {s}", f.name);
            }
            let ci = t.rows[0].i.max(1);
            let cj = t.rows[0].j.max(1);
            for r in &t.rows {
                let n = i128::from(r.n);
                assert!(r.i <= ci * n.pow(d.saturating_sub(1)), "{} {s} n={}", f.name, r.n);
                assert!(r.j <= cj * n.pow(d.saturating_sub(2)), "{} {s} n={}", f.name, r.n);
            }
        }
    }
}

#[test]
fn topology_scan_separates_unmixed_rings() {
    for f in battery() {
        if f.ctx.nvars() >= 4 && f.cohen_macaulay {
            continue;
        }
        let s = &f.sops[0];
        let scan = topology_scan(&f.ctx, s, 3, 6).unwrap();
        match scan.verdict {
            ScanVerdict::EquivalenceEvidence { n0 } => {
                assert!(f.unmixed, "{}", f.name);
                assert_eq!(n0, 3);
            }
            ScanVerdict::FailureAt { k, witness } => {
                assert!(!f.unmixed, "{}", f.name);
                assert_eq!(k, 2);
                assert!(!f.ctx.local_member(&witness, &Ideal::maximal_power(f.ctx.ring(), 2)));
            }
        }
        assert!(!scan.warnings.is_empty());
    }
}

fn cm_detmap_cases() -> Vec<(LocalRingContext, Sequence, Sequence)> {
    let plane = LocalRingContext::from_strs(&["x", "y"], &[]).unwrap();
    let cusp = LocalRingContext::from_strs(&["x", "y"], &["y^2 - x^3"]).unwrap();
    let seq = |c: &LocalRingContext, s: &[&str]| c.sequence(s).unwrap();
    vec![
        (plane.clone(), seq(&plane, &["x^2", "y^2"]), seq(&plane, &["x^2 + x*y^2", "y^2 - x^3"])),
        (plane.clone(), seq(&plane, &["x", "y"]), seq(&plane, &["x*y", "x^2 + y^2"])),
        (plane.clone(), seq(&plane, &["x", "y"]), seq(&plane, &["x*y", "x^2"])),
        (cusp.clone(), seq(&cusp, &["x"]), seq(&cusp, &["x^2 + y*x"])),
    ]
}

#[test]
fn determinantal_map_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (ctx, x, y) in cm_detmap_cases() {
        let p = express_in_terms(&ctx, &y, &x).unwrap();
        assert!(p.rows_hold(&ctx) && p.cramer_holds(&ctx), "{x} {y}");
        assert!(detmap_well_defined(&ctx, &p).unwrap());
        let verdict = detmap_injective(&ctx, &p).unwrap();
        assert_eq!(verdict, ctx.is_sop(&y), "{x} {y}");
        for _ in 0..5 {
            let q = p.perturbed(&ctx, &mut rng);
            assert!(q.rows_hold(&ctx) && q.cramer_holds(&ctx));
            assert_eq!(detmap_injective(&ctx, &q).unwrap(), verdict, "{x} {y}");
        }
    }
}

fn small_poly(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u16..=2, nvars), -3i64..=3), 0..=3)
}

fn build(ctx: &LocalRingContext, terms: &[(Vec<u16>, i64)]) -> Polynomial {
    Polynomial::from_terms(
        ctx.ring(),
        terms.iter().map(|(e, c)| (Monomial::from_exponents(e), Rational::from_int(*c))).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bareiss_matches_expansion(entries in prop::collection::vec(small_poly(3), 9..=16)) {
        let ctx = LocalRingContext::from_strs(&["x", "y", "z"], &[]).unwrap();
        let t = if entries.len() >= 16 { 4 } else { 3 };
        let m: Vec<Vec<Polynomial>> = (0..t).map(|i| (0..t).map(|j| build(&ctx, &entries[i * t + j])).collect()).collect();
        prop_assert_eq!(determinant_bareiss(&m), determinant_expansion(&m));
    }

    #[test]
    fn local_membership_is_monotone(
        f in small_poly(2),
        g in small_poly(2),
        h in small_poly(2),
        a in 1u16..=3,
        b in 1u16..=3,
    ) {
        let ctx = LocalRingContext::from_strs(&["x", "y"], &[]).unwrap();
        let ring = ctx.ring();
        let xa = Polynomial::monomial(ring, Monomial::from_exponents(&[a, 0]), Rational::one());
        let unit = &Polynomial::one(ring) + &Polynomial::var(ring, 1);
        let small = Ideal::new(ring, vec![&xa * &unit, build(&ctx, &g)]);
        let big = small.add_generators(&[build(&ctx, &h), Polynomial::monomial(ring, Monomial::from_exponents(&[0, b]), Rational::one())]);
        let f = build(&ctx, &f);
        if ctx.local_member(&f, &small) {
            prop_assert!(ctx.local_member(&f, &big));
        }
        prop_assert!(ctx.local_member(&xa, &small));
        prop_assert!(ctx.local_contains(&big, &small));
    }

    #[test]
    fn local_length_matches_truncated_linear_algebra(
        a in 1u16..=3,
        b in 1u16..=3,
        extra in small_poly(2),
    ) {
        let ctx = LocalRingContext::from_strs(&["x", "y"], &[]).unwrap();
        let ring = ctx.ring();
        let mut gens = vec![
            Polynomial::monomial(ring, Monomial::from_exponents(&[a, 0]), Rational::one()),
            Polynomial::monomial(ring, Monomial::from_exponents(&[0, b]), Rational::one()),
        ];
        let e = build(&ctx, &extra);
        if !e.constant_coeff().is_zero() {
            return Ok(());
        }
        gens.push(e);
        let i = Ideal::new(ring, gens.clone());
        // I·(x - 1, y) agrees with I at the origin but adds a component at (1, 0).
        let away = Ideal::new(ring, vec![&Polynomial::var(ring, 0) - &Polynomial::one(ring), Polynomial::var(ring, 1)]);
        let moved = i.product(&away).unwrap();
        let n = u32::from(a + b);
        let oracle = TruncatedQuotient { nvars: 2, max_degree: n - 1, standard: |m: &Monomial| m.degree() < n };
        let expected = oracle.quotient_dim(moved.generators()) as u64;
        prop_assert_eq!(ctx.local_length(&i).unwrap(), expected);
        prop_assert_eq!(ctx.local_length(&moved).unwrap(), expected);
        prop_assert!(moved.vecspace_dim().unwrap() > expected);
    }
}
