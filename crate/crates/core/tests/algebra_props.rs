//! Properties of polynomial arithmetic, Groebner bases and ideal operations,
//! checked against the linear-algebra oracles in `support`.

mod support;

use limclose_core::groebner::{
    buchberger_in, ideal_equal, ideal_member, normal_form, reduce_basis, satisfies_buchberger_criterion,
    BuchbergerOptions,
};
use limclose_core::ideal::Ideal;
use limclose_core::poly::{catalan, catalan_truncated_generating_poly, mod_monomial_power, monomials_of_degree, parse_polynomial, Monomial};
use limclose_core::{MonomialOrder, PolyRing, Polynomial, Rational, RingRef};
use proptest::prelude::*;
use support::{bounded_member, graded_piece, to_vector, TruncatedQuotient};

fn ring(n: usize) -> RingRef {
    let names: Vec<String> = ["x", "y", "z", "u", "v"][..n].iter().map(|s| s.to_string()).collect();
    PolyRing::new(&names, MonomialOrder::grevlex())
}

fn build(ring: &RingRef, terms: &[(Vec<u16>, i64)]) -> Polynomial {
    Polynomial::from_terms(
        ring,
        terms.iter().map(|(e, c)| (Monomial::from_exponents(e), Rational::from_int(*c))).collect(),
    )
}

/// Terms with exponents summing to at most `deg`.
fn terms(nvars: usize, deg: u16, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
    let term = (prop::collection::vec(0..=deg, nvars), -5i64..=5).prop_map(move |(mut e, c)| {
        while e.iter().sum::<u16>() > deg {
            let i = e.iter().position(|&x| x > 0).unwrap();
            e[i] -= 1;
        }
        (e, c)
    });
    prop::collection::vec(term, 1..=max_terms)
}

/// Homogeneous terms of degree exactly `deg`.
fn homogeneous_terms(nvars: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
    let monos: Vec<Vec<u16>> = monomials_of_degree(nvars, deg).iter().map(|m| m.exponents().to_vec()).collect();
    prop::collection::vec((prop::sample::select(monos), -4i64..=4), 1..=max_terms)
}

fn ideal_gens(nvars: usize) -> impl Strategy<Value = Vec<Vec<(Vec<u16>, i64)>>> {
    prop::collection::vec(terms(nvars, 3, 3), 1..=3)
}

fn homogeneous_gens(nvars: usize) -> impl Strategy<Value = Vec<Vec<(Vec<u16>, i64)>>> {
    prop::collection::vec((1u32..=3).prop_flat_map(move |d| homogeneous_terms(nvars, d, 3)), 1..=3)
}

fn polys(ring: &RingRef, raw: &[Vec<(Vec<u16>, i64)>]) -> Vec<Polynomial> {
    raw.iter().map(|t| build(ring, t)).filter(|p| !p.is_zero()).collect()
}

/// Monomials of degree `d` in the leading-term ideal: the dimension of the
/// degree-`d` piece of a homogeneous ideal with this basis.
fn lead_count(lms: &[Monomial], nvars: usize, d: u32) -> usize {
    monomials_of_degree(nvars, d).iter().filter(|m| lms.iter().any(|l| l.divides(m))).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in terms(5, 6, 4), b in terms(5, 6, 4), c in terms(5, 6, 4)) {
        let r = ring(5);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_forms_are_fixed_points(a in terms(4, 5, 6), b in terms(4, 5, 6)) {
        let r = ring(4);
        let p = &build(&r, &a) * &build(&r, &b);
        prop_assert_eq!(&Polynomial::from_terms(&r, p.terms().to_vec()), &p);
        let printed = p.to_string();
        let back = parse_polynomial(&r, &printed).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn division_identity(f in terms(3, 4, 5), gs in ideal_gens(3)) {
        let r = ring(3);
        let f = build(&r, &f);
        let gs = polys(&r, &gs);
        prop_assume!(!gs.is_empty());
        let cf = normal_form(&f, &gs);
        let mut acc = cf.remainder.clone();
        for (q, g) in cf.coefficients.iter().zip(&gs) {
            acc = &acc + &(q * g);
        }
        prop_assert_eq!(acc, f);
        for (m, _) in cf.remainder.terms() {
            prop_assert!(gs.iter().all(|g| !g.lm().divides(m)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reduced_basis_ignores_generator_order(gs in ideal_gens(3), seed in any::<u64>()) {
        let r = ring(3);
        let gs = polys(&r, &gs);
        prop_assume!(!gs.is_empty());
        let mut shuffled: Vec<Polynomial> = gs.clone();
        // Rotate, reverse and rescale deterministically from the seed.
        shuffled.rotate_left((seed as usize) % gs.len());
        if seed & 1 == 1 {
            shuffled.reverse();
        }
        let k = Rational::from_int((seed % 7) as i64 + 1);
        let shuffled: Vec<Polynomial> = shuffled.iter().map(|g| g.scale(&k)).collect();
        let a = Ideal::new(&r, gs);
        let b = Ideal::new(&r, shuffled);
        prop_assert_eq!(a.reduced_generators(), b.reduced_generators());
        prop_assert!(ideal_equal(a.gb(), b.gb()).unwrap());
    }

    #[test]
    fn computed_bases_satisfy_the_criterion(gs in ideal_gens(3), lex in any::<bool>()) {
        let order = if lex { MonomialOrder::lex() } else { MonomialOrder::grevlex() };
        let r = ring(3).with_order(order);
        let gs = polys(&r, &gs);
        prop_assume!(!gs.is_empty());
        let gb = buchberger_in(&r, &gs, BuchbergerOptions::default()).unwrap();
        if gb.len() <= 12 {
            prop_assert!(satisfies_buchberger_criterion(gb.generators()));
        }
        for g in &gs {
            prop_assert!(gb.contains(g));
        }
    }

    #[test]
    fn integer_and_rational_engines_agree(gs in ideal_gens(3), lex in any::<bool>()) {
        let order = if lex { MonomialOrder::lex() } else { MonomialOrder::grevlex() };
        let r = ring(3).with_order(order);
        let gs = polys(&r, &gs);
        prop_assume!(!gs.is_empty());
        let plain = buchberger_in(&r, &gs, BuchbergerOptions::default()).unwrap();
        let tracked = buchberger_in(&r, &gs, BuchbergerOptions { track_cofactors: true, ..Default::default() }).unwrap();
        let tracked = reduce_basis(tracked);
        prop_assert_eq!(plain.generators(), tracked.generators());
    }

    #[test]
    fn certificates_multiply_back(f in terms(3, 3, 3), gs in ideal_gens(3), cofs in prop::collection::vec(terms(3, 2, 2), 3)) {
        let r = ring(3);
        let gs = polys(&r, &gs);
        prop_assume!(!gs.is_empty());
        // A guaranteed member next to an arbitrary polynomial.
        let mut member = Polynomial::zero(&r);
        for (g, c) in gs.iter().zip(&cofs) {
            member = &member + &(g * &build(&r, c));
        }
        let gb = buchberger_in(&r, &gs, BuchbergerOptions { track_cofactors: true, ..Default::default() }).unwrap();
        for f in [member, build(&r, &f)] {
            let m = ideal_member(&f, &gb).unwrap();
            if let Some(cert) = m.certificate {
                prop_assert!(m.member);
                let mut acc = Polynomial::zero(&r);
                for (c, g) in cert.iter().zip(&gs) {
                    acc = &acc + &(c * g);
                }
                prop_assert_eq!(acc, f);
            } else {
                prop_assert!(!m.member);
                prop_assert_eq!(gb.reduce(&f), m.remainder);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Homogeneous ideals: membership of a form of degree at most 6 needs
    /// cofactors of degree at most 6, so the bounded oracle is exact.
    #[test]
    fn membership_matches_linear_algebra(gs in homogeneous_gens(3), f in (1u32..=5).prop_flat_map(|d| homogeneous_terms(3, d, 4)), cofs in prop::collection::vec((0u32..=2).prop_flat_map(|d| homogeneous_terms(3, d, 2)), 3)) {
        let r = ring(3);
        let gs = polys(&r, &gs);
        prop_assume!(!gs.is_empty());
        let ideal = Ideal::new(&r, gs.clone());
        let f = build(&r, &f);
        prop_assert_eq!(ideal.contains(&f), bounded_member(&f, &gs, 6));
        // A member built from homogeneous pieces of matching degree.
        let d = gs[0].total_degree() + cofs[0].first().map_or(0, |t| t.0.iter().sum::<u16>() as u32);
        let mut member = Polynomial::zero(&r);
        for (g, c) in gs.iter().zip(&cofs) {
            let c = build(&r, c);
            if c.is_zero() || g.total_degree() + c.total_degree() != d {
                continue;
            }
            member = &member + &(g * &c);
        }
        prop_assert!(ideal.contains(&member));
        prop_assert!(bounded_member(&member, &gs, 6));
    }

    /// Arbitrary ideals: the oracle can only certify membership.
    #[test]
    fn bounded_membership_implies_membership(gs in ideal_gens(3), f in terms(3, 3, 3)) {
        let r = ring(3);
        let gs = polys(&r, &gs);
        prop_assume!(!gs.is_empty());
        let f = build(&r, &f);
        if bounded_member(&f, &gs, 6) {
            prop_assert!(Ideal::new(&r, gs).contains(&f));
        }
    }

    #[test]
    fn intersection_matches_linear_algebra(a in homogeneous_gens(3), b in homogeneous_gens(3)) {
        let r = ring(3);
        let (a, b) = (polys(&r, &a), polys(&r, &b));
        prop_assume!(!a.is_empty() && !b.is_empty());
        let (i, k) = (Ideal::new(&r, a.clone()), Ideal::new(&r, b.clone()));
        let meet = i.intersect(&k).unwrap();
        for g in meet.generators() {
            prop_assert!(i.contains(g) && k.contains(g));
        }
        let lms = meet.gb().leading_monomials();
        for d in 0..=6 {
            let ia = graded_piece(&a, 3, d);
            let kb = graded_piece(&b, 3, d);
            let mut sum = graded_piece(&a, 3, d);
            for g in &b {
                if g.total_degree() <= d {
                    for m in monomials_of_degree(3, d - g.total_degree()) {
                        sum.insert(to_vector(&g.mul_term(&m, &Rational::one())));
                    }
                }
            }
            let expected = ia.rank() + kb.rank() - sum.rank();
            prop_assert_eq!(lead_count(&lms, 3, d), expected, "degree {}", d);
        }
    }

    #[test]
    fn colon_matches_linear_algebra(a in homogeneous_gens(3), g in (1u32..=2).prop_flat_map(|d| homogeneous_terms(3, d, 3))) {
        let r = ring(3);
        let a = polys(&r, &a);
        let g = build(&r, &g);
        prop_assume!(!a.is_empty() && !g.is_zero());
        let i = Ideal::new(&r, a.clone());
        let q = i.colon(&g).unwrap();
        for h in q.generators() {
            prop_assert!(i.contains(&(h * &g)));
        }
        for h in i.generators() {
            prop_assert!(q.contains(h));
        }
        let lms = q.gb().leading_monomials();
        let e = g.total_degree();
        for d in 0..=4 {
            // dim (I : g)_d = dim K[x]_d - rank(h g mod I_{d+e}).
            let piece = graded_piece(&a, 3, d + e);
            let mut both = graded_piece(&a, 3, d + e);
            for m in monomials_of_degree(3, d) {
                both.insert(to_vector(&g.mul_term(&m, &Rational::one())));
            }
            let image = both.rank() - piece.rank();
            let expected = monomials_of_degree(3, d).len() - image;
            prop_assert_eq!(lead_count(&lms, 3, d), expected, "degree {}", d);
        }
    }

    #[test]
    fn saturation_is_a_fixed_point(gs in ideal_gens(3), g in terms(3, 2, 2)) {
        let r = ring(3);
        let gs = polys(&r, &gs);
        let g = build(&r, &g);
        prop_assume!(!gs.is_empty() && !g.is_zero());
        let i = Ideal::new(&r, gs);
        let (sat, _) = i.saturate(&g).unwrap();
        prop_assert!(sat.equals(&sat.colon(&g).unwrap()));
        prop_assert!(sat.contains_ideal(&i));
    }

    #[test]
    fn quotient_dimension_matches_row_reduction(a in 1u16..=3, b in 1u16..=3, c in 1u16..=3, gs in prop::collection::vec(terms(3, 3, 3), 0..=2)) {
        let r = ring(3);
        let mut gens = vec![build(&r, &[(vec![a, 0, 0], 1)]), build(&r, &[(vec![0, b, 0], 1)]), build(&r, &[(vec![0, 0, c], 1)])];
        gens.extend(polys(&r, &gs));
        let i = Ideal::new(&r, gens.clone());
        let oracle = TruncatedQuotient {
            nvars: 3,
            max_degree: (a + b + c) as u32,
            standard: |m: &Monomial| m.exponent(0) < a && m.exponent(1) < b && m.exponent(2) < c,
        };
        prop_assert_eq!(i.vecspace_dim().unwrap() as usize, oracle.quotient_dim(&gens));
    }

    #[test]
    fn krull_dimension_matches_the_lead_ideal(gs in ideal_gens(3)) {
        let r = ring(3);
        let gs = polys(&r, &gs);
        let i = Ideal::new(&r, gs);
        prop_assume!(!i.is_unit());
        let lead: Vec<Polynomial> = i.gb().leading_monomials().into_iter().map(|m| Polynomial::monomial(&r, m, Rational::one())).collect();
        prop_assert_eq!(i.krull_dim().unwrap(), Ideal::new(&r, lead).krull_dim().unwrap());
    }
}

#[test]
fn catalan_recurrence_and_functional_equation() {
    for k in 0..=20 {
        assert!(catalan(k).satisfies_recurrence(), "k = {k}");
    }
    let r = PolyRing::new(&["t", "s"], MonomialOrder::grevlex());
    let t = Polynomial::var(&r, 0);
    for n in 1..=12usize {
        // C_trunc = Σ_{i<n} C_i t^i, obtained as the uv-series at u = t, v = 1.
        let c = catalan_truncated_generating_poly(&r, "t", "s", n - 1).unwrap();
        let c = c.substitute(&[t.clone(), Polynomial::one(&r)]);
        let lhs = &(&c - &Polynomial::one(&r)) - &(&t * &(&c * &c));
        assert!(mod_monomial_power(&lhs, &[0], n as u16).unwrap().is_zero(), "n = {n}");
    }
}

#[test]
fn elimination_closed_forms() {
    let cases: &[(&[&str], &[&str], &[usize], &[&str])] = &[
        // Twisted cubic.
        (&["t", "a", "b", "c"], &["a - t", "b - t^2", "c - t^3"], &[0], &["b - a^2", "c - a*b", "a*c - b^2"]),
        // Cusp.
        (&["t", "x", "y"], &["x - t^2", "y - t^3"], &[0], &["x^3 - y^2"]),
        // Rational circle.
        (&["t", "x", "y"], &["(1 + t^2)*x - (1 - t^2)", "(1 + t^2)*y - 2*t"], &[0], &["x^2 + y^2 - 1"]),
        // Degree-2 Veronese of the line.
        (&["s", "t", "a", "b", "c"], &["a - s^2", "b - s*t", "c - t^2"], &[0, 1], &["a*c - b^2"]),
        // Degree-4 Veronese and its non-normal projection.
        (&["s", "t", "p", "q", "r", "w"], &["p - s^4", "q - s^3*t", "r - s*t^3", "w - t^4"], &[0, 1], &["q*r - p*w", "q^3 - p^2*r", "r^3 - q*w^2", "p*r^2 - q^2*w"]),
        // Node.
        (&["t", "x", "y"], &["x - (t^2 - 1)", "y - t*(t^2 - 1)"], &[0], &["y^2 - x^2*(x + 1)"]),
        // Linear elimination.
        (&["x", "y", "z"], &["x + y + z", "x - y"], &[0], &["2*y + z"]),
        // Projection of a line in space.
        (&["x", "y", "z"], &["x - y", "y - z"], &[0, 1], &[]),
        // Parabola.
        (&["t", "x", "y"], &["x - t", "y - t^2"], &[0], &["y - x^2"]),
        // Product map.
        (&["s", "t", "x", "y", "z"], &["x - s", "y - t", "z - s*t"], &[0, 1], &["z - x*y"]),
    ];
    for (vars, gens, drop, expected) in cases {
        let r = PolyRing::new(vars, MonomialOrder::grevlex());
        let i = Ideal::parse(&r, gens).unwrap();
        let e = i.eliminate(drop);
        let want = Ideal::parse(&r, expected).unwrap();
        assert!(e.equals(&want), "{gens:?}: got {:?}", e.reduced_generators());
    }
}
