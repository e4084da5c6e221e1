use num_bigint::BigInt;
use proptest::prelude::*;

use skewrec::measure::{
    graeffe, house, is_kronecker, mahler, roots_certified, Enclosure,
};
use skewrec::search::{min_house, min_mahler, Kind, SearchOptions, SearchSpace};
use skewrec::structure::{rekurs_decompose, RekursDecomposition};
use skewrec::symplectic::{
    charpoly, omega, random_anti_symplectic, random_symplectic, reflection, IntMatrix,
};
use skewrec::{Error, IntPoly};

const TOL: f64 = 1e-10;

fn poly(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1).prop_map(|c| IntPoly::from_i64s(&c))
}

fn monic(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-h..=h, 0..max_deg).prop_map(|mut c| {
        c.push(1);
        IntPoly::from_i64s(&c)
    })
}

/// Monic with nonzero constant term.
fn monic_unit_free(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    (monic(max_deg, h), prop_oneof![(-h..=-1), (1..=h)]).prop_map(|(f, c0)| {
        let mut c = f.into_coeffs();
        if c.len() == 1 {
            c.insert(0, BigInt::from(c0));
        } else {
            c[0] = BigInt::from(c0);
        }
        IntPoly::new(c)
    })
}

fn reciprocal_of_degree(d: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-h..=h, d).prop_map(move |free| {
        SearchSpace::new(Kind::Reciprocal, 2 * d, h as u32).unwrap().from_free(&free)
    })
}

fn skew_of_degree(d: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-h..=h, d).prop_map(move |free| {
        SearchSpace::new(Kind::SkewReciprocal, 2 * d, h as u32).unwrap().from_free(&free)
    })
}

fn close(a: &Enclosure, b: &Enclosure, slack: f64) -> bool {
    a.lo - slack <= b.hi && b.lo - slack <= a.hi
}

proptest! {
    #[test]
    fn canonical_form(f in poly(8, 3), g in poly(8, 3)) {
        for r in [&f * &g, &f + &g, &f - &g, -&f] {
            prop_assert!(r.coeffs().last().is_none_or(|c| c != &BigInt::from(0)));
        }
    }

    #[test]
    fn reverse_is_involution(f in monic_unit_free(10, 5)) {
        prop_assert_eq!(f.reverse().unwrap().reverse().unwrap(), f);
    }

    #[test]
    fn reciprocal_products(d1 in 1usize..4, d2 in 1usize..4, a in any::<u64>()) {
        let f = SearchSpace::new(Kind::Reciprocal, 2 * d1, 3).unwrap().at(a as u128 % 7u128.pow(d1 as u32));
        let g = SearchSpace::new(Kind::Reciprocal, 2 * d2, 3).unwrap().at((a >> 20) as u128 % 7u128.pow(d2 as u32));
        prop_assert!((&f * &g).is_reciprocal());
    }

    #[test]
    fn square_substitution_is_skew(g in (1usize..5).prop_flat_map(|d| reciprocal_of_degree(d, 3))) {
        let f = g.substitute_square();
        prop_assert!(f.is_skew_reciprocal().unwrap());
        prop_assert_eq!(f.extract_square_substitution().unwrap(), g);
    }

    #[test]
    fn skew_identity_matches_functional_equation(f in (1usize..5).prop_flat_map(|d| skew_of_degree(d, 3))) {
        // (-1)^d t^{2d} f(-1/t) is the reverse of f(-t), times (-1)^d
        let d = f.degree().unwrap() / 2;
        let rhs = f.negate_variable().reverse().unwrap();
        let rhs = if d % 2 == 1 { -&rhs } else { rhs };
        prop_assert_eq!(&rhs, &f);
        let expected = if d % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(f.coeff(0), BigInt::from(expected));
    }

    #[test]
    fn skew_test_agrees_with_functional_equation(f in monic_unit_free(8, 2)) {
        if let Some(deg) = f.degree().filter(|d| d % 2 == 0) {
            let d = deg / 2;
            let rhs = f.negate_variable().reverse().unwrap();
            let rhs = if d % 2 == 1 { -&rhs } else { rhs };
            prop_assert_eq!(f.is_skew_reciprocal().unwrap(), rhs == f);
        } else {
            prop_assert_eq!(f.is_skew_reciprocal(), Err(Error::OddDegree(f.degree().unwrap())));
        }
    }

    #[test]
    fn divrem_reconstructs(f in poly(10, 9), g in monic(5, 4)) {
        let (q, r) = f.divrem_exact(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.degree().is_none_or(|d| d < g.degree().unwrap()));
    }

    #[test]
    fn gcd_divides_both(f in monic(6, 3), g in monic(6, 3), c in monic(3, 2)) {
        let (a, b) = (&f * &c, &g * &c);
        let gcd = a.gcd_primitive(&b).unwrap();
        prop_assert!(a.exact_quotient(&gcd).is_ok());
        prop_assert!(b.exact_quotient(&gcd).is_ok());
        prop_assert!(gcd.exact_quotient(&c.primitive_part()).is_ok());
    }

    #[test]
    fn text_forms_roundtrip(f in poly(10, 50)) {
        prop_assert_eq!(IntPoly::parse(&f.to_string()).unwrap(), f.clone());
        prop_assert_eq!(IntPoly::parse(&f.to_dense_string()).unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<IntPoly>(&json).unwrap(), f);
    }

    #[test]
    fn padding_keeps_measure(g in (1usize..4).prop_flat_map(|d| reciprocal_of_degree(d, 2)), k in 0usize..4) {
        let d = g.degree().unwrap();
        let f = g.pad_to_degree(d + k).unwrap();
        prop_assert!(f.is_reciprocal() && f.is_monic());
        prop_assert_eq!(f.degree(), Some(d + k));
        let (mg, mf) = (mahler(&g, TOL).unwrap(), mahler(&f, TOL).unwrap());
        prop_assert!(mg.intersects(&mf));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mahler_is_multiplicative(f in monic(10, 3), g in monic(10, 3)) {
        let (mf, mg) = (mahler(&f, TOL).unwrap(), mahler(&g, TOL).unwrap());
        let mfg = mahler(&(&f * &g), TOL).unwrap();
        prop_assert!(mfg.intersects(&mf.mul(&mg)), "{} vs {}", mfg, mf.mul(&mg));
    }

    #[test]
    fn mahler_at_least_one(f in monic(10, 5)) {
        let m = mahler(&f, TOL).unwrap();
        prop_assert!(m.lo >= 1.0);
        if f.degree().unwrap() > 0 && f.coeffs()[0] != BigInt::from(0) {
            prop_assert!(house(&f, TOL).unwrap().lo >= 1.0);
        }
    }

    #[test]
    fn kronecker_iff_measure_one(f in monic(8, 2)) {
        let m = mahler(&f, TOL).unwrap();
        prop_assert_eq!(is_kronecker(&f), m.is_exactly(1.0));
    }

    #[test]
    fn square_substitution_invariance(g in monic(8, 3)) {
        let f = g.substitute_square();
        let (mg, mf) = (mahler(&g, TOL).unwrap(), mahler(&f, TOL).unwrap());
        prop_assert!(mg.intersects(&mf), "{} vs {}", mg, mf);
        if g.degree().unwrap() > 0 {
            let (hg, hf) = (house(&g, TOL).unwrap(), house(&f, TOL).unwrap());
            if hg.lo >= 1.0 {
                prop_assert!(hf.mul(&hf).intersects(&hg), "{} vs {}", hf.mul(&hf), hg);
            }
        }
    }

    #[test]
    fn reversal_invariance(f in monic_unit_free(8, 4)) {
        let r = f.reverse().unwrap();
        let c0 = r.leading().unwrap().clone();
        // a unit constant term makes rev f monic up to sign, with the same measure
        if c0 == BigInt::from(1) || c0 == BigInt::from(-1) {
            let r = if c0 == BigInt::from(-1) { -&r } else { r };
            prop_assert!(mahler(&f, TOL).unwrap().intersects(&mahler(&r, TOL).unwrap()));
        } else {
            let roots = roots_certified(&r, 1e-9).unwrap();
            let inv = roots_certified(&f, 1e-9).unwrap();
            for d in &roots {
                let z = 1.0 / d.center;
                prop_assert!(inv.iter().any(|e| (e.center - z).norm() < 1e-6));
            }
        }
    }

    #[test]
    fn graeffe_squares_roots(f in monic(8, 4)) {
        let g = graeffe(&f);
        let rf = roots_certified(&f, 1e-9).unwrap();
        let rg = roots_certified(&g, 1e-9).unwrap();
        prop_assert_eq!(rf.len(), rg.len());
        for d in &rf {
            let sq = d.center * d.center;
            let r_sq = 2.0 * d.center.norm() * d.radius + d.radius * d.radius;
            prop_assert!(rg.iter().any(|e| (e.center - sq).norm() <= e.radius + r_sq + 1e-12),
                "{} has no match", sq);
        }
    }

    #[test]
    fn roots_cover_degree(f in monic(10, 6)) {
        let roots = roots_certified(&f, 1e-8).unwrap();
        prop_assert_eq!(roots.len(), f.degree().unwrap());
        prop_assert!(roots.iter().all(|d| d.radius <= 1e-8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rekurs_invariants(f in prop_oneof![skew_of_degree(2, 3), skew_of_degree(4, 2)]) {
        if is_kronecker(&f) {
            prop_assert_eq!(rekurs_decompose(&f), Err(Error::KroneckerInput));
        } else {
            let dec = rekurs_decompose(&f).unwrap();
            prop_assert_eq!(dec.reconstruct(), f.clone());
            match dec {
                RekursDecomposition::SquareSubstitution { g } => {
                    prop_assert!(g.is_reciprocal());
                    prop_assert_eq!(g.degree().unwrap() * 2, f.degree().unwrap());
                }
                RekursDecomposition::NonreciprocalWitness { u, .. } => {
                    prop_assert!(!u.is_reciprocal());
                    prop_assert!(u.eval(&BigInt::from(1)) != BigInt::from(0));
                    prop_assert!(mahler(&f, TOL).unwrap().lo > 1.179 - 1e-9);
                }
            }
        }
    }

    #[test]
    fn sampled_matrices(g in 1usize..5, len in 0usize..31, seed in any::<u64>()) {
        let a = random_symplectic(g, len, seed);
        let b = random_anti_symplectic(g, len, seed ^ 0x5555);
        prop_assert!(a.is_symplectic());
        prop_assert!(b.is_anti_symplectic());
        prop_assert!(charpoly(&a).is_reciprocal());
        prop_assert!(charpoly(&b).is_skew_reciprocal().unwrap());
        let c = random_symplectic(g, len, seed.wrapping_add(1));
        let d = random_anti_symplectic(g, len, seed.wrapping_add(2));
        prop_assert!(a.mul(&c).is_symplectic());
        prop_assert!(b.mul(&d).is_symplectic());
        prop_assert!(a.mul(&b).is_anti_symplectic());
        prop_assert!(b.mul(&a).is_anti_symplectic());
    }
}

#[test]
fn reflection_reverses_form() {
    for g in 1..=6 {
        let r = reflection(g);
        assert_eq!(r.mul(&omega(g)).mul(&r), omega(g).neg());
        assert_eq!(omega(g).mul(&omega(g)), IntMatrix::identity(2 * g).neg());
    }
}

fn opts(jobs: usize) -> SearchOptions {
    SearchOptions { jobs, ..SearchOptions::with_tol(TOL) }
}

#[test]
fn search_count_law_and_witnesses() {
    for kind in [Kind::Reciprocal, Kind::SkewReciprocal] {
        for (degree, height) in [(2, 0), (2, 2), (4, 1), (4, 2), (6, 1)] {
            let space = SearchSpace::new(kind, degree, height).unwrap();
            assert_eq!(space.iter().count() as u128, (2 * height as u128 + 1).pow(degree as u32 / 2));
            let r = min_mahler(&space, &opts(0)).unwrap();
            assert_eq!(r.enumerated, space.size());
            let Some(min) = r.minimum else {
                assert_eq!(r.excluded_kronecker, r.enumerated);
                continue;
            };
            assert!(min.lo > 1.0);
            for w in &r.witnesses {
                assert!(space.contains(w));
                assert!(!is_kronecker(w));
                assert!(mahler(w, TOL).unwrap().intersects(&min));
            }
        }
    }
}

#[test]
fn search_monotone_in_height() {
    for kind in [Kind::Reciprocal, Kind::SkewReciprocal] {
        for degree in [2, 4] {
            let mut prev: Option<Enclosure> = None;
            for height in 1..=3 {
                let space = SearchSpace::new(kind, degree, height).unwrap();
                let Some(m) = min_house(&space, &opts(0)).unwrap().minimum else {
                    assert!(prev.is_none());
                    continue;
                };
                if let Some(p) = prev {
                    assert!(close(&m, &p, 0.0) || m.hi <= p.lo, "{m} after {p}");
                }
                prev = Some(m);
            }
        }
    }
}

#[test]
fn search_independent_of_workers() {
    let space = SearchSpace::new(Kind::SkewReciprocal, 6, 1).unwrap();
    let base = min_mahler(&space, &opts(1)).unwrap();
    for jobs in [2, 3, 8] {
        assert_eq!(min_mahler(&space, &opts(jobs)).unwrap(), base);
    }
}
