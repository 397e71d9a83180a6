use fouranchor_core::poly::roots::{univariate_roots, CPoly};
use fouranchor_core::poly::{mp_gcd, resultant, ZPoly};
use fouranchor_core::{solve, solve_with, Configuration, Point2, RatMPoly, SolveOptions};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

const V: [&str; 2] = ["x", "y"];

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn poly(terms: Vec<((u32, u32), i64)>) -> RatMPoly {
    RatMPoly::from_terms(&V, terms.into_iter().map(|((i, j), c)| (vec![i, j], q(c, 1))))
}

fn arb_poly(max_deg: u32) -> impl Strategy<Value = RatMPoly> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg), -5i64..=5), 1..6).prop_map(poly)
}

fn arb_zpoly(max_deg: usize) -> impl Strategy<Value = ZPoly> {
    prop::collection::vec(-20i64..=20, 1..=max_deg + 1)
        .prop_map(|c| ZPoly::new(c.into_iter().map(BigInt::from).collect()))
        .prop_filter("non-constant", |p| p.degree().unwrap_or(0) > 0)
}

/// Anchors on a small rational grid, constants in [1/4, 4].
fn arb_config() -> impl Strategy<Value = Configuration> {
    let coord = (-6i64..=6).prop_map(|n| q(n, 2));
    let k = (1i64..=16, 1i64..=4).prop_map(|(n, d)| q(n, d * 4).max(q(1, 4)).min(q(4, 1)));
    (prop::array::uniform4((coord.clone(), coord)), prop::array::uniform4(k))
        .prop_map(|(pts, ks)| Configuration::new(pts.map(|(x, y)| Point2::new(x, y)), ks))
        .prop_filter("valid", |c| fouranchor_core::validate(c).is_ok_and(|v| v.all_ok()))
}

fn at_x(r: &RatMPoly, t: &BigRational) -> BigRational {
    let point: Vec<BigRational> = r.vars().iter().map(|_| t.clone()).collect();
    r.eval_rational(&point)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resultant_is_multiplicative(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2), t in -4i64..=4) {
        prop_assume!(a.degree_in(1).unwrap_or(0) > 0 && b.degree_in(1).unwrap_or(0) > 0 && c.degree_in(1).unwrap_or(0) > 0);
        let ab = &a * &b;
        let lhs = resultant(&ab, &c, "y").unwrap();
        let rhs = &resultant(&a, &c, "y").unwrap() * &resultant(&b, &c, "y").unwrap();
        let t = q(t, 1);
        prop_assert_eq!(at_x(&lhs, &t), at_x(&rhs, &t));
    }

    #[test]
    fn gcd_recovers_a_planted_factor(a in arb_zpoly(5), b in arb_zpoly(5), c in arb_zpoly(4)) {
        let g = a.mul(&c).gcd(&b.mul(&c));
        prop_assert!(g.div_exact(&c.primitive_part()).is_some());
        prop_assert!(a.mul(&c).div_exact(&g).is_some());
        prop_assert!(b.mul(&c).div_exact(&g).is_some());
    }

    #[test]
    fn bivariate_gcd_divides_both(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
        prop_assume!(!c.is_zero() && c.total_degree().unwrap_or(0) > 0);
        let g = mp_gcd(&(&a * &c), &(&b * &c)).unwrap();
        prop_assert!((&a * &c).div_exact(&g).is_some());
        prop_assert!((&b * &c).div_exact(&g).is_some());
        prop_assert!(g.total_degree() >= c.total_degree() || a.is_zero() || b.is_zero());
    }

    #[test]
    fn roots_reproduce_the_polynomial(rs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..12)) {
        let roots: Vec<Complex64> = rs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let p = CPoly::from_roots(&roots);
        let found = univariate_roots(&p).unwrap();
        let total: usize = found.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total, roots.len());
        for r in &roots {
            let near = found.iter().map(|f| (f.value - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(near < 1e-4, "root {} missed by {}", r, near);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn solutions_close_under_swap_and_conjugation(cfg in arb_config()) {
        let rep = solve(&cfg);
        for s in &rep.solutions {
            let z = s.coords();
            let tol = 1e-6 * (1.0 + s.max_abs());
            let swapped = [z[2], z[3], z[0], z[1]];
            let conj = z.map(|c| c.conj());
            let has = |w: &[Complex64; 4]| rep.solutions.iter().any(|t| {
                t.coords().iter().zip(w).all(|(a, b)| (a - b).norm() <= tol)
            });
            prop_assert!(has(&swapped));
            prop_assert!(has(&conj));
        }
    }

    #[test]
    fn solving_is_deterministic(cfg in arb_config(), seed in any::<u64>()) {
        let opts = SolveOptions { seed, ..Default::default() };
        let a = solve_with(&cfg, &opts);
        let b = solve_with(&cfg, &opts);
        prop_assert_eq!(a.solutions, b.solutions);
    }
}
