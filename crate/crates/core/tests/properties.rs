use duopos::domains::{
    classify_point, scan_map, sphere_to_coeffs, AxisRange, BasisKind, Constraint, ConstraintSet, MapSpec, Problem,
    SpherePoint, DEFAULT_SNAP_BITS,
};
use duopos::polycore::snap;
use duopos::sturm::{count_nonneg, count_real};
use duopos::verify::{finite_difference, oracle_root_count, Interval, CLUSTER_TOL};
use duopos::{Polynomial, Rational, Var};
use proptest::prelude::*;

fn problem(basis: BasisKind, orders: &[u32], cs: Vec<Constraint>) -> Problem {
    Problem::new(basis, orders.to_vec(), ConstraintSet::new(cs).unwrap(), DEFAULT_SNAP_BITS).unwrap()
}

fn s2(alpha: f64, beta: f64) -> SpherePoint {
    SpherePoint::S2 { alpha, beta }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sturm_agrees_with_companion(coeffs in prop::collection::vec(-1.0f64..1.0, 2..10)) {
        let mut c: Vec<Rational> = coeffs.iter().map(|&x| snap(x, 30).unwrap()).collect();
        if c.last().unwrap() == &Rational::from_integer(0.into()) {
            *c.last_mut().unwrap() = Rational::from_integer(1.into());
        }
        let p = Polynomial::new(c, Var::Rho);
        let oracle = oracle_root_count(&p, Interval::nonneg()).unwrap();
        prop_assume!(oracle.confident && oracle.min_separation > CLUSTER_TOL);
        prop_assert_eq!(count_nonneg(&p).unwrap(), oracle.count);
    }

    #[test]
    fn planted_roots_are_counted(roots in prop::collection::btree_set(-40i64..40, 1..7)) {
        // distinct roots k/8 planted in a product of linear factors
        let mut p = Polynomial::one(Var::Rho);
        for &k in &roots {
            let f = Polynomial::new(vec![Rational::new((-k).into(), 8.into()), Rational::from_integer(1.into())], Var::Rho);
            p = p.try_mul(&f).unwrap();
        }
        prop_assert_eq!(count_real(&p).unwrap(), roots.len());
        prop_assert_eq!(count_nonneg(&p).unwrap(), roots.iter().filter(|&&k| k >= 0).count());
        // a squared factor does not change the count of distinct roots
        let sq = p.try_mul(&p).unwrap();
        prop_assert_eq!(count_real(&sq).unwrap(), roots.len());
    }

    #[test]
    fn classes_are_scale_invariant(alpha in -3.1f64..3.1, beta in 0.0f64..1.57) {
        let p = problem(BasisKind::Hermite, &[0, 4, 8], vec![Constraint::PositivityP]);
        let v = sphere_to_coeffs(&s2(alpha, beta), &[0, 4, 8]).unwrap();
        let base = p.classify_values(&v).unwrap();
        for k in [2.0, 4.0, 0.25] {
            let scaled: Vec<f64> = v.iter().map(|x| x * k).collect();
            prop_assert_eq!(&p.classify_values(&scaled).unwrap(), &base);
        }
    }

    #[test]
    fn alpha_reflection_swaps_p_and_q(alpha in -3.1f64..3.1, beta in 0.0f64..1.57) {
        let pp = problem(BasisKind::Hermite, &[0, 2, 4], vec![Constraint::PositivityP]);
        let pq = problem(BasisKind::Hermite, &[0, 2, 4], vec![Constraint::PositivityQ]);
        let a = classify_point(&pp, &s2(alpha, beta)).unwrap();
        let b = classify_point(&pq, &s2(-alpha, beta)).unwrap();
        prop_assert_eq!(a.class, b.class);
        prop_assert_eq!(a.outcomes[0].roots, b.outcomes[0].roots);
    }

    #[test]
    fn tighter_constraints_nest(alpha in -0.6f64..0.6, beta in 0.0f64..0.6) {
        let joint = problem(BasisKind::Hermite, &[0, 2, 4], vec![Constraint::PositivityP, Constraint::PositivityQ]);
        let mono = problem(
            BasisKind::Hermite,
            &[0, 2, 4],
            vec![Constraint::PositivityP, Constraint::PositivityQ, Constraint::MonotonePhi],
        );
        if classify_point(&mono, &s2(alpha, beta)).unwrap().feasible() {
            prop_assert!(classify_point(&joint, &s2(alpha, beta)).unwrap().feasible());
        }
    }

    #[test]
    fn convex_core_sign_matches_second_difference(
        v in prop::collection::vec(-1.0f64..1.0, 3),
        r in 0.05f64..3.0,
    ) {
        let p = problem(BasisKind::Hermite, &[0, 4, 8], vec![Constraint::ConvexPsi { rc2: 1.0 }]);
        let core = &p.constraint_polys(&v).unwrap()[0].poly;
        let m = p.mixture(&v).unwrap();
        let fd = finite_difference(|x| m.eval_state(x), r, 2).unwrap();
        let scale = (-0.5 * r * r).exp();
        prop_assume!(fd.abs() > 1e-4 * scale);
        prop_assert_eq!(core.eval_f64(r * r).signum(), fd.signum());
    }

    #[test]
    fn radial_third_core_sign_matches_third_difference(
        v in prop::collection::vec(-1.0f64..1.0, 3),
        r in 0.2f64..3.0,
    ) {
        let p = problem(BasisKind::Laguerre, &[0, 2, 4], vec![Constraint::ThirdDerivNegative { rt2: 1.0 }]);
        let core = &p.constraint_polys(&v).unwrap()[0].poly;
        let m = p.mixture(&v).unwrap();
        let fd = finite_difference(|x| m.eval_state(x), r, 3).unwrap();
        prop_assume!(fd.abs() > 1e-3 * (-0.5 * r * r).exp());
        prop_assert_eq!(core.eval_f64(r * r).signum(), fd.signum());
    }
}

#[test]
fn scans_are_deterministic() {
    let p = problem(BasisKind::Hermite, &[0, 2, 4], vec![Constraint::PositivityP, Constraint::PositivityQ]);
    let spec = MapSpec::full(3, 40, None);
    let a = scan_map(&p, &spec).unwrap();
    let b = scan_map(&p, &spec).unwrap();
    assert_eq!(a, b);
}

#[test]
fn reflected_maps_agree_cell_by_cell() {
    let pp = problem(BasisKind::Hermite, &[0, 2, 4], vec![Constraint::PositivityP]);
    let pq = problem(BasisKind::Hermite, &[0, 2, 4], vec![Constraint::PositivityQ]);
    // a grid symmetric about α = 0 so column i mirrors column n-1-i
    let spec = MapSpec {
        alpha: AxisRange::new(-3.0, 3.0, 60),
        beta: AxisRange::new(0.0, 1.5, 30),
        gamma: None,
    };
    let a = scan_map(&pp, &spec).unwrap();
    let b = scan_map(&pq, &spec).unwrap();
    for j in 0..a.height() {
        for i in 0..a.width() {
            assert_eq!(a.cell(i, j).class, b.cell(a.width() - 1 - i, j).class, "cell {i},{j}");
        }
    }
}
