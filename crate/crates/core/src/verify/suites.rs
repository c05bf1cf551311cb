//! Named batteries of oracle checks, each yielding [`OracleReport`]s.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::domains::{self, BasisKind, Constraint, ConstraintSet, MapSpec, Mixture, Problem, DEFAULT_SNAP_BITS};
use crate::hermite::{eval_state, from_bracket_multipliers};
use crate::laguerre::eval_radial_state;
use crate::polycore::snap;
use crate::sturm::count_nonneg;
use crate::{Rational, Var};

/// Multipliers of the printed integer brackets of the oscillating self-dual example.
pub const GOLDEN_BRACKETS: [(u32, f64); 4] = [(0, 0.566053), (4, 0.0488517), (8, 0.0011871), (12, 0.0000164538)];

/// A class-0 point of the `(0, 2, 4)` joint positivity map with `ψ₂ ≠ 0`.
pub const MIXED_PARITY_POINT: (f64, f64) = (0.1, 0.15);

pub const SUITES: [&str; 6] = ["quadrature", "transforms", "sturm", "gram", "derivatives", "golden"];

pub fn run_suite(name: &str) -> Option<Vec<OracleReport>> {
    Some(match name {
        "quadrature" => quadrature(),
        "transforms" => transforms(),
        "sturm" => vec![sturm_agreement(10_000, 8, 2024).report],
        "gram" => gram(),
        "derivatives" => derivatives(),
        "golden" => golden(),
        _ => return None,
    })
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

pub fn quadrature() -> Vec<OracleReport> {
    let gh = gauss_hermite(FT_ORDER);
    let gl = gauss_laguerre(40);
    vec![
        OracleReport::compare("hermite_orthonormality_n12", vec![hermite_orthonormality_error(12, &gh)], vec![0.0], 1e-10),
        OracleReport::compare("laguerre_orthonormality_n8", vec![laguerre_orthonormality_error(8, &gl)], vec![0.0], 1e-9),
        OracleReport::compare(
            "hermite_weight_sum",
            vec![gh.weights.iter().sum()],
            vec![PI.sqrt()],
            1e-12,
        ),
        OracleReport::lower_bound(
            "hermite_min_weight",
            gh.weights.iter().copied().fold(f64::INFINITY, f64::min),
            0.0,
        ),
    ]
}

/// `max_s |numeric_ft(u_n) - iⁿ u_n|` on `s ∈ [-6, 6]`.
pub fn ft_eigen_error(n: u32) -> f64 {
    let s = grid(-6.0, 6.0, 241);
    let c = CoefficientVector::new([(n, 1.0)]).expect("even order");
    let phase = if n.is_multiple_of(4) { 1.0 } else { -1.0 };
    let num = numeric_ft(&c, &s).expect("order within rule");
    s.iter()
        .zip(&num)
        .map(|(&x, &v)| (v - phase * eval_state(&c, x)).abs())
        .fold(0.0, f64::max)
}

/// `max_s |numeric_hankel(v_n) - (-1)ⁿ v_n|` on `s ∈ [0, 6]`.
pub fn hankel_eigen_error(n: u32) -> f64 {
    let s = grid(0.0, 6.0, 121);
    let c = RadialCoefficientVector::new([(n, 1.0)]).expect("finite");
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let num = numeric_hankel(&c, &s);
    s.iter()
        .zip(&num)
        .map(|(&x, &v)| (v - sign * eval_radial_state(&c, x)).abs())
        .fold(0.0, f64::max)
}

pub fn transforms() -> Vec<OracleReport> {
    let mut out = Vec::new();
    for n in (0..=12).step_by(2) {
        out.push(OracleReport::compare(format!("ft_eigen_u{n}"), vec![ft_eigen_error(n)], vec![0.0], 1e-8));
    }
    for n in 0..=6 {
        out.push(OracleReport::compare(format!("hankel_eigen_v{n}"), vec![hankel_eigen_error(n)], vec![0.0], 1e-6));
    }
    out
}

/// Outcome of the Sturm-versus-companion comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Agreement {
    pub total: usize,
    pub agree: usize,
    /// Oracle not confident or minimum root separation at most 1e-6.
    pub flagged: usize,
    /// Disagreements on instances that were not flagged.
    pub clean_disagreements: usize,
    pub report: OracleReport,
}

/// Random snapped polynomials of degree `1..=max_degree`: nonnegative-root
/// counts from Sturm chains against companion eigenvalues.
pub fn sturm_agreement(samples: usize, max_degree: usize, seed: u64) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut flagged, mut clean_bad) = (0, 0, 0);
    for k in 0..samples {
        let d = 1 + k % max_degree;
        let coeffs: Vec<Rational> = (0..=d)
            .map(|i| {
                let mut x: f64 = rng.gen_range(-1.0..1.0);
                if i == d && x.abs() < 1e-3 {
                    x = 0.5;
                }
                snap(x, 30).expect("finite")
            })
            .collect();
        let p = Polynomial::new(coeffs, Var::Rho);
        let exact = count_nonneg(&p).expect("nonzero");
        let oracle = oracle_root_count(&p, Interval::nonneg()).expect("nonconstant");
        let is_flagged = !oracle.confident || oracle.min_separation <= CLUSTER_TOL;
        flagged += usize::from(is_flagged);
        if exact == oracle.count {
            agree += 1;
        } else if !is_flagged {
            clean_bad += 1;
        }
    }
    let report = OracleReport {
        quantity: "sturm_vs_companion_clean_disagreements".into(),
        computed: vec![clean_bad as f64, agree as f64, flagged as f64, samples as f64],
        reference: vec![0.0],
        max_abs_error: clean_bad as f64,
        max_rel_error: clean_bad as f64 / samples.max(1) as f64,
        threshold: 0.0,
        pass: clean_bad == 0,
    };
    Agreement {
        total: samples,
        agree,
        flagged,
        clean_disagreements: clean_bad,
        report,
    }
}

fn mixed_parity_mixture() -> Mixture {
    let (a, b) = MIXED_PARITY_POINT;
    let values = domains::sphere_to_coeffs(&domains::SpherePoint::S2 { alpha: a, beta: b }, &[0, 2, 4]).expect("in range");
    Mixture::new(BasisKind::Hermite, &[0, 2, 4], &values).expect("even orders")
}

/// Joint-positivity problem for the `(0, 2, 4)` mixture.
pub fn joint_positivity_024() -> Problem {
    Problem::new(
        BasisKind::Hermite,
        vec![0, 2, 4],
        ConstraintSet::new(vec![Constraint::PositivityP, Constraint::PositivityQ]).expect("nonempty"),
        DEFAULT_SNAP_BITS,
    )
    .expect("valid problem")
}

pub fn gram() -> Vec<OracleReport> {
    let gauss = |x: f64| PI.powf(-0.25) * (-0.5 * x * x).exp();
    let mut out = Vec::new();
    let mut r = gram_psd_check(gauss, 8, 100, 3.0, 1e-10, 11).expect("k >= 2");
    r.quantity = "gram_gaussian".into();
    out.push(r);
    let Mixture::Hermite(c) = mixed_parity_mixture() else { unreachable!() };
    let reference = domains::classify_point(
        &joint_positivity_024(),
        &domains::SpherePoint::S2 {
            alpha: MIXED_PARITY_POINT.0,
            beta: MIXED_PARITY_POINT.1,
        },
    )
    .expect("valid point");
    let mut r = gram_psd_check(|x| numeric_ft(&c, &[x]).expect("low order")[0], 8, 100, 4.0, 1e-10, 12).expect("k >= 2");
    r.quantity = "gram_mixed_parity_class0".into();
    r.pass &= reference.feasible();
    out.push(r);
    // negative control: the transform of the sign-changing u₂ must fail
    let u2 = CoefficientVector::new([(2, 1.0)]).expect("even");
    let neg = gram_psd_check(|x| numeric_ft(&u2, &[x]).expect("low order")[0], 8, 200, 4.0, 1e-10, 13).expect("k >= 2");
    out.push(OracleReport {
        quantity: "gram_negative_control_u2_detected".into(),
        pass: !neg.pass,
        ..neg
    });
    out
}

pub fn derivatives() -> Vec<OracleReport> {
    let g = CoefficientVector::new([(0, 1.0)]).expect("even");
    let f = |r: f64| eval_state(&g, r);
    let mut out = vec![
        OracleReport::compare(
            "fd2_gaussian_r0",
            vec![finite_difference(f, 0.0, 2).expect("order 2")],
            vec![-PI.powf(-0.25)],
            1e-6,
        ),
        OracleReport::compare("fd2_gaussian_r1", vec![finite_difference(f, 1.0, 2).expect("order 2")], vec![0.0], 1e-6),
    ];
    // random even mixture: third derivative against the exact core r·N(r²)
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let orders = [0u32, 2, 4, 6, 8];
    let values: Vec<f64> = orders.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let c = CoefficientVector::from_orders(&orders, &values).expect("even");
    let m = crate::hermite::mixture_in_r(&c, 64, false).expect("finite");
    let n = crate::weight::derivative_core(&m, 3).expect("odd derivative");
    let r = 2.0f64;
    let exact = PI.powf(-0.25) * (-0.5 * r * r).exp() * r * n.eval_f64(r * r);
    let fd = finite_difference(|x| eval_state(&c, x), r, 3).expect("order 3");
    let mut rep = OracleReport::compare("fd3_random_mixture_r2", vec![fd], vec![exact], f64::INFINITY);
    rep.threshold = 1e-5;
    rep.pass = rep.max_rel_error <= 1e-5;
    out.push(rep);
    out
}

/// The oscillating self-dual example, checked exactly and by sampling.
pub fn golden() -> Vec<OracleReport> {
    let c = from_bracket_multipliers(&GOLDEN_BRACKETS).expect("even orders");
    let orders: Vec<u32> = c.entries().keys().copied().collect();
    let values: Vec<f64> = c.entries().values().copied().collect();
    let p = Problem::new(
        BasisKind::Hermite,
        orders,
        ConstraintSet::new(vec![Constraint::PositivityP]).expect("nonempty"),
        DEFAULT_SNAP_BITS,
    )
    .expect("valid");
    let cell = p.classify_values(&values).expect("classifiable");
    let (psi_min, _) = sampled_min(|r| eval_state(&c, r), 0.0, 10.0, 2001);
    let s = grid(0.0, 10.0, 2001);
    let phi_min = numeric_ft(&c, &s).expect("low order").into_iter().fold(f64::INFINITY, f64::min);
    vec![
        OracleReport {
            quantity: "golden_positive_rho_roots".into(),
            computed: vec![f64::from(cell.outcomes[0].roots)],
            reference: vec![0.0],
            max_abs_error: f64::from(cell.outcomes[0].roots),
            max_rel_error: 0.0,
            threshold: 0.0,
            pass: cell.feasible(),
        },
        OracleReport::lower_bound("golden_psi_min", psi_min, 1e-12),
        OracleReport::lower_bound("golden_phi_min", phi_min, 1e-9),
    ]
}

/// Minimum of `ψ` and numeric `φ` over `r, s ∈ [0, 8]` for up to `count`
/// random class-0 cells of a small `(0, 2, 4)` joint-positivity map.
pub fn transform_positivity(count: usize, res: usize, seed: u64) -> (usize, f64) {
    let map = domains::scan_map(&joint_positivity_024(), &MapSpec::full(3, res, None)).expect("valid spec");
    let feasible: Vec<(usize, usize)> = (0..map.height())
        .flat_map(|j| (0..map.width()).map(move |i| (i, j)))
        .filter(|&(i, j)| map.cell(i, j).feasible())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = grid(0.0, 8.0, 161);
    let mut worst = f64::INFINITY;
    let picks = count.min(feasible.len());
    for _ in 0..picks {
        let (i, j) = feasible[rng.gen_range(0..feasible.len())];
        let values = domains::sphere_to_coeffs(&map.spec.point(i, j), &[0, 2, 4]).expect("in range");
        let c = CoefficientVector::from_orders(&[0, 2, 4], &values).expect("even");
        let psi = s.iter().map(|&r| eval_state(&c, r)).fold(f64::INFINITY, f64::min);
        let phi = numeric_ft(&c, &s).expect("low order").into_iter().fold(f64::INFINITY, f64::min);
        worst = worst.min(psi).min(phi);
    }
    (picks, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_point_is_class_zero_and_not_self_dual() {
        let p = joint_positivity_024();
        let cell = domains::classify_point(
            &p,
            &domains::SpherePoint::S2 {
                alpha: MIXED_PARITY_POINT.0,
                beta: MIXED_PARITY_POINT.1,
            },
        )
        .unwrap();
        assert!(cell.feasible());
        let m = mixed_parity_mixture();
        assert!((m.eval_state(1.0) - m.eval_partner(1.0)).abs() > 1e-3);
    }

    #[test]
    fn small_agreement_run() {
        let a = sturm_agreement(500, 8, 1);
        assert_eq!(a.clean_disagreements, 0, "{a:?}");
        assert!(a.agree + a.flagged >= a.total);
    }

    #[test]
    fn golden_suite_passes() {
        for r in golden() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope").is_none());
    }
}
