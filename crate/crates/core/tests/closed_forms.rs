//! Exact resultants of the tabulated mixtures against their closed forms.

use duopos::domains::{sphere_to_coeffs, BasisKind, Constraint, ConstraintSet, Problem, SpherePoint, DEFAULT_SNAP_BITS};
use duopos::polycore::{rational_to_f64, sylvester_resultant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn problem(orders: &[u32], c: Constraint) -> Problem {
    Problem::new(BasisKind::Hermite, orders.to_vec(), ConstraintSet::new(vec![c]).unwrap(), DEFAULT_SNAP_BITS).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    SpherePoint::S2 {
        alpha: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        beta: rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
    }
}

/// `√6 ψ₂² − 4ψ₀ψ₄ ∓ 4√2 ψ₂ψ₄ + 2√6 ψ₄²`, upper sign for `P`.
fn quadratic_form(v: &[f64], sign: f64) -> f64 {
    let (s2, s6) = (2f64.sqrt(), 6f64.sqrt());
    s6 * v[1] * v[1] - 4.0 * v[0] * v[2] - sign * 4.0 * s2 * v[1] * v[2] + 2.0 * s6 * v[2] * v[2]
}

#[test]
fn quadratic_discriminant_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (c, sign) in [(Constraint::PositivityP, 1.0), (Constraint::PositivityQ, -1.0)] {
        let p = problem(&[0, 2, 4], c);
        for _ in 0..300 {
            let v = sphere_to_coeffs(&random_point(&mut rng), &[0, 2, 4]).unwrap();
            let poly = &p.constraint_polys(&v).unwrap()[0].poly;
            let res = sylvester_resultant(poly, &poly.derivative()).unwrap();
            // res(f, f') = -a·disc for a quadratic
            let disc = -rational_to_f64(&res) / rational_to_f64(poly.leading().unwrap());
            let e = quadratic_form(&v, sign);
            if e.abs() < 1e-9 {
                continue;
            }
            assert!((disc / e - 6f64.sqrt() / 3.0).abs() < 1e-9, "ratio {} at {v:?}", disc / e);
        }
    }
}

/// The printed quintic form for the `(0, 4, 8)` mixture.
fn quintic_form(v: &[f64]) -> f64 {
    let (a, b, c) = (v[0], v[1], v[2]);
    let (s6, s70, s105) = (6f64.sqrt(), 70f64.sqrt(), 105f64.sqrt());
    2100.0 * a * b.powi(4) - 1050.0 * s6 * b.powi(5) - 240.0 * s70 * a * a * b * b * c
        + 400.0 * s105 * a * b.powi(3) * c
        - 165.0 * s70 * b.powi(4) * c
        + 480.0 * a.powi(3) * c * c
        + 4560.0 * s6 * a * a * b * c * c
        - 13320.0 * a * b * b * c * c
        - 1600.0 * s6 * b.powi(3) * c * c
        - 792.0 * s70 * a * a * c.powi(3)
        + 1728.0 * s105 * a * b * c.powi(3)
        - 612.0 * s70 * b * b * c.powi(3)
        - 10080.0 * a * c.powi(4)
        - 2520.0 * s6 * b * c.powi(4)
        + 1260.0 * s70 * c.powi(5)
}

#[test]
fn quartic_resultant_is_proportional_to_printed_quintic() {
    let p = problem(&[0, 4, 8], Constraint::PositivityP);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut ratio: Option<f64> = None;
    let mut checked = 0;
    for _ in 0..300 {
        let v = sphere_to_coeffs(&random_point(&mut rng), &[0, 4, 8]).unwrap();
        let poly = &p.constraint_polys(&v).unwrap()[0].poly;
        let res = rational_to_f64(&sylvester_resultant(poly, &poly.derivative()).unwrap());
        let e = quintic_form(&v);
        if e.abs() < 1e-6 {
            continue;
        }
        // the printed form is homogeneous of degree 5, the resultant of degree 7
        let k = res / (e * v[2] * v[2]);
        let r0 = *ratio.get_or_insert(k);
        assert!((k / r0 - 1.0).abs() < 1e-7, "ratio {k} vs {r0} at {v:?}");
        checked += 1;
    }
    assert!(checked > 200);
    assert!(ratio.unwrap() != 0.0);
}
