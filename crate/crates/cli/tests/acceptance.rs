//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use duopos::domains::{
    classify_point, feasible_gamma_threshold, scan_map, sphere_to_coeffs, AxisRange, BasisKind, Constraint,
    ConstraintSet, DomainMap, MapSpec, Problem, SpherePoint, DEFAULT_SNAP_BITS,
};
use duopos::hermite::hermite_normalized;
use duopos::polycore::{rational_to_f64, sign_of, sylvester_resultant};
use duopos::verify::suites;
use duopos::{Polynomial, Rational, Var};
use duopos_cli::commands;
use duopos_cli::{CommandKind, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn problem(basis: BasisKind, orders: &[u32], cs: Vec<Constraint>) -> Problem {
    Problem::new(basis, orders.to_vec(), ConstraintSet::new(cs).unwrap(), DEFAULT_SNAP_BITS).unwrap()
}

fn hermite(orders: &[u32], cs: Vec<Constraint>) -> Problem {
    problem(BasisKind::Hermite, orders, cs)
}

fn window(a: [f64; 2], b: [f64; 2], res: usize) -> MapSpec {
    MapSpec {
        alpha: AxisRange::new(a[0], a[1], res),
        beta: AxisRange::new(b[0], b[1], res),
        gamma: None,
    }
}

fn feasible_cells(m: &DomainMap) -> Vec<(usize, usize)> {
    (0..m.height())
        .flat_map(|j| (0..m.width()).map(move |i| (i, j)))
        .filter(|&(i, j)| m.cell(i, j).feasible())
        .collect()
}

/// Cells feasible in `inner` but not in `outer` (same grid).
fn nesting_violations(inner: &DomainMap, outer: &DomainMap) -> usize {
    feasible_cells(inner).into_iter().filter(|&(i, j)| !outer.cell(i, j).feasible()).count()
}

fn ints(c: &[i64]) -> Polynomial {
    Polynomial::from_ints(c, Var::Rho)
}

fn basis_fidelity() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    // r-form brackets and factor² of H0..H3
    let low: [(&[i64], (i64, i64)); 4] = [(&[1], (1, 1)), (&[0, 1], (2, 1)), (&[-1, 0, 2], (1, 2)), (&[0, -3, 0, 2], (1, 3))];
    for (n, (bracket, (fnum, fden))) in low.into_iter().enumerate() {
        let e = hermite_normalized(n as u32);
        if e.bracket() != Polynomial::from_ints(bracket, Var::R)
            || e.bracket_factor().value() != &Rational::new(fnum.into(), fden.into())
        {
            bad.push(format!("H{n}"));
        }
    }
    // ρ-brackets with their printed denominators 2√6, 24√70, 1440√231
    let high: [(u32, Vec<i64>, i64); 3] = [
        (4, vec![3, -12, 4], 24),
        (8, vec![105, -840, 840, -224, 16], 576 * 70),
        (12, vec![10395, -124740, 207900, -110880, 23760, -2112, 64], 1440 * 1440 * 231),
    ];
    for (n, rho, inv) in high {
        let e = hermite_normalized(n);
        let compressed = e.bracket().compress_even(Var::Rho).unwrap();
        if compressed != ints(&rho) || e.bracket_factor().value() != &Rational::new(1.into(), inv.into()) {
            bad.push(format!("H{n}"));
        }
    }
    let dt = t.elapsed();
    outcome(
        bad.is_empty() && dt < Duration::from_secs(1),
        format!("mismatches {bad:?}, {:.3}s", dt.as_secs_f64()),
    )
}

fn ft_eigenproperty() -> Outcome {
    let t = Instant::now();
    let ft = (0..=12).step_by(2).map(suites::ft_eigen_error).fold(0.0, f64::max);
    let hk = (0..=6).map(suites::hankel_eigen_error).fold(0.0, f64::max);
    let dt = t.elapsed();
    outcome(
        ft <= 1e-8 && hk <= 1e-6 && dt < Duration::from_secs(10),
        format!("max FT error {ft:.2e} (≤1e-8), max Hankel error {hk:.2e} (≤1e-6), {:.2}s", dt.as_secs_f64()),
    )
}

fn sturm_oracle() -> Outcome {
    let t = Instant::now();
    let a = suites::sturm_agreement(10_000, 8, 2024);
    let dt = t.elapsed();
    outcome(
        a.clean_disagreements == 0 && dt < Duration::from_secs(60),
        format!(
            "{} samples, {} agree, {} flagged, {} clean disagreements, {:.1}s",
            a.total,
            a.agree,
            a.flagged,
            a.clean_disagreements,
            dt.as_secs_f64()
        ),
    )
}

fn resultant_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (s2, s6) = (2f64.sqrt(), 6f64.sqrt());
    let mut frozen: Option<f64> = None;
    let (mut checked, mut sign_bad, mut ratio_bad, mut skipped) = (0, 0, 0, 0);
    for (c, upper) in [(Constraint::PositivityP, 1.0), (Constraint::PositivityQ, -1.0)] {
        let p = hermite(&[0, 2, 4], vec![c]);
        for _ in 0..1000 {
            let pt = SpherePoint::S2 {
                alpha: rng.gen_range(-PI..PI),
                beta: rng.gen_range(0.0..FRAC_PI_2),
            };
            let v = sphere_to_coeffs(&pt, &[0, 2, 4]).unwrap();
            let e = s6 * v[1] * v[1] - 4.0 * v[0] * v[2] - upper * 4.0 * s2 * v[1] * v[2] + 2.0 * s6 * v[2] * v[2];
            if e.abs() < 1e-12 {
                skipped += 1;
                continue;
            }
            let poly = &p.constraint_polys(&v).unwrap()[0].poly;
            let Some(lc) = poly.leading() else { continue };
            if poly.degree() != Some(2) {
                skipped += 1;
                continue;
            }
            let res = sylvester_resultant(poly, &poly.derivative()).unwrap();
            // res(f, f') = -lc·disc; the discriminant carries the sign of the form
            let disc = -&res / lc;
            checked += 1;
            if sign_of(&disc) != e.signum() as i8 {
                sign_bad += 1;
            }
            let k = *frozen.get_or_insert(rational_to_f64(&disc) / e);
            if (rational_to_f64(&disc) / e / k - 1.0).abs() > 1e-9 {
                ratio_bad += 1;
            }
        }
    }
    let k = frozen.unwrap_or(f64::NAN);
    outcome(
        sign_bad == 0 && ratio_bad == 0 && k > 0.0 && checked >= 1990,
        format!(
            "{checked} points (P and Q), {skipped} skipped, {sign_bad} sign and {ratio_bad} ratio mismatches, constant {k:.12} (√6/3 = {:.12})",
            s6 / 3.0
        ),
    )
}

fn figure1_topology() -> Outcome {
    let t = Instant::now();
    let p = hermite(&[0, 4, 8], vec![Constraint::PositivityP]);
    let m = scan_map(&p, &MapSpec::full(3, 400, None)).unwrap();
    let dt = t.elapsed();
    let classes: std::collections::BTreeSet<u8> = m.classes().into_iter().collect();
    let all = classes.iter().all(|&c| c <= 4) && classes.len() == 5;
    // neighborhood right of the origin: α ∈ [0.01, 0.1], β ≤ 0.05
    let mut hood = 0;
    let mut hood_bad = 0;
    for j in 0..m.height() {
        for i in 0..m.width() {
            let (a, b) = (m.spec.alpha.center(i), m.spec.beta.center(j));
            if (0.01..=0.1).contains(&a) && b <= 0.05 {
                hood += 1;
                hood_bad += usize::from(!m.cell(i, j).feasible());
            }
        }
    }
    outcome(
        all && hood > 0 && hood_bad == 0 && dt < Duration::from_secs(180),
        format!(
            "classes {classes:?}, {} class-0 cells, {hood_bad}/{hood} non-feasible in the neighborhood, {:.1}s",
            m.feasible_count(),
            dt.as_secs_f64()
        ),
    )
}

fn gamma_threshold() -> Outcome {
    let p = hermite(&[0, 4, 8, 12], vec![Constraint::PositivityP]);
    let cut = |g: f64, res: usize| scan_map(&p, &MapSpec::full(4, res, Some(g))).unwrap().feasible_count();
    let at = [PI / 15.0, 2.0 * PI / 15.0, PI / 5.0, 7.0 * PI / 30.0];
    let counts: Vec<usize> = at.iter().map(|&g| cut(g, 300)).collect();
    let full = MapSpec::full(4, 150, Some(0.0));
    let bracket = feasible_gamma_threshold(&p, full.alpha, full.beta, PI / 15.0, 7.0 * PI / 30.0, 2e-3);
    let (ok_bracket, txt) = match bracket {
        Ok((lo, hi)) => (lo > 2.0 * PI / 15.0 && hi < PI / 5.0, format!("threshold in ({lo:.4}, {hi:.4})")),
        Err(e) => (false, e.to_string()),
    };
    outcome(
        counts[0] > 0 && counts[1] > 0 && counts[2] == 0 && counts[3] == 0 && ok_bracket,
        format!(
            "class-0 counts at π/15, 2π/15, π/5, 7π/30: {counts:?}; {txt}, allowed ({:.4}, {:.4})",
            2.0 * PI / 15.0,
            PI / 5.0
        ),
    )
}

fn parity_symmetry() -> Outcome {
    let spec = MapSpec::full(3, 400, None);
    let pm = scan_map(&hermite(&[0, 2, 4], vec![Constraint::PositivityP]), &spec).unwrap();
    let q = hermite(&[0, 2, 4], vec![Constraint::PositivityQ]);
    let qm = scan_map(&q, &spec).unwrap();
    let w = pm.width();
    let mut bad = 0;
    for j in 0..pm.height() {
        for i in 0..w {
            let a = spec.alpha.center(i);
            let mirrored = if spec.alpha.center(w - 1 - i) == -a {
                qm.cell(w - 1 - i, j).class
            } else {
                // grid centers are not exactly symmetric here: classify the reflected point itself
                let pt = SpherePoint::S2 {
                    alpha: -a,
                    beta: spec.beta.center(j),
                };
                classify_point(&q, &pt).unwrap().class
            };
            bad += usize::from(pm.cell(i, j).class != mirrored);
        }
    }
    outcome(bad == 0, format!("{bad} of {} cells differ", w * pm.height()))
}

fn constraint_nesting() -> Outcome {
    let spec = MapSpec::full(3, 400, None);
    let joint = scan_map(&hermite(&[0, 2, 4], vec![Constraint::PositivityP, Constraint::PositivityQ]), &spec).unwrap();
    let mono = scan_map(
        &hermite(&[0, 2, 4], vec![Constraint::PositivityP, Constraint::PositivityQ, Constraint::MonotonePhi]),
        &spec,
    )
    .unwrap();
    let v7 = nesting_violations(&mono, &joint);
    let strict = mono.feasible_count() < joint.feasible_count();
    let pos = scan_map(&hermite(&[0, 4, 8], vec![Constraint::PositivityP]), &spec).unwrap();
    let conv = scan_map(&hermite(&[0, 4, 8], vec![Constraint::ConvexPsi { rc2: 1.0 }]), &spec).unwrap();
    let v8 = nesting_violations(&conv, &pos);
    let (a, b) = duopos_cli::presets::CONVEX_WINDOW;
    let wspec = window(a, b, 400);
    let posw = scan_map(&hermite(&[0, 4, 8], vec![Constraint::PositivityP]), &wspec).unwrap();
    let convw = scan_map(&hermite(&[0, 4, 8], vec![Constraint::ConvexPsi { rc2: 1.0 }]), &wspec).unwrap();
    let v8w = nesting_violations(&convw, &posw);
    outcome(
        v7 == 0 && v8 == 0 && v8w == 0 && strict && mono.feasible_count() > 0 && convw.feasible_count() > 0,
        format!(
            "monotone {} ⊆ joint {} ({v7} violations); convex {} ⊆ positive {} ({v8} violations), zoomed {} ⊆ {} ({v8w} violations)",
            mono.feasible_count(),
            joint.feasible_count(),
            conv.feasible_count(),
            pos.feasible_count(),
            convw.feasible_count(),
            posw.feasible_count()
        ),
    )
}

fn convexity_threshold() -> Outcome {
    let (a, b) = duopos_cli::presets::CONVEX_WINDOW;
    let wspec = window(a, b, 400);
    let count = |rc2: f64, spec: &MapSpec| {
        scan_map(&hermite(&[0, 4, 8], vec![Constraint::ConvexPsi { rc2 }]), spec).unwrap().feasible_count()
    };
    let c1 = count(1.0, &wspec);
    let c04 = count(0.4, &wspec);
    let c03 = count(0.3, &wspec);
    let c03_full = count(0.3, &MapSpec::full(3, 400, None));
    outcome(
        c1 > 0 && c04 > 0 && c03 == 0 && c03_full == 0,
        format!("class-0 cells at r_c² = 1: {c1}, 0.4: {c04}, 0.3: {c03} (full sphere {c03_full})"),
    )
}

fn golden_example() -> Outcome {
    let reports = suites::golden();
    let pass = reports.iter().all(|r| r.pass);
    let detail: Vec<String> = reports.iter().map(|r| format!("{} = {:.3e}", r.quantity, r.computed[0])).collect();
    outcome(pass, detail.join(", "))
}

fn two_dimensional() -> Outcome {
    let laguerre = |orders: &[u32], cs| problem(BasisKind::Laguerre, orders, cs);
    let joint = scan_map(
        &laguerre(&[0, 1, 2], vec![Constraint::PositivityP, Constraint::PositivityQ]),
        &MapSpec::full(3, 400, None),
    )
    .unwrap();
    let (a, b) = duopos_cli::presets::THIRD_WINDOW;
    let third = scan_map(&laguerre(&[0, 2, 4], vec![Constraint::ThirdDerivNegative { rt2: 1.4 }]), &window(a, b, 400))
        .unwrap();
    let pos = laguerre(&[0, 2, 4], vec![Constraint::PositivityP]);
    let cells = feasible_cells(&third);
    let outside = cells
        .iter()
        .filter(|&&(i, j)| !classify_point(&pos, &third.spec.point(i, j)).unwrap().feasible())
        .count();
    outcome(
        joint.feasible_count() > 0 && !cells.is_empty() && outside == 0,
        format!(
            "(v0,v1,v2) joint class-0 cells {}; third-derivative cells {} with {outside} outside positivity",
            joint.feasible_count(),
            cells.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let flags = RunConfig {
        preset: Some("fig7r".into()),
        res: Some(120),
        out_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let cfg = RunConfig::resolve(CommandKind::Map, None, &flags).unwrap();
    let read = |ext: &str| std::fs::read(dir.path().join(format!("fig7r.{ext}"))).unwrap();
    let run = |c: &RunConfig| commands::cmd_map(c, &mut std::io::sink()).unwrap();
    run(&cfg);
    let first: Vec<Vec<u8>> = ["pgm", "csv", "json"].iter().map(|e| read(e)).collect();
    run(&cfg);
    let second: Vec<Vec<u8>> = ["pgm", "csv", "json"].iter().map(|e| read(e)).collect();
    // rerun from the configuration echoed into the metadata
    let meta: serde_json::Value = serde_json::from_slice(&first[2]).unwrap();
    let echoed: RunConfig = serde_json::from_value(meta["config"].clone()).unwrap();
    let echoed = RunConfig::resolve(CommandKind::Map, None, &echoed).unwrap();
    run(&echoed);
    let third: Vec<Vec<u8>> = ["pgm", "csv", "json"].iter().map(|e| read(e)).collect();
    outcome(
        first == second && first == third,
        format!(
            "repeat identical: {}, echoed-config rerun identical: {} ({} bytes)",
            first == second,
            first == third,
            first.iter().map(Vec::len).sum::<usize>()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("basis fidelity", basis_fidelity),
        ("transform eigenproperty", ft_eigenproperty),
        ("sturm vs companion oracle", sturm_oracle),
        ("resultant closed form", resultant_closed_form),
        ("figure-1 topology", figure1_topology),
        ("gamma threshold", gamma_threshold),
        ("parity symmetry", parity_symmetry),
        ("constraint nesting", constraint_nesting),
        ("convexity threshold", convexity_threshold),
        ("golden example", golden_example),
        ("2-d case", two_dimensional),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        failed += usize::from(!o.pass);
        println!(
            "[{}] {:>2}. {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
