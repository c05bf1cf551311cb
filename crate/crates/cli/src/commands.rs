//! The five subcommands. Each takes a resolved [`RunConfig`] and writes its
//! primary output to `out`; map artifacts go to files under `out_dir`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use duopos::domains::{self, output, sphere_to_coeffs, BasisKind, Mixture, SpherePoint};
use duopos::hermite::{self, from_bracket_multipliers, CACHED_ORDERS};
use duopos::laguerre;
use duopos::verify::suites::{self, GOLDEN_BRACKETS, MIXED_PARITY_POINT};
use duopos::{Polynomial, Radicand, Rational};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const EXAMPLES: [&str; 3] = ["gaussian", "footnote-oscillating", "mixed-parity-demo"];

fn wants(cfg: &RunConfig, f: Format) -> bool {
    cfg.formats.as_ref().is_some_and(|v| v.contains(&f))
}

fn wrap(bracket: &Polynomial) -> String {
    let single = bracket.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
    if single {
        bracket.to_string()
    } else {
        format!("({bracket})")
    }
}

fn denominator(d: String) -> String {
    let bare = d.strip_prefix('√').unwrap_or(&d);
    if bare.chars().all(|c| c.is_ascii_digit()) {
        d
    } else {
        format!("({d})")
    }
}

/// `bracket` scaled by the exact positive `content`, e.g. `(ρ^3 - 9ρ^2)/6`.
fn scaled_display(bracket: &Polynomial, content: &Rational) -> String {
    if content.is_one() {
        return bracket.to_string();
    }
    if content.recip().is_integer() {
        format!("{}/{}", wrap(bracket), content.recip())
    } else {
        format!("{content} {}", wrap(bracket))
    }
}

/// `factor · bracket` with `factor = √v`, written as a quotient when `1/v`
/// is an integer, which is how the tables print them.
fn radical_display(bracket: &Polynomial, factor: &Radicand) -> String {
    if factor.value().is_one() {
        return bracket.to_string();
    }
    let inv = factor.value().recip();
    if inv.is_integer() {
        let d = Radicand::new(inv).expect("positive");
        format!("{}/{}", wrap(bracket), denominator(d.to_string()))
    } else {
        format!("{factor} {}", wrap(bracket))
    }
}

pub fn basis_rows(kind: BasisKind, n_max: u32) -> Result<Vec<Value>, CliError> {
    if n_max > CACHED_ORDERS {
        return Err(CliError::Config(format!("n_max {n_max} above {CACHED_ORDERS}")));
    }
    Ok((0..=n_max)
        .map(|n| match kind {
            BasisKind::Hermite => {
                let e = hermite::hermite_normalized(n);
                json!({
                    "n": n,
                    "name": format!("H{n}"),
                    "display": radical_display(&e.bracket(), &e.bracket_factor()),
                    "core": e.core.to_string(),
                    "norm": format!("√{}", e.norm.value()),
                    "bracket": e.bracket().to_string(),
                    "factor": e.bracket_factor().to_string(),
                })
            }
            BasisKind::Laguerre => {
                let e = laguerre::laguerre_state(n);
                let content = e.core.content();
                json!({
                    "n": n,
                    "name": format!("v{n}"),
                    "display": scaled_display(&e.core.primitive(), &content),
                    "core": e.core.to_string(),
                    "norm": "1",
                    "bracket": e.core.primitive().to_string(),
                    "factor": content.to_string(),
                })
            }
        })
        .collect())
}

pub fn cmd_basis(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = basis_rows(cfg.basis.unwrap_or(BasisKind::Hermite), cfg.n_max.unwrap_or(12))?;
    if wants(cfg, Format::Csv) {
        writeln!(out, "n,name,display,bracket,factor")?;
        for r in &rows {
            writeln!(
                out,
                "{},{},\"{}\",\"{}\",\"{}\"",
                r["n"],
                r["name"].as_str().unwrap_or_default(),
                r["display"].as_str().unwrap_or_default(),
                r["bracket"].as_str().unwrap_or_default(),
                r["factor"].as_str().unwrap_or_default()
            )?;
        }
    } else {
        let doc = json!({ "config": cfg.to_json(), "rows": rows });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("plain data"))?;
    }
    Ok(())
}

/// Coefficient vector in the problem's order layout, from whichever input
/// form was given (exactly one must be).
pub fn classify_values(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let orders = cfg.orders.clone().unwrap_or_default();
    let given = [cfg.angles.is_some(), cfg.coeffs.is_some(), cfg.brackets.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(CliError::Config("give exactly one of --angles, --coeffs, --brackets".into()));
    }
    if let Some(a) = &cfg.angles {
        return Ok(sphere_to_coeffs(&SpherePoint::from_angles(a)?, &orders)?);
    }
    let raw = cfg.coeffs.as_ref().or(cfg.brackets.as_ref()).expect("one is set");
    if raw.len() != orders.len() {
        return Err(CliError::Config(format!(
            "{} coefficients for {} orders",
            raw.len(),
            orders.len()
        )));
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Config("coefficients must be finite".into()));
    }
    if cfg.coeffs.is_some() {
        return Ok(raw.clone());
    }
    if cfg.basis != Some(BasisKind::Hermite) {
        return Err(CliError::Config("--brackets applies to the hermite basis only".into()));
    }
    let pairs: Vec<(u32, f64)> = orders.iter().copied().zip(raw.iter().copied()).collect();
    let c = from_bracket_multipliers(&pairs)?;
    Ok(orders.iter().map(|&n| c.get(n)).collect())
}

pub fn classify(cfg: &RunConfig) -> Result<Value, CliError> {
    let problem = cfg.problem()?;
    let values = classify_values(cfg)?;
    let cell = problem.classify_values(&values)?;
    let names: Vec<&str> = problem.constraints.as_slice().iter().map(|c| c.name()).collect();
    Ok(json!({
        "config": cfg.to_json(),
        "orders": problem.orders,
        "coefficients": values,
        "constraints": names,
        "feasible": cell.feasible(),
        "record": cell,
    }))
}

pub fn cmd_classify(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = classify(cfg)?;
    writeln!(out, "{}", serde_json::to_string(&doc).expect("plain data"))?;
    Ok(())
}

/// Scan and write `<name>.{pgm,csv,json}`, then print the paths and stats.
pub fn cmd_map(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let problem = cfg.problem()?;
    let spec = cfg.map_spec()?;
    let map = domains::scan_map(&problem, &spec)?;
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let stem = cfg.name.clone().unwrap_or_else(|| "map".into());
    let echo = cfg.to_json();
    let mut written = Vec::new();
    for f in cfg.formats.clone().unwrap_or_default() {
        let (ext, path) = match f {
            Format::Pgm => ("pgm", dir.join(format!("{stem}.pgm"))),
            Format::Csv => ("csv", dir.join(format!("{stem}.csv"))),
            Format::Json => ("json", dir.join(format!("{stem}.json"))),
        };
        let mut w = BufWriter::new(File::create(&path)?);
        match ext {
            "pgm" => output::write_pgm(&map, &echo, &mut w)?,
            "csv" => output::write_csv(&map, &echo, &mut w)?,
            _ => {
                serde_json::to_writer_pretty(&mut w, &output::metadata(&map, &echo)).map_err(std::io::Error::from)?;
                writeln!(w)?;
                w.flush()?;
            }
        }
        written.push(path.display().to_string());
    }
    let summary = json!({
        "files": written,
        "stats": domains::region_stats(&map),
        "degenerate": map.degenerate,
    });
    writeln!(out, "{}", serde_json::to_string(&summary).expect("plain data"))?;
    Ok(())
}

/// One JSON line per report; fails with the number of failing reports.
pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let names = cfg.suites.clone().unwrap_or_default();
    let mut failed = 0;
    for name in &names {
        let reports = suites::run_suite(name).ok_or_else(|| {
            CliError::Config(format!("unknown suite {name:?}; known: {}", suites::SUITES.join(", ")))
        })?;
        for r in reports {
            failed += usize::from(!r.pass);
            let mut v = serde_json::to_value(&r).expect("plain data");
            v["suite"] = json!(name);
            writeln!(out, "{v}")?;
        }
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

/// The mixture behind a named example, with a flag saying whether `φ` differs from `ψ`.
pub fn example_mixture(name: &str) -> Result<(Mixture, bool), CliError> {
    match name {
        "gaussian" => Ok((Mixture::new(BasisKind::Hermite, &[0], &[1.0])?, false)),
        "footnote-oscillating" => {
            let c = from_bracket_multipliers(&GOLDEN_BRACKETS)?;
            Ok((Mixture::Hermite(c), false))
        }
        "mixed-parity-demo" => {
            let pt = SpherePoint::S2 {
                alpha: MIXED_PARITY_POINT.0,
                beta: MIXED_PARITY_POINT.1,
            };
            let values = sphere_to_coeffs(&pt, &[0, 2, 4])?;
            Ok((Mixture::new(BasisKind::Hermite, &[0, 2, 4], &values)?, true))
        }
        _ => Err(CliError::Config(format!("unknown example {name:?}; known: {}", EXAMPLES.join(", ")))),
    }
}

pub fn cmd_example(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let name = cfg.name.as_deref().unwrap_or("gaussian");
    let (m, distinct) = example_mixture(name)?;
    let r_max = cfg.r_max.unwrap_or(10.0);
    let points = cfg.points.unwrap_or(2001);
    if points < 2 || !(r_max > 0.0 && r_max.is_finite()) {
        return Err(CliError::Config("need points >= 2 and a positive finite r_max".into()));
    }
    writeln!(out, "# config: {}", serde_json::to_string(&cfg.to_json()).expect("plain data"))?;
    writeln!(out, "{}", if distinct { "r,psi,phi" } else { "r,psi" })?;
    for k in 0..points {
        let r = r_max * k as f64 / (points - 1) as f64;
        if distinct {
            writeln!(out, "{r},{},{}", m.eval_state(r), m.eval_partner(r))?;
        } else {
            writeln!(out, "{r},{}", m.eval_state(r))?;
        }
    }
    Ok(())
}
