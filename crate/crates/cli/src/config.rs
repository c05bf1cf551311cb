//! Run configuration: every layer merged into one record.
//!
//! Precedence is flags over file over preset over built-in defaults. The
//! resolved record is what gets echoed into every artifact, so feeding it back
//! with `--config` reproduces the run.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use duopos::domains::{AxisRange, BasisKind, Constraint, ConstraintSet, MapSpec, Problem, DEFAULT_SNAP_BITS};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::presets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Basis,
    Classify,
    Map,
    Verify,
    Example,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Pgm,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pgm" => Ok(Format::Pgm),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format {s:?} (pgm, csv, json)"))),
        }
    }
}

/// Every knob of a run; `None` means "not set at this layer".
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub preset: Option<String>,
    pub basis: Option<BasisKind>,
    pub orders: Option<Vec<u32>>,
    /// Constraint names; thresholds come from `rc2` and `rt2`.
    pub constraints: Option<Vec<String>>,
    pub rc2: Option<f64>,
    pub rt2: Option<f64>,
    pub alpha_range: Option<[f64; 2]>,
    pub beta_range: Option<[f64; 2]>,
    pub gamma: Option<f64>,
    pub res: Option<usize>,
    pub snap_bits: Option<u32>,
    pub out_dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    /// Output stem for maps, example name for `example`.
    pub name: Option<String>,
    pub angles: Option<Vec<f64>>,
    pub coeffs: Option<Vec<f64>>,
    pub brackets: Option<Vec<f64>>,
    pub n_max: Option<u32>,
    pub suites: Option<Vec<String>>,
    pub r_max: Option<f64>,
    pub points: Option<usize>,
}

macro_rules! overlay_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

macro_rules! fill_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(&mut self, top: &RunConfig) {
        overlay_fields!(
            self, top, command, preset, basis, orders, constraints, rc2, rt2, alpha_range, beta_range, gamma, res,
            snap_bits, out_dir, formats, name, angles, coeffs, brackets, n_max, suites, r_max, points
        );
    }

    /// Fields unset in `self` are taken from `below`.
    pub fn fill_from(&mut self, below: &RunConfig) {
        fill_fields!(
            self, below, command, preset, basis, orders, constraints, rc2, rt2, alpha_range, beta_range, gamma, res,
            snap_bits, out_dir, formats, name, angles, coeffs, brackets, n_max, suites, r_max, points
        );
    }

    /// Merge the file with the flags, then expand the preset and fill defaults.
    pub fn resolve(command: CommandKind, file: Option<&Path>, flags: &RunConfig) -> Result<Self, CliError> {
        let mut cfg = match file {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        cfg.overlay(flags);
        if let Some(c) = cfg.command {
            if c != command {
                return Err(CliError::Config(format!(
                    "config is for command {c:?}, invoked as {command:?}"
                )));
            }
        }
        cfg.command = Some(command);
        if let Some(name) = cfg.preset.clone() {
            let p = presets::preset(&name).ok_or_else(|| {
                CliError::Config(format!("unknown preset {name:?}; known: {}", presets::NAMES.join(", ")))
            })?;
            cfg.fill_from(&p);
        }
        cfg.apply_defaults();
        Ok(cfg)
    }

    fn apply_defaults(&mut self) {
        let command = self.command.unwrap_or(CommandKind::Map);
        self.basis.get_or_insert(BasisKind::Hermite);
        self.snap_bits.get_or_insert(DEFAULT_SNAP_BITS);
        match command {
            CommandKind::Map | CommandKind::Classify => {
                self.orders.get_or_insert_with(|| vec![0, 4, 8]);
                self.constraints.get_or_insert_with(|| vec!["positivity_p".into()]);
                if command == CommandKind::Map {
                    let four = self.orders.as_ref().is_some_and(|o| o.len() == 4);
                    self.res.get_or_insert(if four { 300 } else { 400 });
                    if four {
                        self.alpha_range.get_or_insert([-FRAC_PI_2, FRAC_PI_2]);
                        self.beta_range.get_or_insert([-PI, PI]);
                    } else {
                        self.alpha_range.get_or_insert([-PI, PI]);
                        self.beta_range.get_or_insert([0.0, FRAC_PI_2]);
                    }
                    self.formats.get_or_insert_with(|| vec![Format::Pgm, Format::Csv, Format::Json]);
                    self.out_dir.get_or_insert_with(|| PathBuf::from("."));
                    let stem = self.preset.clone().unwrap_or_else(|| "map".into());
                    self.name.get_or_insert(stem);
                }
            }
            CommandKind::Basis => {
                self.n_max.get_or_insert(12);
                self.formats.get_or_insert_with(|| vec![Format::Json]);
            }
            CommandKind::Verify => {
                self.suites
                    .get_or_insert_with(|| duopos::verify::suites::SUITES.iter().map(|s| s.to_string()).collect());
            }
            CommandKind::Example => {
                self.name.get_or_insert_with(|| "gaussian".into());
                self.r_max.get_or_insert(10.0);
                self.points.get_or_insert(2001);
            }
        }
    }

    pub fn constraint_set(&self) -> Result<ConstraintSet, CliError> {
        let names = self.constraints.as_deref().unwrap_or(&[]);
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            out.push(parse_constraint(n, self.rc2, self.rt2)?);
        }
        Ok(ConstraintSet::new(out)?)
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        let orders = self.orders.clone().ok_or_else(|| CliError::Config("orders not set".into()))?;
        Ok(Problem::new(
            self.basis.unwrap_or(BasisKind::Hermite),
            orders,
            self.constraint_set()?,
            self.snap_bits.unwrap_or(DEFAULT_SNAP_BITS),
        )?)
    }

    pub fn map_spec(&self) -> Result<MapSpec, CliError> {
        let res = self.res.ok_or_else(|| CliError::Config("res not set".into()))?;
        let [a0, a1] = self.alpha_range.ok_or_else(|| CliError::Config("alpha range not set".into()))?;
        let [b0, b1] = self.beta_range.ok_or_else(|| CliError::Config("beta range not set".into()))?;
        let four = self.orders.as_ref().is_some_and(|o| o.len() == 4);
        if four && self.gamma.is_none() {
            return Err(CliError::Config("four orders need a γ cut (--gamma)".into()));
        }
        if !four && self.gamma.is_some() {
            return Err(CliError::Config("--gamma only applies to four-order mixtures".into()));
        }
        Ok(MapSpec {
            alpha: AxisRange::new(a0, a1, if a0 == a1 { 1 } else { res }),
            beta: AxisRange::new(b0, b1, if b0 == b1 { 1 } else { res }),
            gamma: self.gamma,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

pub fn parse_constraint(name: &str, rc2: Option<f64>, rt2: Option<f64>) -> Result<Constraint, CliError> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| CliError::Config(format!("{name} needs {flag}")));
    match name.replace('-', "_").as_str() {
        "positivity_p" => Ok(Constraint::PositivityP),
        "positivity_q" => Ok(Constraint::PositivityQ),
        "monotone_phi" => Ok(Constraint::MonotonePhi),
        "convex_psi" => Ok(Constraint::ConvexPsi { rc2: need(rc2, "--rc2")? }),
        "third_deriv_negative" => Ok(Constraint::ThirdDerivNegative { rt2: need(rt2, "--rt2")? }),
        _ => Err(CliError::Config(format!(
            "unknown constraint {name:?} (positivity_p, positivity_q, monotone_phi, convex_psi, third_deriv_negative)"
        ))),
    }
}
