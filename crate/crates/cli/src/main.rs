use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use duopos::domains::BasisKind;
use duopos_cli::commands;
use duopos_cli::{CliError, CommandKind, Format, RunConfig};

#[derive(Parser)]
#[command(name = "duopos", version, about = "Positivity domains of Fourier-paired oscillator mixtures")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the basis polynomials and their norms.
    Basis(Flags),
    /// Classify one point of the coefficient sphere.
    Classify(Flags),
    /// Scan an angle grid and write the map artifacts.
    Map(Flags),
    /// Run numerical oracle suites; exit status 1 if any check fails.
    Verify(Flags),
    /// Sample a named example curve as CSV.
    Example(Flags),
}

#[derive(Args, Clone, Default)]
struct Flags {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_parser = parse_basis)]
    basis: Option<BasisKind>,
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    constraints: Option<Vec<String>>,
    #[arg(long)]
    rc2: Option<f64>,
    #[arg(long)]
    rt2: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    res: Option<usize>,
    #[arg(long)]
    snap_bits: Option<u32>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Alpha range as `lo,hi`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    /// Beta range as `lo,hi`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    brackets: Option<Vec<f64>>,
    #[arg(long)]
    n_max: Option<u32>,
    /// Suite names for `verify`.
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Option<Vec<String>>,
    /// Output stem for `map`, example name for `example`.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

fn parse_basis(s: &str) -> Result<BasisKind, String> {
    match s {
        "hermite" => Ok(BasisKind::Hermite),
        "laguerre" => Ok(BasisKind::Laguerre),
        _ => Err(format!("unknown basis {s:?} (hermite, laguerre)")),
    }
}

fn range(v: Option<Vec<f64>>, flag: &str) -> Result<Option<[f64; 2]>, CliError> {
    match v.as_deref() {
        None => Ok(None),
        Some([lo, hi]) => Ok(Some([*lo, *hi])),
        Some(_) => Err(CliError::Config(format!("--{flag} takes lo,hi"))),
    }
}

impl Flags {
    fn into_config(self) -> Result<(Option<PathBuf>, RunConfig), CliError> {
        let cfg = RunConfig {
            preset: self.preset,
            basis: self.basis,
            orders: self.orders,
            constraints: self.constraints,
            rc2: self.rc2,
            rt2: self.rt2,
            alpha_range: range(self.alpha, "alpha")?,
            beta_range: range(self.beta, "beta")?,
            gamma: self.gamma,
            res: self.res,
            snap_bits: self.snap_bits,
            out_dir: self.out_dir,
            formats: self.format,
            name: self.name,
            angles: self.angles,
            coeffs: self.coeffs,
            brackets: self.brackets,
            n_max: self.n_max,
            suites: self.suites,
            r_max: self.r_max,
            points: self.points,
            ..Default::default()
        };
        Ok((self.config, cfg))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (kind, flags) = match cli.command {
        Cmd::Basis(f) => (CommandKind::Basis, f),
        Cmd::Classify(f) => (CommandKind::Classify, f),
        Cmd::Map(f) => (CommandKind::Map, f),
        Cmd::Verify(f) => (CommandKind::Verify, f),
        Cmd::Example(f) => (CommandKind::Example, f),
    };
    let (file, flags) = flags.into_config()?;
    let cfg = RunConfig::resolve(kind, file.as_deref(), &flags)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match kind {
        CommandKind::Basis => commands::cmd_basis(&cfg, &mut out),
        CommandKind::Classify => commands::cmd_classify(&cfg, &mut out),
        CommandKind::Map => commands::cmd_map(&cfg, &mut out),
        CommandKind::Verify => commands::cmd_verify(&cfg, &mut out),
        CommandKind::Example => commands::cmd_example(&cfg, &mut out),
    }?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.class(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
