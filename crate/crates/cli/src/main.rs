//! `descentlab`: batch front end for the descentlab library.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! carries a witness), 2 on malformed input or out-of-range options.

mod commands;
mod fixtures;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use descentlab::exec::{self, Execution};
use descentlab::scalars::Rational;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("option out of range: {0}")]
    Range(String),
    #[error("unknown fixture `{0}` (known: {known})", known = fixtures::NAMES.join(", "))]
    UnknownFixture(String),
    #[error("{0}")]
    Math(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn math(e: impl std::fmt::Display) -> Self {
        CliError::Math(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Parse and validate a complex, cover presheaf or CDGA presheaf.
    Validate,
    /// Homology of a complex over ℚ or a truncated Novikov ring.
    Homology,
    /// Čech complex of a cover presheaf.
    Cech,
    /// Totalization and its isomorphism to the Čech complex.
    Tot,
    /// Thom–Whitney totalization and the integration map to Tot.
    Tw,
    /// Products on TW and Čech complexes of a CDGA presheaf.
    Compare,
    /// Whether the augmentation to the Čech complex is a quasi-isomorphism.
    Descent,
    /// Cocone decomposition of the Čech complex.
    InclExcl,
    /// BV axioms for polyvector fields.
    BvCheck,
    /// Polyvector fields on the two-chart cover of ℙ¹.
    P1Demo,
    /// Weakly Poisson commuting conditions on a sample grid.
    CoversCheck,
    /// Telescope and colimit homology of a sequential diagram.
    Telescope,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Homology => "homology",
            Command::Cech => "cech",
            Command::Tot => "tot",
            Command::Tw => "tw",
            Command::Compare => "compare",
            Command::Descent => "descent",
            Command::InclExcl => "incl-excl",
            Command::BvCheck => "bv-check",
            Command::P1Demo => "p1-demo",
            Command::CoversCheck => "covers-check",
            Command::Telescope => "telescope",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Action {
    #[command(flatten)]
    Run(Command),
    /// Write a bundled fixture as JSON.
    Fixture { name: String },
}

#[derive(Debug, Parser)]
#[command(name = "descentlab", version, about = "Exact Čech/Tot/TW descent checks and algebra structures")]
struct Cli {
    #[command(subcommand)]
    action: Action,
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, global = true)]
    weight_cutoff: Option<usize>,
    #[arg(long, global = true, default_value_t = 4)]
    laurent_cutoff: i32,
    #[arg(long, global = true, default_value_t = 1)]
    novikov_den: u32,
    #[arg(long, global = true, default_value = "3")]
    novikov_e: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// `lo:hi`, inclusive; restricts the degrees shown in reports.
    #[arg(long, global = true)]
    degree_window: Option<String>,
}

/// Validated options shared by all commands.
#[derive(Clone, Debug)]
pub struct Options {
    pub input: Option<PathBuf>,
    pub weight_cutoff: Option<usize>,
    pub laurent_cutoff: i32,
    pub novikov_den: u32,
    pub novikov_e: Rational,
    pub seed: u64,
    pub degree_window: Option<(i32, i32)>,
}

fn options(cli: &Cli) -> Result<Options, CliError> {
    if let Some(p) = cli.weight_cutoff.filter(|p| *p > 8) {
        return Err(CliError::Range(format!("--weight-cutoff {p} outside 0..=8")));
    }
    if !(3..=12).contains(&cli.laurent_cutoff) {
        return Err(CliError::Range(format!("--laurent-cutoff {} outside 3..=12", cli.laurent_cutoff)));
    }
    if !(1..=12).contains(&cli.novikov_den) {
        return Err(CliError::Range(format!("--novikov-den {} outside 1..=12", cli.novikov_den)));
    }
    let e: Rational = cli.novikov_e.parse().map_err(|_| CliError::Range(format!("--novikov-e `{}` is not a rational", cli.novikov_e)))?;
    if e.signum() <= 0 || e > Rational::from(16) {
        return Err(CliError::Range(format!("--novikov-e {e} outside (0, 16]")));
    }
    let degree_window = match &cli.degree_window {
        None => None,
        Some(s) => {
            let w = s.split_once(':').and_then(|(a, b)| Some((a.trim().parse::<i32>().ok()?, b.trim().parse::<i32>().ok()?)));
            match w {
                Some((lo, hi)) if lo <= hi => Some((lo, hi)),
                _ => return Err(CliError::Range(format!("--degree-window `{s}` is not lo:hi with lo ≤ hi"))),
            }
        }
    };
    Ok(Options {
        input: cli.input.clone(),
        weight_cutoff: cli.weight_cutoff,
        laurent_cutoff: cli.laurent_cutoff,
        novikov_den: cli.novikov_den,
        novikov_e: e,
        seed: cli.seed,
        degree_window,
    })
}

fn execution() -> Execution {
    match std::env::var("DESCENTLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(1) => Execution::Sequential,
        Some(n) => {
            exec::init_threads(n);
            Execution::best()
        }
        None => Execution::best(),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<bool, CliError> {
    let opts = options(&cli)?;
    match cli.action {
        Action::Fixture { name } => {
            let v = fixtures::emit_fixture(&name, &opts)?;
            emit(&cli.out, &(serde_json::to_string_pretty(&v).expect("serializable") + "\n"))?;
            Ok(true)
        }
        Action::Run(cmd) => {
            let report = commands::run(cmd, &opts, execution())?;
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(&cli.out, &text)?;
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("descentlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
