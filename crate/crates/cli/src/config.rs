use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    /// Lowest levels of one realization
    Spectrum,
    /// Local and separable levels against the zero-range limit over a width sweep
    Converge,
    /// Realizations compared at one width
    Equivalence,
    /// ε roots mapped onto the δ condition
    Duality,
    /// Bare and renormalized second-order series over a width sweep
    Perturb,
    /// Lattice sums against their closed forms
    Sums,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Converge => "converge",
            CommandKind::Equivalence => "equivalence",
            CommandKind::Duality => "duality",
            CommandKind::Perturb => "perturb",
            CommandKind::Sums => "sums",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Delta,
    Epsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    Limit,
    Local,
    Separable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

/// Reproducible experiments for δ and ε contact interactions on a ring.
#[derive(Debug, Clone, Parser)]
#[command(name = "pointspec", version, about)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandKind,
    #[arg(long, value_enum, default_value_t = ModelKind::Epsilon)]
    pub model: ModelKind,
    #[arg(long, value_enum, default_value_t = Realization::Limit)]
    pub realization: Realization,
    /// Ring circumference
    #[arg(long = "L", default_value_t = TAU)]
    pub l: f64,
    /// ε coupling (length); defaults to 0.001 for the ε model
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// δ coupling (1/length)
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Single regularization width; replaces the sweep
    #[arg(long, conflicts_with_all = ["a_start", "a_factor", "a_count"])]
    pub a: Option<f64>,
    #[arg(long)]
    pub a_start: Option<f64>,
    #[arg(long)]
    pub a_factor: Option<f64>,
    #[arg(long)]
    pub a_count: Option<usize>,
    /// Mode number of the tracked level
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Plane-wave cutoff of truncated Hamiltonians
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Cutoff of the perturbative and lattice sums
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json,svg")]
    pub format: Vec<Format>,
    /// Recorded in the metadata of every table
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Leave the timestamp out of the metadata (byte-stable output)
    #[arg(long)]
    pub no_timestamp: bool,
    /// Print the resolved configuration as JSON and exit
    #[arg(long)]
    pub print_config: bool,
}

pub const DEFAULT_C: f64 = 0.001;
pub const DEFAULT_SWEEP: (f64, f64, usize) = (0.1, 0.5, 3);
pub const DEFAULT_WIDTH: f64 = 1e-3;
pub const DEFAULT_N_MAX: usize = 1000;

/// Fully resolved experiment settings, echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub model: ModelKind,
    pub realization: Realization,
    #[serde(rename = "L")]
    pub l: f64,
    pub c: Option<f64>,
    pub v: Option<f64>,
    /// Width used by single-width commands.
    pub a: f64,
    /// Widths of sweep commands, descending.
    pub widths: Vec<f64>,
    pub n: usize,
    pub n_max: usize,
    pub m_max: Option<usize>,
    pub count: usize,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub seed: u64,
    pub timestamp: bool,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        if !(cli.l.is_finite() && cli.l > 0.0) {
            return Err(config_error(format!("--L must be a positive circumference, got {}", cli.l)));
        }
        let (c, v) = match (cli.model, cli.c, cli.v) {
            (_, Some(_), Some(_)) => return Err(config_error("set exactly one of --c and --v")),
            (ModelKind::Epsilon, _, Some(_)) => {
                return Err(config_error("--v is the δ coupling; use --c with --model epsilon"))
            }
            (ModelKind::Delta, Some(_), _) => {
                return Err(config_error("--c is the ε coupling; use --v with --model delta"))
            }
            (ModelKind::Epsilon, c, None) => (Some(c.unwrap_or(DEFAULT_C)), None),
            (ModelKind::Delta, None, Some(v)) => (None, Some(v)),
            (ModelKind::Delta, None, None) if cli.command == CommandKind::Sums => (None, None),
            (ModelKind::Delta, None, None) => return Err(config_error("--model delta needs --v")),
        };
        if c.or(v).is_some_and(|x| !x.is_finite()) {
            return Err(config_error("couplings must be finite"));
        }
        let widths = match cli.a {
            Some(a) => vec![a],
            None => {
                let start = cli.a_start.unwrap_or(DEFAULT_SWEEP.0);
                let factor = cli.a_factor.unwrap_or(DEFAULT_SWEEP.1);
                let count = cli.a_count.unwrap_or(DEFAULT_SWEEP.2);
                if count < 2 {
                    return Err(config_error(format!("--a-count must be at least 2, got {count}")));
                }
                if !(factor > 0.0 && factor < 1.0) {
                    return Err(config_error(format!("--a-factor must lie in (0, 1), got {factor}")));
                }
                (0..count).map(|i| start * factor.powi(i as i32)).collect()
            }
        };
        let a = cli.a.unwrap_or(DEFAULT_WIDTH);
        for &w in widths.iter().chain(std::iter::once(&a)) {
            if !(w > 0.0 && w < cli.l / 2.0) {
                return Err(config_error(format!("widths must lie in (0, L/2) = (0, {}), got {w}", cli.l / 2.0)));
            }
        }
        if cli.count == 0 {
            return Err(config_error("--count must be at least 1"));
        }
        let n_max = cli.n_max.unwrap_or(DEFAULT_N_MAX);
        if n_max < 2 {
            return Err(config_error(format!("--n-max must be at least 2, got {n_max}")));
        }
        let needs_odd_mode = matches!(cli.command, CommandKind::Perturb | CommandKind::Sums)
            || (cli.model == ModelKind::Epsilon && matches!(cli.command, CommandKind::Converge | CommandKind::Equivalence));
        if needs_odd_mode && cli.n == 0 {
            return Err(config_error("--n must be at least 1 here (odd modes start at n = 1)"));
        }
        if matches!(cli.command, CommandKind::Perturb | CommandKind::Duality) && cli.model != ModelKind::Epsilon {
            return Err(config_error(format!("`{}` works with --model epsilon", cli.command.name())));
        }
        if cli.format.is_empty() {
            return Err(config_error("--format needs at least one of csv, json, svg"));
        }
        let mut formats = cli.format.clone();
        formats.sort();
        formats.dedup();
        Ok(Self {
            command: cli.command,
            model: cli.model,
            realization: cli.realization,
            l: cli.l,
            c,
            v,
            a,
            widths,
            n: cli.n,
            n_max,
            m_max: cli.m_max,
            count: cli.count,
            out_dir: cli.out.clone(),
            formats,
            seed: cli.seed,
            timestamp: !cli.no_timestamp,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configuration serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<ExperimentConfig, CliError> {
        let mut full = vec!["pointspec"];
        full.extend_from_slice(args);
        ExperimentConfig::resolve(&Cli::try_parse_from(full).expect("flags parse"))
    }

    #[test]
    fn defaults_reproduce_the_small_coupling_regime() {
        let cfg = parse(&["perturb"]).unwrap();
        assert_eq!(cfg.c, Some(0.001));
        assert_eq!(cfg.widths, vec![0.1, 0.05, 0.025]);
        assert!((cfg.l - TAU).abs() < 1e-15);
        assert_eq!(cfg.formats, vec![Format::Csv, Format::Json, Format::Svg]);
    }

    #[test]
    fn coupling_must_match_model() {
        assert!(matches!(parse(&["spectrum", "--v", "0.1"]), Err(CliError::Config(_))));
        assert!(matches!(parse(&["spectrum", "--model", "delta", "--c", "0.1"]), Err(CliError::Config(_))));
        assert!(matches!(parse(&["spectrum", "--model", "delta"]), Err(CliError::Config(_))));
        let cfg = parse(&["spectrum", "--model", "delta", "--v", "-0.5"]).unwrap();
        assert_eq!(cfg.v, Some(-0.5));
        assert!(matches!(parse(&["perturb", "--model", "delta", "--v", "1"]), Err(CliError::Config(_))));
    }

    #[test]
    fn sweeps_are_validated() {
        let cfg = parse(&["converge", "--a-start", "0.01", "--a-factor", "0.5", "--a-count", "3"]).unwrap();
        assert_eq!(cfg.widths, vec![0.01, 0.005, 0.0025]);
        assert!(parse(&["converge", "--a-count", "1"]).is_err());
        assert!(parse(&["converge", "--a-factor", "1.5"]).is_err());
        assert!(parse(&["converge", "--a-start", "4.0"]).is_err());
        assert!(Cli::try_parse_from(["pointspec", "converge", "--a", "0.1", "--a-count", "3"]).is_err());
        assert_eq!(parse(&["spectrum", "--a", "0.002"]).unwrap().widths, vec![0.002]);
    }

    #[test]
    fn formats_are_deduplicated() {
        let cfg = parse(&["sums", "--format", "svg,csv,svg"]).unwrap();
        assert_eq!(cfg.formats, vec![Format::Csv, Format::Svg]);
        assert!(Cli::try_parse_from(["pointspec", "sums", "--format", "xml"]).is_err());
    }
}
