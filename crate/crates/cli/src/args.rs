//! Command-line arguments and the optional JSON experiment config.
//!
//! Flags given on the command line take precedence over the config.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use tgd_core::kernel::{FamilyName, KernelDef};
use tgd_core::{Boundary, Order};

use crate::error::{CliError, CliResult};
use crate::io;

#[derive(Debug, Parser)]
#[command(name = "tgd", version, about = "Tao General Difference operators for signals, images and volumes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// JSON experiment config supplying defaults for any flag
    #[arg(long, global = true, value_name = "JSON")]
    pub config: Option<PathBuf>,
    /// Seed for noise generation
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// replicate, reflect, zero or valid
    #[arg(long, global = true)]
    pub boundary: Option<Boundary>,
    /// Scale operator weights to integers
    #[arg(long, global = true)]
    pub integer: bool,
    /// Multiply outputs by the operator's norm constant
    #[arg(long = "norm-constant", global = true)]
    pub norm_constant: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a 1D, 2D or 3D operator as JSON
    GenOp(GenOpArgs),
    /// Convolve a signal, image or volume with an operator
    Apply(ApplyArgs),
    /// Add seeded Gaussian noise
    Noise(NoiseArgs),
    /// Compare a field against a reference
    Metrics(MetricsArgs),
    /// Magnitude spectrum of a 1D operator
    Spectrum(SpectrumArgs),
    /// Check a kernel against the constraints
    ValidateKernel(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    Rotational,
    Orthogonal,
    Lot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RotationArg {
    Cosine,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpFormat {
    Json,
    Csv,
}

pub fn parse_order(s: &str) -> Result<Order, String> {
    match s.to_ascii_lowercase().as_str() {
        "1" | "first" => Ok(Order::First),
        "2" | "second" => Ok(Order::Second),
        "0" | "s" | "smooth" => Ok(Order::Smooth),
        other => Err(format!("order must be 1, 2 or smooth, got '{other}'")),
    }
}

/// Kernel selection and parameters.
#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// gaussian, linear, exponential, landau, weibull, table or lanczos
    #[arg(long)]
    pub kernel: Option<FamilyName>,
    /// Kernel definition file {family, params, W}
    #[arg(long, value_name = "JSON", conflicts_with = "kernel")]
    pub kernel_json: Option<PathBuf>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    /// Linear intercept, a number or "auto"
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Landau exponent
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Table kernel samples on a uniform grid over [0, W]
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

/// Operator construction flags shared by gen-op, apply and spectrum.
#[derive(Debug, Clone, Args)]
pub struct OpArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Kernel size; the support is W = N + 1/2
    #[arg(short = 'N', long = "N")]
    pub size: Option<usize>,
    /// 1, 2 or smooth
    #[arg(long, value_parser = parse_order)]
    pub order: Option<Order>,
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long, value_enum)]
    pub construction: Option<ConstructionArg>,
    /// Unit direction in Cartesian order x,y[,z]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub direction: Option<Vec<f64>>,
    /// 2D direction angle in radians from +x towards +y (rows)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "direction")]
    pub angle: Option<f64>,
    /// Differencing axis for the orthogonal construction, Cartesian (0 = x)
    #[arg(long)]
    pub axis: Option<usize>,
    #[arg(long, value_enum)]
    pub rotation: Option<RotationArg>,
    /// Sample the kernel directly instead of integrating over unit intervals
    #[arg(long)]
    pub sampled: bool,
}

#[derive(Debug, Args)]
pub struct GenOpArgs {
    #[command(flatten)]
    pub op: OpArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// json, or csv for a 2D weight matrix
    #[arg(long, value_enum, default_value = "json")]
    pub format: OpFormat,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub op: OpArgs,
    /// Operator JSON from gen-op; otherwise built from the flags
    #[arg(long = "op", value_name = "JSON")]
    pub op_file: Option<PathBuf>,
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// CSV column holding the signal
    #[arg(long)]
    pub column: Option<String>,
    /// Sample spacing on every axis
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Baselines for 1D signals: central, ld, smoothdiff
    #[arg(long, value_delimiter = ',')]
    pub compare: Option<Vec<String>>,
    /// Gaussian sigma of the smoothdiff baseline
    #[arg(long)]
    pub smooth_sigma: Option<f64>,
    /// Use per-axis passes when the operator has separable factors
    #[arg(long)]
    pub separable: bool,
    /// Tidy plot data (x, series, value) for 1D outputs
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long)]
    pub reference_column: Option<String>,
    /// True edge positions for localization offsets (1D)
    #[arg(long, value_delimiter = ',')]
    pub edges: Option<Vec<f64>>,
    /// Search half-window around each edge
    #[arg(long, default_value_t = 4.0)]
    pub window: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub op: OpArgs,
    #[arg(long = "op", value_name = "JSON")]
    pub op_file: Option<PathBuf>,
    /// FFT length, a power of two
    #[arg(long, default_value_t = 256)]
    pub n_fft: usize,
    /// Add a reference column: gaussian
    #[arg(long)]
    pub compare: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Support half-width
    #[arg(long = "W")]
    pub w: Option<f64>,
    /// Kernel size; sets W = N + 1/2
    #[arg(short = 'N', long = "N", conflicts_with = "w")]
    pub size: Option<usize>,
    /// Also test the kernel itself as a smooth operator
    #[arg(long)]
    pub as_smooth: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(rename = "type", default)]
    pub kind: Option<String>,
    pub sigma: f64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub kernel: Option<KernelDef>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub order: Option<Order>,
    pub dims: Option<usize>,
    pub boundary: Option<Boundary>,
    pub seed: Option<u64>,
    pub noise: Option<NoiseConfig>,
    pub compare: Option<Vec<String>>,
    pub integer: Option<bool>,
    pub norm_constant: Option<bool>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let cfg: Config = serde_json::from_str(&io::read_text(path)?)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if let Some(noise) = &cfg.noise {
            if noise.seed.or(cfg.seed).is_none() {
                return Err(CliError::Usage("config requests noise but gives no seed".into()));
            }
            if let Some(kind) = &noise.kind {
                if kind != "gaussian" {
                    return Err(CliError::Validation(format!("unsupported noise type '{kind}'")));
                }
            }
        }
        Ok(cfg)
    }
}

/// Global settings after merging flags over the config.
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: Config,
    pub seed: Option<u64>,
    pub boundary: Boundary,
    pub integer: bool,
    pub norm_constant: bool,
}

impl Settings {
    pub fn resolve(global: &Global) -> CliResult<Self> {
        let config = Config::load(global.config.as_deref())?;
        Ok(Settings {
            seed: global
                .seed
                .or(config.noise.as_ref().and_then(|n| n.seed))
                .or(config.seed),
            boundary: global.boundary.or(config.boundary).unwrap_or_default(),
            integer: global.integer || config.integer.unwrap_or(false),
            norm_constant: global.norm_constant || config.norm_constant.unwrap_or(false),
            config,
        })
    }

    pub fn input(&self, flag: &Option<PathBuf>) -> CliResult<PathBuf> {
        flag.clone()
            .or_else(|| self.config.input.clone())
            .ok_or_else(|| CliError::Usage("an input path is required (--input or config)".into()))
    }

    pub fn output(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.config.output.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn orders_parse() {
        assert_eq!(parse_order("1"), Ok(Order::First));
        assert_eq!(parse_order("Second"), Ok(Order::Second));
        assert_eq!(parse_order("smooth"), Ok(Order::Smooth));
        assert!(parse_order("3").is_err());
    }

    #[test]
    fn global_flags_after_verb() {
        let cli = Cli::try_parse_from(["tgd", "gen-op", "--N", "5", "--order", "2", "--integer", "--boundary", "reflect"]).unwrap();
        assert!(cli.global.integer);
        assert_eq!(cli.global.boundary, Some(Boundary::Reflect));
        let Command::GenOp(g) = cli.command else { panic!("expected gen-op") };
        assert_eq!(g.op.size, Some(5));
        assert_eq!(g.op.order, Some(Order::Second));
    }

    #[test]
    fn config_without_seed_is_rejected() {
        let dir = std::env::temp_dir().join(format!("tgd-args-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(&path, r#"{"noise": {"type": "gaussian", "sigma": 0.1}}"#).unwrap();
        assert!(matches!(Config::load(Some(&path)), Err(CliError::Usage(_))));
        std::fs::write(&path, r#"{"noise": {"sigma": 0.1}, "seed": 3, "N": 4}"#).unwrap();
        let cfg = Config::load(Some(&path)).unwrap();
        assert_eq!(cfg.n, Some(4));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
