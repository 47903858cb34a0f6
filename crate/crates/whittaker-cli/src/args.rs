use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use whittaker_core::verify::Suite;
use whittaker_core::Complex64 as C;

#[derive(Debug, Parser)]
#[command(
    name = "whittaker",
    version,
    about = "Whittaker functions, spectra and scattering data of the Whittaker operator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a solution of the Whittaker equation at a list of points.
    Eval(EvalArgs),
    /// Eigenvalues, resonances and the trajectory picture in the rotated presentation.
    Spectrum(SpectrumArgs),
    /// Spectral density kernel on a (k, x, y) grid.
    Density(DensityArgs),
    /// Phase shift and scattering multiplier on a k grid.
    Phase(PhaseArgs),
    /// Run seeded invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Coupling as `re,im` or `re`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: C,
    /// Index as `re,im` or `re`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub m: C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Function {
    #[value(name = "I")]
    #[serde(rename = "I")]
    I,
    #[value(name = "K")]
    #[serde(rename = "K")]
    K,
    #[value(name = "J")]
    #[serde(rename = "J")]
    J,
    #[value(name = "H+")]
    #[serde(rename = "H+")]
    HPlus,
    #[value(name = "H-")]
    #[serde(rename = "H-")]
    HMinus,
    #[value(name = "j0")]
    #[serde(rename = "j0")]
    J0,
    #[value(name = "y0")]
    #[serde(rename = "y0")]
    Y0,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub func: Function,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Evaluation point `re,im` or `re`; repeat for a list.
    #[arg(long = "z", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Vec<C>,
    /// Also integrate the differential equation at real positive points and
    /// report the deviation as the diagnostic.
    #[arg(long)]
    pub oracle: bool,
    /// Integrator tolerance for `--oracle`.
    #[arg(long, default_value_t = whittaker_core::ode::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Rotation of the presentation, in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Largest discrete index N.
    #[arg(long, default_value_t = 10)]
    pub nmax: usize,
    /// Number of trajectory samples.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Momenta, comma separated.
    #[arg(long, value_parser = parse_reals, required = true)]
    pub k: Vec<Vec<f64>>,
    #[arg(long, value_parser = parse_reals, required = true)]
    pub x: Vec<Vec<f64>>,
    #[arg(long, value_parser = parse_reals, required = true)]
    pub y: Vec<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Momenta, comma separated.
    #[arg(long, value_parser = parse_reals, required = true)]
    pub k: Vec<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(value_parser = parse_suites)]
    pub suite: SuiteChoice,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SuiteChoice(pub Vec<Suite>);

fn parse_suites(s: &str) -> Result<SuiteChoice, String> {
    if s == "all" {
        return Ok(SuiteChoice(Suite::ALL.to_vec()));
    }
    s.parse::<Suite>().map(|suite| SuiteChoice(vec![suite])).map_err(|_| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("expected one of {}, all", names.join(", "))
    })
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `re,im` or `re`.
pub fn parse_complex(s: &str) -> Result<C, String> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [re] => Ok(C::new(parse_real(re)?, 0.0)),
        [re, im] => Ok(C::new(parse_real(re)?, parse_real(im)?)),
        _ => Err(format!("`{s}` is not of the form re,im")),
    }
}

fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_real).collect()
}
