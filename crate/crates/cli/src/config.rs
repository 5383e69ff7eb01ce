//! Command-line flags, the optional JSON config file, and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use keldysh_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "keldysh-disk", version, about = "Spectral experiments for the operators L_gamma on the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dirichlet eigenpairs with eigen-residuals.
    Eig(CommonArgs),
    /// Dirichlet-to-Neumann eigenvalues with oracle and truncation columns.
    Dn(CommonArgs),
    /// Robin-type extension resolvent through the Krein formula.
    Krein(KreinArgs),
    /// Inequality audits; `all` runs every one.
    Audit(AuditArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// A single value g or an inclusive grid g1:g2:step.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Radial truncation.
    #[arg(long = "N")]
    pub truncation: Option<u32>,
    /// Angular mode cutoff.
    #[arg(long = "M")]
    pub modes: Option<i64>,
    /// Spectral parameter re[,im].
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with the same keys; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct KreinArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Boundary symbol: a number, `const:re[,im]`, `table:m=v;m=v` or `rational:p0,p1/q0,q1`
    /// (real polynomial coefficients in m, increasing degree).
    #[arg(long = "B", default_value = "1", allow_hyphen_values = true)]
    pub symbol: String,
    /// Also scan [lo, hi] for Robin eigenvalues on modes 0..=M: lo:hi[:samples].
    #[arg(long, allow_hyphen_values = true)]
    pub scan: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct AuditArgs {
    /// Audit name, or `all`.
    pub which: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Either a number or a string in the config file.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum Loose {
    Num(f64),
    Pair([f64; 2]),
    Text(String),
}

impl Loose {
    fn text(self) -> String {
        match self {
            Loose::Num(v) => format!("{v}"),
            Loose::Pair([a, b]) => format!("{a},{b}"),
            Loose::Text(s) => s,
        }
    }
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    gamma: Option<Loose>,
    #[serde(rename = "N")]
    truncation: Option<u32>,
    #[serde(rename = "M")]
    modes: Option<i64>,
    lambda: Option<Loose>,
    c0: Option<f64>,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

/// The validated configuration every command runs from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub gamma: Vec<f64>,
    /// Whether γ was given explicitly; audits fall back to their own grids otherwise.
    #[serde(skip)]
    pub gamma_given: bool,
    #[serde(rename = "N")]
    pub truncation: Option<u32>,
    #[serde(rename = "M")]
    pub modes: Option<i64>,
    #[serde(skip)]
    lambda: Complex64,
    #[serde(rename = "lambda")]
    lambda_parts: [f64; 2],
    pub c0: f64,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }
}

pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_SEED: u64 = 0;

/// Parses `g` or `g1:g2:step` into an inclusive grid.
pub fn parse_gamma(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{t}' in gamma '{s}'")));
    let out = match parts.as_slice() {
        [g] => vec![num(g)?],
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0 && b >= a && a.is_finite() && b.is_finite()) {
                return Err(CliError::Usage(format!("gamma grid '{s}' needs g1 <= g2 and step > 0")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            if count > 10_000 {
                return Err(CliError::Usage(format!("gamma grid '{s}' has {count} points")));
            }
            // snap to a 1e−12 lattice so that 0.1 steps produce clean values like 0.3
            (0..count).map(|i| ((a + step * i as f64) * 1e12).round() / 1e12).collect()
        }
        _ => return Err(CliError::Usage(format!("gamma must be g or g1:g2:step, got '{s}'"))),
    };
    if out.iter().any(|g| !g.is_finite()) {
        return Err(CliError::Usage(format!("gamma '{s}' is not finite")));
    }
    Ok(out)
}

/// Parses `re` or `re,im`.
pub fn parse_lambda(s: &str) -> Result<Complex64, CliError> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{t}' in lambda '{s}'")));
    let v = match s.split(',').collect::<Vec<_>>().as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(CliError::Usage(format!("lambda must be re or re,im, got '{s}'"))),
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(CliError::Usage(format!("lambda '{s}' is not finite")));
    }
    Ok(v)
}

impl CommonArgs {
    /// Merges the config file (if any) under the flags and validates the result.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let gamma_text = self.gamma.clone().or(file.gamma.map(Loose::text));
        let gamma_given = gamma_text.is_some();
        let gamma = match &gamma_text {
            Some(t) => parse_gamma(t)?,
            None => vec![DEFAULT_GAMMA],
        };
        let lambda = match self.lambda.clone().or(file.lambda.map(Loose::text)) {
            Some(t) => parse_lambda(&t)?,
            None => Complex64::new(0.0, 0.0),
        };
        let c0 = self.c0.or(file.c0).unwrap_or(keldysh_core::DEFAULT_C0);
        if !c0.is_finite() {
            return Err(CliError::Usage("c0 must be finite".into()));
        }
        let modes = self.modes.or(file.modes);
        if modes.is_some_and(|m| m < 0) {
            return Err(CliError::Usage("M must be nonnegative".into()));
        }
        Ok(RunConfig {
            gamma,
            gamma_given,
            truncation: self.truncation.or(file.truncation),
            modes,
            lambda,
            lambda_parts: [lambda.re, lambda.im],
            c0,
            seed: self.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            format: self.format.or(file.format).unwrap_or_default(),
            out: self.out.clone().or(file.out),
        })
    }
}
