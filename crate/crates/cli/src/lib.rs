//! Command-line front end for keldysh-core: eigenpairs, Dirichlet-to-Neumann values,
//! Krein resolvents and inequality audits, written as JSON or CSV tables.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;

use clap::Parser;
use keldysh_core::Error;

use crate::config::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_REGIME: i32 = 2;
pub const EXIT_SPECTRAL_COLLISION: i32 = 3;
pub const EXIT_KREIN_COLLISION: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "KELDYSH_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
    /// Some audits ran but did not pass; the document is still emitted.
    AuditsFailed(usize),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(Error::KreinCollision { mode, modulus }) => {
                write!(f, "Krein denominator {modulus:.3e} on mode {mode}: lambda is a candidate eigenvalue of the extension")
            }
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::AuditsFailed(n) => write!(f, "{n} audit(s) failed"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Regime(_)) => EXIT_REGIME,
            CliError::Core(Error::SpectralCollision { .. }) => EXIT_SPECTRAL_COLLISION,
            CliError::Core(Error::KreinCollision { .. }) => EXIT_KREIN_COLLISION,
            CliError::Core(Error::Domain(_) | Error::Malformed(_)) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

/// What a run produced: the exit code, the rendered document (if any) and a message.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Parses arguments, runs the command and renders the output. Writes `--out` files
/// itself; everything else is left to the caller.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome { code, stdout: if code == EXIT_OK { e.to_string() } else { String::new() }, stderr: if code == EXIT_OK { String::new() } else { e.to_string() } };
        }
    };
    let threads = match thread_count() {
        Ok(t) => t,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("thread pool: {e}\n") },
    };
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Outcome {
    let common = match &command {
        Command::Eig(c) | Command::Dn(c) => c,
        Command::Krein(k) => &k.common,
        Command::Audit(a) => &a.common,
    };
    let cfg = match common.resolve() {
        Ok(c) => c,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    };
    let result = match &command {
        Command::Eig(_) => commands::eig(&cfg),
        Command::Dn(_) => commands::dn(&cfg),
        Command::Krein(k) => commands::krein(&cfg, &k.symbol, k.scan.as_deref()),
        Command::Audit(a) => commands::audit(&cfg, &a.which),
    };
    let (doc, err) = match result {
        Ok((doc, failed)) => (Some(doc), (failed > 0).then_some(CliError::AuditsFailed(failed))),
        Err(e) => (None, Some(e)),
    };
    let mut out = Outcome { code: EXIT_OK, stdout: String::new(), stderr: String::new() };
    if let Some(doc) = doc {
        let text = doc.render(cfg.format);
        match &cfg.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &text) {
                    let e = CliError::Io(format!("cannot write {}: {e}", path.display()));
                    return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") };
                }
            }
            None => out.stdout = text,
        }
    }
    if let Some(e) = err {
        out.code = e.exit_code();
        out.stderr = format!("{e}\n");
    }
    out
}
