use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use nctorus::config::{parse_matrix, RunConfig};
use nctorus::tables::{export_constants, TableFile};
use nctorus::{commands, run_suite, CliError, Report};
use nctorus_core::sl2::TorusParams;
use nctorus_core::theta::structure_constants;

#[derive(Parser)]
#[command(name = "nctorus", version, about = "Holomorphic bundles on noncommutative two-tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Flags {
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    window: i64,
    #[arg(long = "hermite-dim", default_value_t = 256)]
    hermite_dim: usize,
    #[arg(long = "tau-re", default_value_t = 0.0, allow_hyphen_values = true)]
    tau_re: f64,
    #[arg(long = "tau-im", default_value_t = -1.0, allow_hyphen_values = true)]
    tau_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long = "theta-prime", default_value_t = 0.25, allow_hyphen_values = true)]
    theta_prime: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON output to this file instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

impl Flags {
    fn config(&self) -> RunConfig {
        RunConfig {
            tol: self.tol,
            window: self.window,
            hermite_dim: self.hermite_dim,
            tau: Complex64::new(self.tau_re, self.tau_im),
            theta: self.theta,
            theta_prime: self.theta_prime,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: identities, index, constants, category, equivalence, fourier or all.
    Verify {
        suite: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Structure constants for two matrices given as "a,b;c,d".
    Constants {
        #[arg(allow_hyphen_values = true)]
        g1: String,
        #[arg(allow_hyphen_values = true)]
        g2: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Cohomology of the basic module with bottom row (m, n).
    Cohomology {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[command(flatten)]
        flags: Flags,
    },
    /// Functor checks between two parameter values.
    Equivalence {
        #[arg(value_name = "THETA", allow_hyphen_values = true)]
        from: f64,
        #[arg(value_name = "THETA_PRIME", allow_hyphen_values = true)]
        to: f64,
        #[command(flatten)]
        flags: Flags,
    },
    /// Fourier slice invariants of the basic module with bottom row (m, n).
    Fourier {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[command(flatten)]
        flags: Flags,
    },
}

/// A closed downstream pipe is not an error.
fn quiet_pipe(r: io::Result<()>) -> io::Result<()> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}

fn emit<T: Serialize>(value: &T, path: &Option<PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => quiet_pipe(writeln!(io::stdout().lock(), "{text}"))?,
    }
    Ok(())
}

fn finish_report(report: &Report, path: &Option<PathBuf>) -> Result<bool, CliError> {
    if let Some(p) = path {
        std::fs::write(p, serde_json::to_string_pretty(report)?)?;
    }
    let mut out = io::stdout().lock();
    quiet_pipe(writeln!(out, "suite {} (seed {})", report.suite, report.seed))?;
    for c in &report.checks {
        quiet_pipe(writeln!(out, "{c}"))?;
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify { suite, flags } => finish_report(&run_suite(&suite, &flags.config())?, &flags.json),
        Command::Constants { g1, g2, flags } => {
            let config = flags.config().validate()?;
            let (g1, g2) = (parse_matrix(&g1)?, parse_matrix(&g2)?);
            let params = TorusParams::new(config.theta, config.tau)?;
            let zero = Complex64::new(0.0, 0.0);
            match &flags.json {
                Some(p) => {
                    export_constants(&g1, &g2, params, zero, zero, config.tol, p)?;
                }
                None => emit(&TableFile::from(&structure_constants(&g1, &g2, params, zero, zero, config.tol)?), &None)?,
            }
            Ok(true)
        }
        Command::Cohomology { n, m, flags } => {
            emit(&commands::cohomology(n, m, &flags.config())?, &flags.json)?;
            Ok(true)
        }
        Command::Equivalence { from, to, flags } => {
            let config = RunConfig { theta: from, theta_prime: to, ..flags.config() };
            finish_report(&commands::equivalence(&config)?, &flags.json)
        }
        Command::Fourier { n, m, flags } => {
            let rep = commands::fourier(n, m, &flags.config())?;
            emit(&rep, &flags.json)?;
            Ok(rep.automorphy != Some(false) && rep.nonsplit != Some(false))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        super::Cli::command().debug_assert();
    }
}
