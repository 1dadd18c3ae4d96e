//! `hkorlicz`: gauge integrals, Orlicz norms, conjugates, distribution
//! tables, mollifier experiments and the verification suites, as CSV.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 divergence, non-convergence
//! or failed verification.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::FunctionSpec;
use config::{Config, Overrides};

#[derive(Parser)]
#[command(name = "hkorlicz", version, about = "Henstock-Kurzweil integration and Orlicz space numerics")]
struct Cli {
    /// Absolute integration tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Flat key=value file (tol, divergence_cap, cell_cap, seed, output_path).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FnArgs {
    /// An expression in `x`, or `corpus:NAME`.
    #[arg(long = "fn")]
    function: String,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Comma-separated points where the function is singular.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    singularities: Vec<f64>,
}

impl FnArgs {
    fn spec(&self) -> FunctionSpec {
        FunctionSpec { text: self.function.clone(), a: self.a, b: self.b, singularities: self.singularities.clone() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Gauge integral of --fn over [a, b].
    Integrate(FnArgs),
    /// Luxemburg or Alexiewicz norm over [a, b].
    Norm {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long = "type", default_value = "luxemburg")]
        kind: String,
        #[arg(long)]
        young: Option<String>,
    },
    /// Numeric convex conjugate at the points --t.
    Conjugate {
        #[arg(long)]
        young: String,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        t: Vec<f64>,
    },
    /// Distribution function of |f| over [a, b] at the levels --ts.
    Distribution {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        ts: Vec<f64>,
    },
    /// Norm of M_k * f - f for each k.
    Mollify {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value = "power:2")]
        young: String,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
        ks: Vec<f64>,
    },
    /// Run every verification suite on the default corpus.
    Verify,
}

fn run(cli: Cli) -> commands::Outcome {
    let flags = Overrides { tol: cli.tol, seed: cli.seed, out: cli.out };
    let cfg = Config::load(cli.config.as_deref(), &flags)?;
    match &cli.command {
        Command::Integrate(f) => commands::integrate(&cfg, &f.spec()),
        Command::Norm { f, kind, young } => commands::norm(&cfg, &f.spec(), kind, young.as_deref()),
        Command::Conjugate { young, t } => commands::conjugate_cmd(&cfg, young, t),
        Command::Distribution { f, ts } => commands::distribution_cmd(&cfg, &f.spec(), ts),
        Command::Mollify { f, young, ks } => commands::mollify(&cfg, &f.spec(), young, ks),
        Command::Verify => commands::verify(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::USAGE } else { commands::OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("hkorlicz: {msg}");
            ExitCode::from(commands::USAGE)
        }
    }
}
