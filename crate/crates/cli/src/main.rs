use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fanic_cli::commands::{self, Input, Options};
use fanic_cli::Report;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser)]
#[command(name = "fanic", version, about = "Intersection cohomology invariants of polyhedral fans")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Add wall-clock timings to the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan axioms and print face lattice statistics.
    Validate { path: String },
    /// Generalized h-vector of a quasi-convex fan, or a local polynomial.
    Hvector {
        path: String,
        /// P of the pair (fan, boundary) instead of P of the fan.
        #[arg(long)]
        relative: bool,
        /// Local polynomial of one cone: `top`, `o`, an id, or `[r0,r1,...]`.
        #[arg(long, value_name = "CONE")]
        local: Option<String>,
        /// Skip the quasi-convexity test.
        #[arg(long)]
        assume_qc: bool,
    },
    /// Topological quasi-convexity test with failing cones.
    Quasiconvex { path: String },
    /// Build the minimal extension sheaf and report its generators.
    Sheaf {
        path: String,
        #[arg(long, value_name = "D")]
        max_degree: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run every applicable property check on a fan or on the whole corpus.
    Verify {
        #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
        path: Option<String>,
        #[arg(long)]
        corpus: bool,
        #[arg(long, value_name = "D")]
        max_degree: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn execute(cli: &Cli) -> Result<Report> {
    let base = Options { timing: cli.timing, ..Default::default() };
    match &cli.command {
        Command::Validate { path } => commands::validate(&Input::read(path)?, &base),
        Command::Hvector { path, relative, local, assume_qc } => {
            commands::hvector(&Input::read(path)?, *relative, local.as_deref(), *assume_qc, &base)
        }
        Command::Quasiconvex { path } => commands::quasiconvex(&Input::read(path)?, &base),
        Command::Sheaf { path, max_degree, seed } => {
            commands::sheaf(&Input::read(path)?, &Options { max_degree: *max_degree, seed: *seed, ..base })
        }
        Command::Verify { path, corpus, max_degree, seed } => {
            let opts = Options { max_degree: *max_degree, seed: *seed, ..base };
            match (path, corpus) {
                (_, true) => commands::verify_corpus(&opts),
                (Some(p), false) => commands::verify(&Input::read(p)?, &opts),
                (None, false) => bail!("verify needs a path or --corpus"),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Structured => print!("{}", report.to_json()),
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
