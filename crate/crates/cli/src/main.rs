//! `fedosov`: batch front end for exact Fedosov star products on linear
//! symplectic orbifold charts.
//!
//! Exit status is 0 when every check passed, 1 when a check failed and 2 on
//! unusable input.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "fedosov", version, about = "Exact Fedosov star products on linear symplectic orbifold charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Chart description (JSON).
    #[arg(long)]
    pub chart: PathBuf,
    /// Override the truncation order of the chart file.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    pub json: bool,
    /// Debugging aid: flip the sign of the Poisson tensor. Breaks DQ2 on
    /// purpose.
    #[arg(long)]
    pub flip_pi_sign: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the Fedosov connection and report flatness.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Star product coefficients of two polynomials.
    Star {
        #[command(flatten)]
        common: Common,
        /// First factor, e.g. "x1^2 + x2".
        f: String,
        /// Second factor.
        g: String,
        /// Highest λ-order to print (defaults to the exact range).
        #[arg(long)]
        orders: Option<u32>,
    },
    /// Orbit-type stratification of the chart's group.
    Strata {
        #[command(flatten)]
        common: Common,
        /// Largest group order for subgroup enumeration.
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Run the seeded property suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// λ-orders for the star-product axioms.
        #[arg(long, default_value_t = 3)]
        orders: u32,
    },
}

/// How a command ended.
pub enum Failure {
    /// A check failed; the report has been printed.
    Check,
    /// Unusable input.
    Input(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { common } => commands::build(&common),
        Command::Star { common, f, g, orders } => commands::star(&common, &f, &g, orders),
        Command::Strata { common, budget } => commands::strata(&common, budget),
        Command::Verify { common, seed, samples, orders } => commands::verify(&common, seed, samples, orders),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
