mod commands;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

/// Exact checks on algebroids, Courant algebroids and Dirac structures.
#[derive(Parser, Debug)]
#[command(name = "supermod", version)]
struct Cli {
    /// Problem file.
    file: PathBuf,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Jacobi identity via [d, d] = 0.
    CheckJacobi { algebroid: String },
    /// Modular cocycle, or the characteristic form for a gauge.
    Modular {
        algebroid: String,
        #[arg(long)]
        gauge: Option<String>,
    },
    /// Polynomial primitive of a cocycle up to a degree bound.
    Exact {
        algebroid: String,
        cocycle: String,
        #[arg(long)]
        bound: u32,
    },
    MorphismCheck { morphism: String },
    MorphismMod { morphism: String },
    /// {H, H} = 0.
    CourantCheck { hamiltonian: String },
    /// Dorfman bracket {{X, H}, Y}.
    Dorfman { hamiltonian: String, x: String, y: String },
    Projectable { hamiltonian: String },
    /// Algebroid on E read off a projectable Hamiltonian.
    Project { hamiltonian: String },
    QuasiPoisson { bivector: String, hamiltonian: String },
    TwistedBracket {
        bivector: String,
        hamiltonian: String,
        alpha: String,
        beta: String,
    },
    DiracCheck { frame: String, hamiltonian: String },
    RelativeModular { target: String, hamiltonian: String },
    VerifyCor53 { bivector: String, hamiltonian: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.file.display());
            return ExitCode::from(2);
        }
    };
    let problem = match problem::Problem::parse(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.file.display());
            return ExitCode::from(2);
        }
    };
    match commands::run(&problem, &cli.verb) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
