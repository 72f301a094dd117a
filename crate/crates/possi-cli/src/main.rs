//! `possi` — batch front end for the possibilistic coinsurance engine.
//!
//! Three modes over a single JSON problem file: `solve` runs the exact and
//! approximate optimizers once, `sweep` re-solves along a loading-factor or
//! mixture-weight grid, and `compare` puts operators side by side. Output
//! is a table, CSV with a fixed header, or JSON.

mod record;
mod run;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "possi", version, about = "Possibilistic coinsurance calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SweepParam {
    Lambda,
    C,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file exactly and approximately.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// Residual tolerance on the first-order condition.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Re-solve along a parameter grid; one row per grid point.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Solve the same problem under several operators side by side.
    Compare {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated list, e.g. `t1,t2,mix:0.5`.
        #[arg(long)]
        operators: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve { input, format, tol } => run::run_solve(&input, format, tol),
        Command::Sweep {
            input,
            param,
            from,
            to,
            steps,
            format,
            tol,
        } => run::run_sweep(&input, param, from, to, steps, format, tol),
        Command::Compare {
            input,
            operators,
            format,
            tol,
        } => run::run_compare(&input, &operators, format, tol),
    };
    match outcome {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
