//! `antisway`: evaluate the controller, export its surface, simulate the
//! loop and sweep suspension lengths, all driven by one JSON config.
//!
//! Exit codes: 0 success, 1 usage error, 2 config error, 3 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "antisway", version, about = "Fuzzy anti-sway controller experiments")]
struct Cli {
    /// Experiment config (JSON). Built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the controller output for one input pair.
    Infer {
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, allow_negative_numbers = true)]
        phidot: f64,
    },
    /// Write the control surface as CSV (phi,phidot,u).
    Surface {
        #[arg(long, default_value_t = 41)]
        n: usize,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Simulate one run, write the time series (t,phi,phidot,u) and print metrics.
    Simulate {
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long)]
        open_loop: bool,
    },
    /// Sweep suspension lengths and write l,V,t_pp.
    Sweep {
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli.config.as_deref(), cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("antisway: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
