use std::fmt;
use std::fs;
use std::path::Path;

use antisway_core::report::{fmt_sig9, write_series_csv, write_surface_csv, write_sweep_csv};
use antisway_core::{run, sweep_lengths, Error, ExperimentConfig};

use crate::Command;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn config_err(e: Error) -> CliError {
    match e {
        Error::Io(io) => CliError::Io(io.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

fn load(path: Option<&Path>) -> Result<ExperimentConfig, CliError> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => ExperimentConfig::load(p).map_err(|e| match e {
            Error::Io(io) => CliError::Io(format!("{}: {io}", p.display())),
            other => CliError::Config(format!("{}: {other}", p.display())),
        }),
    }
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn csv_buf(f: impl FnOnce(&mut Vec<u8>) -> antisway_core::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(buf)
}

pub fn dispatch(config: Option<&Path>, command: Command) -> Result<(), CliError> {
    match command {
        Command::Infer { phi, phidot } => {
            if !phi.is_finite() || !phidot.is_finite() {
                return Err(CliError::Usage(format!(
                    "--phi and --phidot must be finite, got {phi} and {phidot}"
                )));
            }
            let engine = load(config)?.engine().map_err(config_err)?;
            let u = engine.infer(phi, phidot).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("{}", fmt_sig9(u));
        }
        Command::Surface { n, out } => {
            if n < 2 {
                return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
            }
            let engine = load(config)?.engine().map_err(config_err)?;
            let surface = engine.surface(n, n).map_err(config_err)?;
            write_out(&out, &csv_buf(|b| write_surface_csv(b, &surface))?)?;
        }
        Command::Simulate { out, open_loop } => {
            let cfg = load(config)?;
            let engine = if open_loop {
                None
            } else {
                Some(cfg.engine().map_err(config_err)?)
            };
            let result = run(&cfg.run_config(), engine.as_ref()).map_err(config_err)?;
            write_out(&out, &csv_buf(|b| write_series_csv(b, &result))?)?;
            println!("amplitude {}", fmt_sig9(result.amplitude));
            match result.settle_time {
                Some(t) => println!("settle_time {}", fmt_sig9(t)),
                None => println!("settle_time NOT_SETTLED"),
            }
        }
        Command::Sweep { out } => {
            let cfg = load(config)?;
            let engine = cfg.engine().map_err(config_err)?;
            let lengths = cfg.lengths().map_err(config_err)?;
            let sweep = sweep_lengths(&cfg.run_config(), &engine, &lengths).map_err(config_err)?;
            write_out(&out, &csv_buf(|b| write_sweep_csv(b, &sweep))?)?;
        }
    }
    Ok(())
}
