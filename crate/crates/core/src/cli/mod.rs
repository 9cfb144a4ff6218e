//! Command-line front end for `vortex-oam`.
//!
//! Exit codes: 0 success, 1 domain or I/O error (including a failed
//! `verify`), 2 configuration or usage error, 3 a quadrature did not
//! converge (records are still written).

pub mod commands;
pub mod config;
pub mod record;
pub mod verify;

use crate::error::{Error, Result};
use crate::ledge::Helicity;
use clap::{Parser, Subcommand};
use config::RunConfig;
use record::{emit, Format, ResultRecord};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "vortex-oam", version, about = "OAM transfer between vortex beams and hydrogenic atoms")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout (overrides OAM_OUT).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optical-vortex matrix element from the `[ov]` config block.
    OvMatrix,
    /// Electron-vortex matrix element from the `[ev]` config block.
    EvMatrix,
    /// The azimuthal kernel integral Y for one exponent.
    YAlpha {
        #[arg(long, allow_negative_numbers = true)]
        n: i32,
        #[arg(long = "F")]
        f: f64,
        #[arg(long = "G")]
        g: f64,
    },
    /// Electron-vortex channels for small winding and projection changes.
    SelectionTable,
    /// L2/L3 transitions for one beam winding (both when omitted).
    Ledge {
        #[arg(long = "l", allow_negative_numbers = true)]
        l: Option<i32>,
    },
    /// Helicity-resolved L-edge rates and their difference.
    Dichroism,
    /// Run the invariant suite.
    Verify,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_DOMAIN,
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// writes records to `--out` or `stdout`. Diagnostics go to `stderr`.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "vortex-oam: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn env_threads() -> Result<Option<usize>> {
    match std::env::var("OAM_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("OAM_THREADS must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(None),
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let format = cli.format.or(cfg.format).unwrap_or_default();
    let out = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("OAM_OUT").map(PathBuf::from))
        .or_else(|| cfg.out.clone());
    let threads = env_threads()?.or(cfg.threads);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    let (records, failed_checks) = pool.install(|| records_for(&cli.command, &cfg))?;

    match out {
        Some(path) => {
            let mut f = std::fs::File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            emit(&records, format, &mut f)?;
        }
        None => emit(&records, format, stdout)?,
    }
    if failed_checks > 0 {
        return Ok(EXIT_DOMAIN);
    }
    if records.iter().any(|r| !r.converged()) {
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(EXIT_OK)
}

fn records_for(cmd: &Command, cfg: &RunConfig) -> Result<(Vec<ResultRecord>, usize)> {
    let recs = match cmd {
        Command::OvMatrix => vec![commands::ov_record(&cfg.ov_problem()?)?],
        Command::EvMatrix => vec![commands::ev_record(&cfg.ev_problem()?)?],
        Command::YAlpha { n, f, g } => {
            let tol = cfg.tolerance_or(crate::ev_coupling::Y_TOLERANCE);
            vec![commands::y_alpha_record(*n, *f, *g, &tol)?]
        }
        Command::SelectionTable => commands::selection_table_records(),
        Command::Ledge { l } => {
            let h = l.map(Helicity::from_l).transpose()?;
            commands::ledge_records(h, cfg.ledge_radial())?
        }
        Command::Dichroism => {
            let dos = cfg.dos()?;
            let kc = cfg.kernel_config();
            commands::dichroism_records(&dos, &cfg.helicity_kernel()?, commands::kernel_label(&kc), cfg.ledge_radial())?
        }
        Command::Verify => {
            let checks = verify::run_all();
            let failed = checks.iter().filter(|c| !c.passed).count();
            return Ok((checks.iter().map(verify::Check::record).collect(), failed));
        }
    };
    Ok((recs, 0))
}
