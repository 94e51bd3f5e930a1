//! Command-line front end.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;
use rayon::prelude::*;

use crate::error::Error;
use crate::hydrogenic::AtomicState;
use crate::quantized::{self, FockMode};
use crate::radial::{build_basis, RadialBasis};
use crate::stark::{self, LaserField, PolarizabilityResult};
use crate::tdse::{self, DampedDriveConfig};
use crate::units::CODATA_2018;

pub use config::{parse_config, ConfigError, Mode, Options, RunConfig};
pub use output::{ResultRow, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable capping the scan thread pool.
pub const THREADS_ENV: &str = "ACSTARK_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("computation failed: {0}")]
    Compute(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Compute(_) | Self::Io(_) => EXIT_COMPUTE,
        }
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let opts = match Options::try_parse_from(args) {
        Ok(o) => o,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match parse_config(opts).map_err(CliError::from).and_then(|cfg| run(&cfg)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("acstark: {e}");
            e.exit_code()
        }
    }
}

/// Computes the table for `cfg` and writes it to the configured sink.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let table = compute_table(cfg)?;
    match &cfg.out {
        Some(path) => write_table(cfg, &table, BufWriter::new(File::create(path)?))?,
        None => write_table(cfg, &table, io::stdout().lock())?,
    }
    Ok(())
}

fn write_table<W: Write>(cfg: &RunConfig, table: &Table, mut out: W) -> io::Result<()> {
    match cfg.format {
        config::Format::Csv => table.write_csv(&mut out)?,
        config::Format::Json => table.write_json(&mut out)?,
    }
    out.flush()
}

pub fn compute_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let basis = build_basis(cfg.basis, cfg.state.z())?;
    let (rows, extra_columns) = match cfg.mode {
        Mode::Shift | Mode::TwoPhotonPreset => {
            let omega = cfg.omega.expect("validated");
            (vec![single_row(&cfg.state, omega, cfg.intensity, &basis)?], vec![])
        }
        Mode::Scan => (scan_rows(cfg, &basis)?, vec![]),
        Mode::Quantized => (vec![quantized_row(cfg, &basis)?], vec!["classical_deviation"]),
        Mode::Oracle => (
            vec![oracle_row(cfg, &basis)?],
            vec![
                "delta_E_real_au",
                "delta_E_imag_au",
                "tdse_delta_E_real_au",
                "tdse_delta_E_imag_au",
                "tdse_relative_deviation",
            ],
        ),
    };
    Ok(Table {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.hash(),
        config_json: serde_json::to_value(cfg).expect("config serializes"),
        extra_columns,
        rows,
    })
}

fn lambda_nm(omega: f64) -> f64 {
    CODATA_2018.omega_au_to_nm(omega)
}

fn row_from(p: &PolarizabilityResult, intensity: f64) -> Result<ResultRow, Error> {
    let field = LaserField::from_intensity(p.omega, intensity)?;
    let s = stark::stark_shift(p, &field)?;
    let mut row = ResultRow {
        omega_au: p.omega,
        lambda_nm: lambda_nm(p.omega),
        p_real: Some(p.total.re),
        p_imag: Some(p.total.im),
        beta_ac: Some(s.beta_ac),
        beta_ioni: Some(s.beta_ioni),
        gamma_i: Some(s.gamma_i),
        sigma_i: Some(s.sigma_i),
        flags: String::new(),
        extra: Vec::new(),
    };
    if p.state.energy() + p.omega >= 0.0 {
        row.add_flag(output::THRESHOLD_OPEN);
    }
    Ok(row)
}

fn single_row(state: &AtomicState, omega: f64, intensity: f64, basis: &RadialBasis) -> Result<ResultRow, Error> {
    let p = stark::dynamic_polarizability(state, omega, basis)?;
    row_from(&p, intensity)
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| ConfigError(format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Io(io::Error::other(e.to_string())))
}

fn scan_rows(cfg: &RunConfig, basis: &RadialBasis) -> Result<Vec<ResultRow>, CliError> {
    let grid = cfg.scan.expect("validated").points();
    let resonances = stark::resonance_frequencies(&cfg.state, basis, f64::INFINITY)?;
    let pool = thread_pool()?;
    let mut rows: Vec<ResultRow> = pool.install(|| {
        grid.par_iter()
            .map(|&omega| {
                if stark::near_resonance(omega, &resonances) {
                    let mut r = ResultRow::gap(omega, lambda_nm(omega), &[output::NEAR_RESONANCE_GAP]);
                    if cfg.state.energy() + omega >= 0.0 {
                        r.add_flag(output::THRESHOLD_OPEN);
                    }
                    return r;
                }
                single_row(&cfg.state, omega, cfg.intensity, basis)
                    .unwrap_or_else(|_| ResultRow::gap(omega, lambda_nm(omega), &[output::COMPUTE_ERROR]))
            })
            .collect()
    });
    for &res in &resonances {
        if let Some(k) = grid.iter().position(|&w| w > res) {
            if k > 0 {
                rows[k - 1].add_flag(output::RESONANCE_BRACKET);
                rows[k].add_flag(output::RESONANCE_BRACKET);
            }
        }
    }
    Ok(rows)
}

fn quantized_row(cfg: &RunConfig, basis: &RadialBasis) -> Result<ResultRow, CliError> {
    let omega = cfg.omega.expect("validated");
    let n = cfg.n_photons.expect("validated");
    let mode = FockMode::new(n, cfg.volume.expect("validated"), omega)?;
    let p = stark::dynamic_polarizability(&cfg.state, omega, basis)?;
    let mut row = row_from(&p, mode.matched_field()?.intensity())?;
    let deviation = if n == 0 {
        None
    } else {
        Some(quantized::classical_limit_deviation(&cfg.state, &mode, basis)?)
    };
    row.extra = vec![deviation];
    Ok(row)
}

fn oracle_row(cfg: &RunConfig, basis: &RadialBasis) -> Result<ResultRow, CliError> {
    let omega = cfg.omega.expect("validated");
    let p = stark::dynamic_polarizability(&cfg.state, omega, basis)?;
    let field = LaserField::from_intensity(omega, cfg.intensity)?.with_damping(cfg.damping)?;
    let predicted = stark::stark_shift(&p, &field)?.delta_e;
    let drive = DampedDriveConfig::new(field);
    let evo = tdse::propagate(&cfg.state, &drive, basis)?;
    for w in &evo.warnings {
        eprintln!("acstark: warning: {w}");
    }
    if let Some(path) = &cfg.dump_trace {
        evo.write_trace(BufWriter::new(File::create(path)?))?;
    }
    let mut row = row_from(&p, cfg.intensity)?;
    let deviation = if predicted.norm() > 0.0 {
        Some((evo.delta_e - predicted).norm() / predicted.norm())
    } else {
        None
    };
    row.extra = vec![
        Some(predicted.re),
        Some(predicted.im),
        Some(evo.delta_e.re),
        Some(evo.delta_e.im),
        deviation,
    ];
    Ok(row)
}
