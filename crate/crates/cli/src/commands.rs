//! The `scf`, `run`, `compress` and `verify` commands.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use tdhf_core::circuit::{circuit_unitary, compress_ybe, CircuitError};
use tdhf_core::integrals::{build_basis, IntegralSet};
use tdhf_core::linalg::max_abs_diff;
use tdhf_core::scf::{run_rhf, ScfError, ScfOptions, ScfResult};
use tdhf_core::simulator::SimError;
use tdhf_core::tdhf::{
    compare_trajectories, propagate, reference_propagate, MeanFieldFrame, TdhfError, Trajectory, TrajectoryComparison,
};

use crate::config::{ConfigError, RunConfig, SystemSource, PLOT_ROWS};
use crate::formats::{
    downsample, load_geometry, read_circuit, read_fcidump, write_circuit, write_state, write_trajectory, FormatError,
};
use crate::suites;

/// Widest circuit whose dense unitary `compress` will check.
pub const RESIDUAL_MAX_WIDTH: usize = 8;
/// Amplitudes at or below this magnitude are left out of state dumps.
pub const STATE_DUMP_THRESHOLD: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("SCF failed: {0}")]
    Scf(#[from] ScfError),
    #[error("{0}")]
    Tolerance(String),
    #[error("circuit rewrite failed: {0}")]
    Rewrite(#[from] CircuitError),
    #[error("dynamics failed: {0}")]
    Dynamics(TdhfError),
}

impl From<TdhfError> for CliError {
    fn from(e: TdhfError) -> Self {
        match e {
            TdhfError::Scf(e) => Self::Scf(e),
            TdhfError::Circuit(e) => Self::Rewrite(e),
            TdhfError::InvalidConfig(_) | TdhfError::InvalidPulse(_) | TdhfError::Simulator(SimError::TooWide(_)) => {
                Self::Usage(e.to_string())
            }
            e => Self::Dynamics(e),
        }
    }
}

impl CliError {
    /// 2 usage or parse, 3 SCF, 4 tolerance, 5 rewrite, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Format { .. } | Self::Io { .. } | Self::Config(_) => 2,
            Self::Scf(_) => 3,
            Self::Tolerance(_) => 4,
            Self::Rewrite(_) => 5,
            Self::Dynamics(_) => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn report_io(e: std::io::Error) -> CliError {
    CliError::Io { path: PathBuf::from("<stdout>"), source: e }
}

/// Integrals and electron count for the configured system.
pub fn load_system(cfg: &RunConfig) -> Result<(IntegralSet, usize), CliError> {
    let (ints, n_elec) = match &cfg.system {
        SystemSource::Basis { geometry, units, basis } => {
            let mol = load_geometry(&read(geometry)?, *units)
                .map_err(|source| CliError::Format { path: geometry.clone(), source })?;
            let basis_set = build_basis(&mol, *basis).map_err(|e| CliError::Usage(e.to_string()))?;
            (IntegralSet::compute(&mol, &basis_set), mol.nuclear_charge() as usize)
        }
        SystemSource::Fcidump(path) => {
            let f = read_fcidump(&read(path)?).map_err(|source| CliError::Format { path: path.clone(), source })?;
            (f.integrals, f.n_elec)
        }
    };
    Ok((ints, cfg.n_elec.unwrap_or(n_elec)))
}

fn solve(cfg: &RunConfig) -> Result<(IntegralSet, ScfResult), CliError> {
    let (ints, n_elec) = load_system(cfg)?;
    let scf = run_rhf(&ints, n_elec, &ScfOptions::default())?;
    log::info!("SCF converged in {} iterations, E = {:.12}", scf.iterations, scf.energy);
    Ok((ints, scf))
}

pub fn cmd_scf(cfg: &RunConfig, out: &mut dyn Write) -> Result<ScfResult, CliError> {
    let (_, scf) = solve(cfg)?;
    write_scf_report(&scf, out).map_err(report_io)?;
    Ok(scf)
}

fn write_scf_report(scf: &ScfResult, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "E_hf = {:.12} hartree", scf.energy)?;
    writeln!(out, "iterations = {}", scf.iterations)?;
    writeln!(out, "electrons = {}", scf.n_elec)?;
    writeln!(out, "orbital energies:")?;
    for (k, e) in scf.orbital_energies.iter().enumerate() {
        let tag = if k < scf.n_occupied() { "occ" } else { "vir" };
        writeln!(out, "  {:>3} {tag} {e:>18.12}", k + 1)?;
    }
    writeln!(out, "MO coefficients (one column per orbital):")?;
    for row in scf.coefficients.row_iter() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>16.10}")).collect();
        writeln!(out, "  {}", cells.join(" "))?;
    }
    Ok(())
}

/// What `run` produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub comparison: Option<TrajectoryComparison>,
    pub files: Vec<PathBuf>,
}

fn write_csv(traj: &Trajectory, path: &Path) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    write_trajectory(traj, BufWriter::new(file)).map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

/// Propagates, writes the trajectory and, as configured, the reference
/// trajectory, a plotting CSV and the final register.
pub fn cmd_run(cfg: &RunConfig, dump_state: Option<&Path>, out: &mut dyn Write) -> Result<RunOutcome, CliError> {
    let (ints, scf) = solve(cfg)?;
    let frame = MeanFieldFrame::new(&ints, &scf);
    log::info!(
        "{} spin orbitals, {} steps of dt = {}, mode {:?}",
        frame.n_spin_orbitals(),
        cfg.tdhf.n_steps(),
        cfg.tdhf.dt,
        cfg.tdhf.mode
    );
    let (trajectory, state) = propagate(&frame, &cfg.tdhf)?;
    let mut files = vec![cfg.output.clone()];
    write_csv(&trajectory, &cfg.output)?;
    writeln!(out, "wrote {} rows to {}", trajectory.len(), cfg.output.display()).map_err(report_io)?;

    if cfg.emit_plot_data {
        let path = cfg.sibling_output("plot");
        write_csv(&downsample(&trajectory, PLOT_ROWS), &path)?;
        files.push(path);
    }
    if let Some(path) = dump_state {
        fs::write(path, write_state(&state, STATE_DUMP_THRESHOLD)).map_err(io_err(path))?;
        files.push(path.to_path_buf());
    }

    let mut comparison = None;
    if cfg.reference {
        let reference = reference_propagate(&frame, &cfg.tdhf)?;
        let path = cfg.sibling_output("reference");
        write_csv(&reference, &path)?;
        files.push(path);
        let cmp = compare_trajectories(&trajectory, &reference)?;
        write_comparison(&cmp, cfg.tolerance, out).map_err(report_io)?;
        let passed = cmp.passes(cfg.tolerance);
        comparison = Some(cmp);
        if cfg.strict && !passed {
            return Err(CliError::Tolerance(format!("deviation from the reference exceeds {:e}", cfg.tolerance)));
        }
    }
    Ok(RunOutcome { trajectory, comparison, files })
}

fn write_comparison(cmp: &TrajectoryComparison, tolerance: f64, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "deviation from reference (max_abs, rms):")?;
    for c in cmp.columns.iter().filter(|c| c.name != "t") {
        writeln!(out, "  {:<18} {:.3e} {:.3e}", c.name, c.max_abs, c.rms)?;
    }
    let verdict = if cmp.passes(tolerance) { "within" } else { "EXCEEDS" };
    writeln!(out, "max deviation {:.3e} {verdict} tolerance {tolerance:.1e}", cmp.max_deviation())
}

/// Compresses a circuit file into the canonical triangle.
pub fn cmd_compress(input: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let c = read_circuit(&read(input)?).map_err(|source| CliError::Format { path: input.to_path_buf(), source })?;
    let z = compress_ybe(&c)?;
    writeln!(out, "blocks: {} -> {}", c.block_count(), z.block_count()).map_err(report_io)?;
    writeln!(out, "phases: {} -> {}", c.phase_count(), z.phase_count()).map_err(report_io)?;
    if c.n_qubits() <= RESIDUAL_MAX_WIDTH {
        let residual = max_abs_diff(&circuit_unitary(&z)?, &circuit_unitary(&c)?);
        writeln!(out, "residual: {residual:.3e}").map_err(report_io)?;
    }
    let text = write_circuit(&z);
    match output {
        Some(path) => fs::write(path, text).map_err(io_err(path))?,
        None => out.write_all(text.as_bytes()).map_err(report_io)?,
    }
    Ok(())
}

/// Runs the seeded self-check suites; fails with exit code 4 if any fails.
pub fn cmd_verify(samples: usize, seed: u64, out: &mut dyn Write) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let reports = suites::run_all(samples, seed);
    writeln!(out, "seed={seed}").map_err(report_io)?;
    for r in &reports {
        writeln!(out, "{r}").map_err(report_io)?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!("failed suites: {}", failed.join(", "))))
    }
}
