use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::propagator;
use crate::CMatrix;

use super::{make_row, MeanFieldFrame, MeasurementMode, TdhfConfig, TdhfError, Trajectory};

/// Exact matrix propagation `D -> u D u^dag`, `u = exp(-i dt G)`, on the
/// same grid and with the same measurement model as [`super::run_tdhf`].
pub fn reference_propagate(frame: &MeanFieldFrame, config: &TdhfConfig) -> Result<Trajectory, TdhfError> {
    config.validate()?;
    let m = frame.n_spatial();
    let n_steps = config.n_steps();
    let mut d = frame.ground_density();
    let mut traj = Trajectory { rows: Vec::with_capacity(n_steps + 1) };
    for k in 0..=n_steps {
        let t = k as f64 * config.dt;
        let seen = match config.mode {
            MeasurementMode::FullRdm => d.clone(),
            MeasurementMode::ZOnly => CMatrix::from_diagonal(&d.diagonal()),
        };
        let occ: Vec<f64> = (0..2 * m).map(|p| d[(p % m, p % m)].re).collect();
        traj.rows.push(make_row(frame, config, t, &seen, occ, 1.0)?);
        if k < n_steps {
            let g = frame.evaluate(&seen, config.field_for_step(t), &config.pulse)?.g_mo;
            let u = propagator(&g, config.dt);
            d = &u * d * u.adjoint();
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnDeviation {
    pub name: String,
    pub max_abs: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryComparison {
    pub columns: Vec<ColumnDeviation>,
}

impl TrajectoryComparison {
    /// Largest deviation over all columns except time.
    pub fn max_deviation(&self) -> f64 {
        self.columns.iter().skip(1).map(|c| c.max_abs).fold(0.0, f64::max)
    }

    /// Largest deviation over the named columns.
    pub fn max_over(&self, names: &[&str]) -> f64 {
        self.columns.iter().filter(|c| names.contains(&c.name.as_str())).map(|c| c.max_abs).fold(0.0, f64::max)
    }

    /// Largest deviation over occupation columns.
    pub fn max_occupation_deviation(&self) -> f64 {
        self.columns.iter().filter(|c| c.name.starts_with("occ_")).map(|c| c.max_abs).fold(0.0, f64::max)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_deviation() <= tolerance
    }
}

/// Column-wise deviations between two trajectories on the same grid.
pub fn compare_trajectories(a: &Trajectory, b: &Trajectory) -> Result<TrajectoryComparison, TdhfError> {
    if a.len() != b.len() {
        return Err(TdhfError::GridMismatch);
    }
    let names = a.column_names();
    if names != b.column_names() {
        return Err(TdhfError::GridMismatch);
    }
    let mut max_abs = alloc::vec![0.0f64; names.len()];
    let mut sum_sq = alloc::vec![0.0f64; names.len()];
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        if (ra.t - rb.t).abs() > 1e-9 * (1.0 + ra.t.abs()) {
            return Err(TdhfError::GridMismatch);
        }
        for (j, (x, y)) in ra.values().iter().zip(rb.values()).enumerate() {
            let e = (x - y).abs();
            max_abs[j] = max_abs[j].max(e);
            sum_sq[j] += e * e;
        }
    }
    let n = a.len().max(1) as f64;
    let columns = names
        .into_iter()
        .zip(max_abs.into_iter().zip(sum_sq))
        .map(|(name, (max_abs, s))| ColumnDeviation { name, max_abs, rms: libm::sqrt(s / n) })
        .collect();
    Ok(TrajectoryComparison { columns })
}
