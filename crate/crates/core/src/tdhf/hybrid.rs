use alloc::vec::Vec;

use crate::circuit::{trotter_step, Circuit, Compressor, Direction, TrotterOptions};
use crate::simulator::Statevector;
use crate::CMatrix;

use super::{make_row, spin_block, MeanFieldFrame, MeasurementMode, TdhfConfig, TdhfError, Trajectory};

/// Register state plus the bookkeeping carried between steps.
#[derive(Debug, Clone)]
pub struct HybridPropagator<'a> {
    frame: &'a MeanFieldFrame,
    config: TdhfConfig,
    state: Statevector,
    labels: Vec<usize>,
    direction: Direction,
    /// Everything applied so far, in canonical form, when compressing.
    history: Option<Compressor>,
    steps: usize,
}

/// Diagnostics for one propagation step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    /// Two-qubit gates in the circuit that was executed.
    pub blocks: usize,
    pub phases: usize,
    /// Two-qubit gates emitted for this step before any compression.
    pub step_blocks: usize,
}

impl<'a> HybridPropagator<'a> {
    /// Starts from the Hartree–Fock determinant.
    pub fn new(frame: &'a MeanFieldFrame, config: TdhfConfig) -> Result<Self, TdhfError> {
        config.validate()?;
        let n = frame.n_spin_orbitals();
        let state = Statevector::init_state(n, &frame.hf_wires())?;
        Ok(Self {
            frame,
            config,
            state,
            labels: (0..n).collect(),
            direction: Direction::Forward,
            history: config.compress.then(|| Compressor::new(n)),
            steps: 0,
        })
    }

    pub fn state(&self) -> &Statevector {
        &self.state
    }

    /// Current wire -> spin-orbital labelling.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Spin-orbital occupations in label order.
    pub fn spin_occupations(&self) -> Result<Vec<f64>, TdhfError> {
        if self.config.shots > 0 {
            let seed = self.config.seed.wrapping_add(self.steps as u64);
            let z = self.state.sample_z(self.config.shots, seed)?;
            let mut occ = alloc::vec![0.0; z.len()];
            for (wire, &label) in self.labels.iter().enumerate() {
                occ[label] = (1.0 - z[wire]) / 2.0;
            }
            return Ok(occ);
        }
        Ok(self.state.occupations(&self.labels)?)
    }

    /// Per-spin density as seen through the configured measurement.
    pub fn measure(&self) -> Result<(CMatrix, Vec<f64>), TdhfError> {
        let m = self.frame.n_spatial();
        match self.config.mode {
            MeasurementMode::ZOnly => {
                let occ = self.spin_occupations()?;
                let d = CMatrix::from_fn(
                    m,
                    m,
                    |p, q| if p == q { (0.5 * (occ[p] + occ[m + p])).into() } else { 0.0.into() },
                );
                Ok((d, occ))
            }
            MeasurementMode::FullRdm => {
                let rho = self.state.one_rdm(&self.labels)?;
                // D = rho^T, averaged over the two spin blocks
                let d = CMatrix::from_fn(m, m, |p, q| (rho[(q, p)] + rho[(m + q, m + p)]) * 0.5);
                let occ = (0..2 * m).map(|p| rho[(p, p)].re).collect();
                Ok((d, occ))
            }
        }
    }

    /// Advances from `t` to `t + dt` using the density `d` measured at `t`.
    pub fn step(&mut self, t: f64, d: &CMatrix) -> Result<StepReport, TdhfError> {
        let e_field = self.config.field_for_step(t);
        let g = spin_block(&self.frame.evaluate(d, e_field, &self.config.pulse)?.g_mo);
        let opts = TrotterOptions { convention: self.config.convention, direction: self.direction };
        let circuit = trotter_step(&g, self.config.dt, &self.labels, opts)?;
        let step_blocks = circuit.block_count();
        let executed = match &mut self.history {
            Some(history) => {
                history.absorb_circuit(&circuit)?;
                let canonical = history.to_circuit();
                self.state = Statevector::init_state(self.frame.n_spin_orbitals(), &self.frame.hf_wires())?;
                self.state.run_circuit(&canonical)?;
                canonical
            }
            None => {
                self.state.run_circuit(&circuit)?;
                circuit.clone()
            }
        };
        self.labels = circuit.permutation().to_vec();
        self.direction = self.direction.flipped();
        self.steps += 1;
        Ok(StepReport { blocks: executed.block_count(), phases: executed.phase_count(), step_blocks })
    }

    /// Canonical circuit of the whole run so far, when compressing.
    pub fn compressed_history(&self) -> Option<Circuit> {
        self.history.as_ref().map(Compressor::to_circuit)
    }
}

/// Runs the measure/rebuild/propagate loop from `t = 0` to `t_final`.
pub fn run_tdhf(frame: &MeanFieldFrame, config: &TdhfConfig) -> Result<Trajectory, TdhfError> {
    propagate(frame, config).map(|(traj, _)| traj)
}

/// [`run_tdhf`], also returning the register at `t_final`.
pub fn propagate(frame: &MeanFieldFrame, config: &TdhfConfig) -> Result<(Trajectory, Statevector), TdhfError> {
    let mut prop = HybridPropagator::new(frame, *config)?;
    let n_steps = config.n_steps();
    let mut traj = Trajectory { rows: Vec::with_capacity(n_steps + 1) };
    for k in 0..=n_steps {
        let t = k as f64 * config.dt;
        let (d, occ) = prop.measure()?;
        traj.rows.push(make_row(frame, config, t, &d, occ, prop.state().norm())?);
        if k < n_steps {
            prop.step(t, &d)?;
        }
        if k % 500 == 0 {
            log::debug!("t={t:.3} E={:.10}", traj.rows[k].energy);
        }
    }
    Ok((traj, prop.state))
}
