//! Real-time mean-field dynamics under a laser pulse.
//!
//! Everything is expressed in the fixed molecular-orbital frame of the
//! ground state. Spin orbitals are ordered `[alpha_1..alpha_M, beta_1..beta_M]`
//! and the closed-shell Hartree–Fock determinant occupies `alpha_1..alpha_k`
//! and `beta_1..beta_k`.
//!
//! Densities are the orbital-basis matrices `D_pq = <a_q^dag a_p>` per spin,
//! so a one-body propagator `u` acts as `D -> u D u^dag` and the atomic-orbital
//! density is `P = C (2D) C^T`.

mod hybrid;
mod reference;

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

pub use hybrid::{propagate, run_tdhf, HybridPropagator, StepReport};
pub use reference::{compare_trajectories, reference_propagate, ColumnDeviation, TrajectoryComparison};

use crate::circuit::{CircuitError, SwapConvention};
use crate::integrals::{EriTensor, IntegralSet};
use crate::linalg::{hermiticity_defect, to_complex};
use crate::scf::{fock_from_density_complex, total_energy_complex, ScfError, ScfResult};
use crate::simulator::SimError;
use crate::{CMatrix, Complex64, RMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TdhfError {
    #[error("invalid pulse: {0}")]
    InvalidPulse(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("density has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("density is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("non-finite energy at t = {0}")]
    NonFinite(f64),
    #[error("trajectories are on different time grids")]
    GridMismatch,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Simulator(#[from] SimError),
    #[error(transparent)]
    Scf(#[from] ScfError),
}

const DENSITY_HERMITIAN_TOL: f64 = 1e-10;

/// Three-cycle ramp/plateau/ramp pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPulse {
    pub e_max: f64,
    pub omega: f64,
    pub polarization: [f64; 3],
}

impl FieldPulse {
    pub fn new(e_max: f64, omega: f64, polarization: [f64; 3]) -> Result<Self, TdhfError> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(TdhfError::InvalidPulse("omega must be positive"));
        }
        if !e_max.is_finite() {
            return Err(TdhfError::InvalidPulse("field amplitude must be finite"));
        }
        let norm = polarization.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(TdhfError::InvalidPulse("polarization must be a unit vector"));
        }
        Ok(Self { e_max, omega, polarization })
    }

    /// End of the envelope, `6 pi / omega`.
    pub fn duration(&self) -> f64 {
        6.0 * PI / self.omega
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        field_amplitude(t, self)
    }
}

impl Default for FieldPulse {
    fn default() -> Self {
        Self { e_max: 0.07, omega: 0.10, polarization: [0.0, 0.0, 1.0] }
    }
}

/// Field strength at time `t`.
pub fn field_amplitude(t: f64, pulse: &FieldPulse) -> f64 {
    let wt = pulse.omega * t;
    let cycles = wt / (2.0 * PI);
    let envelope = if !(0.0..=3.0).contains(&cycles) {
        0.0
    } else if cycles <= 1.0 {
        cycles
    } else if cycles <= 2.0 {
        1.0
    } else {
        3.0 - cycles
    };
    envelope * libm::sin(wt) * pulse.e_max
}

/// Ground-state orbitals and integrals that define the dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldFrame {
    pub coefficients: RMatrix,
    pub hcore: RMatrix,
    pub eri: EriTensor,
    pub dipole: [RMatrix; 3],
    pub nuclear_repulsion: f64,
    pub n_occupied: usize,
    pub hf_energy: f64,
    pub orbital_energies: Vec<f64>,
}

impl MeanFieldFrame {
    pub fn new(ints: &IntegralSet, scf: &ScfResult) -> Self {
        Self {
            coefficients: scf.coefficients.clone(),
            hcore: ints.hcore.clone(),
            eri: ints.eri.clone(),
            dipole: ints.dipole.clone(),
            nuclear_repulsion: ints.nuclear_repulsion,
            n_occupied: scf.n_occupied(),
            hf_energy: scf.energy,
            orbital_energies: scf.orbital_energies.clone(),
        }
    }

    /// Spatial orbital count `M`.
    pub fn n_spatial(&self) -> usize {
        self.coefficients.ncols()
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial()
    }

    pub fn n_electrons(&self) -> usize {
        2 * self.n_occupied
    }

    /// Wires occupied by the Hartree–Fock determinant.
    pub fn hf_wires(&self) -> Vec<usize> {
        let m = self.n_spatial();
        (0..self.n_occupied).chain(m..m + self.n_occupied).collect()
    }

    /// Per-spin ground-state density `diag(1, .., 1, 0, .., 0)`.
    pub fn ground_density(&self) -> CMatrix {
        let m = self.n_spatial();
        CMatrix::from_fn(m, m, |p, q| if p == q && p < self.n_occupied { 1.0.into() } else { 0.0.into() })
    }

    fn check_density(&self, d: &CMatrix) -> Result<(), TdhfError> {
        let m = self.n_spatial();
        if d.nrows() != m || d.ncols() != m {
            return Err(TdhfError::DimensionMismatch { expected: m, got: d.nrows() });
        }
        let defect = hermiticity_defect(d);
        if !(defect <= DENSITY_HERMITIAN_TOL) {
            return Err(TdhfError::NotHermitian(defect));
        }
        Ok(())
    }

    /// `P = C (2D) C^T`.
    pub fn ao_density(&self, d: &CMatrix) -> CMatrix {
        let c = to_complex(&self.coefficients);
        &c * (d * Complex64::new(2.0, 0.0)) * c.transpose()
    }

    /// Dipole integrals projected on the polarization.
    pub fn polarized_dipole(&self, polarization: &[f64; 3]) -> RMatrix {
        let m = self.hcore.nrows();
        let mut out = RMatrix::zeros(m, m);
        for (d, &e) in self.dipole.iter().zip(polarization) {
            out += d * e;
        }
        out
    }

    /// Evaluates the mean-field quantities for per-spin density `d`.
    pub fn evaluate(&self, d: &CMatrix, e_field: f64, pulse: &FieldPulse) -> Result<MeanField, TdhfError> {
        self.check_density(d)?;
        let p = self.ao_density(d);
        let fock = fock_from_density_complex(&self.hcore, &self.eri, &p)?;
        let energy = total_energy_complex(&p, &self.hcore, &fock, self.nuclear_repulsion);
        let dpol = self.polarized_dipole(&pulse.polarization);
        let field_energy = e_field * p.iter().zip(dpol.iter()).map(|(a, b)| a.re * b).sum::<f64>();
        let c = to_complex(&self.coefficients);
        let coupled = fock + to_complex(&dpol) * Complex64::new(e_field, 0.0);
        let mut g = c.transpose() * coupled * &c;
        // symmetrize away rounding
        g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(MeanField { g_mo: g, energy, energy_with_field: energy + field_energy })
    }
}

/// Mean-field Hamiltonian in the orbital frame and the matching energies.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanField {
    pub g_mo: CMatrix,
    pub energy: f64,
    pub energy_with_field: f64,
}

/// Spin-orbital Hamiltonian `blockdiag(G, G)` for per-spin density `d`.
pub fn assemble_g(frame: &MeanFieldFrame, d: &CMatrix, e_field: f64, pulse: &FieldPulse) -> Result<CMatrix, TdhfError> {
    Ok(spin_block(&frame.evaluate(d, e_field, pulse)?.g_mo))
}

pub(crate) fn spin_block(g: &CMatrix) -> CMatrix {
    let m = g.nrows();
    let mut out = CMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, 0), (m, m)).copy_from(g);
    out.view_mut((m, m), (m, m)).copy_from(g);
    out
}

/// What the hybrid loop reads back from the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasurementMode {
    /// Occupations only; the density is taken as diagonal.
    ZOnly,
    /// Full one-particle density matrix.
    #[default]
    FullRdm,
}

/// Time at which the field enters a step's Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldEvaluation {
    #[default]
    Start,
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdhfConfig {
    pub pulse: FieldPulse,
    pub dt: f64,
    pub t_final: f64,
    pub mode: MeasurementMode,
    pub compress: bool,
    pub field_evaluation: FieldEvaluation,
    /// `0` means exact expectations.
    pub shots: usize,
    pub seed: u64,
    pub convention: SwapConvention,
}

impl Default for TdhfConfig {
    fn default() -> Self {
        let pulse = FieldPulse::default();
        Self {
            pulse,
            dt: 0.05,
            t_final: pulse.duration(),
            mode: MeasurementMode::FullRdm,
            compress: true,
            field_evaluation: FieldEvaluation::Start,
            shots: 0,
            seed: 0,
            convention: SwapConvention::Fermionic,
        }
    }
}

impl TdhfConfig {
    pub fn validate(&self) -> Result<(), TdhfError> {
        FieldPulse::new(self.pulse.e_max, self.pulse.omega, self.pulse.polarization)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(TdhfError::InvalidConfig("dt must be positive"));
        }
        if !(self.t_final >= self.dt && self.t_final.is_finite()) {
            return Err(TdhfError::InvalidConfig("t_final must be at least dt"));
        }
        if self.shots > 0 && self.mode != MeasurementMode::ZOnly {
            return Err(TdhfError::InvalidConfig("finite shots need z-only measurement"));
        }
        Ok(())
    }

    /// `round(t_final / dt)`.
    pub fn n_steps(&self) -> usize {
        libm::round(self.t_final / self.dt) as usize
    }

    pub(crate) fn field_for_step(&self, t: f64) -> f64 {
        match self.field_evaluation {
            FieldEvaluation::Start => self.pulse.amplitude(t),
            FieldEvaluation::Midpoint => self.pulse.amplitude(t + 0.5 * self.dt),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub e_field: f64,
    pub energy: f64,
    pub energy_with_field: f64,
    pub norm: f64,
    /// Spin-orbital occupations, alpha block then beta block.
    pub occupations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column names in output order.
    pub fn column_names(&self) -> Vec<String> {
        let k = self.rows.first().map_or(0, |r| r.occupations.len());
        let mut names: Vec<String> =
            ["t", "e_field", "energy", "energy_with_field", "norm"].iter().map(|s| String::from(*s)).collect();
        names.extend((1..=k).map(|i| alloc::format!("occ_{i}")));
        names
    }
}

impl TrajectoryRow {
    /// Values in the order of [`Trajectory::column_names`].
    pub fn values(&self) -> Vec<f64> {
        let mut v = alloc::vec![self.t, self.e_field, self.energy, self.energy_with_field, self.norm];
        v.extend_from_slice(&self.occupations);
        v
    }
}

pub(crate) fn make_row(
    frame: &MeanFieldFrame,
    cfg: &TdhfConfig,
    t: f64,
    d: &CMatrix,
    occupations: Vec<f64>,
    norm: f64,
) -> Result<TrajectoryRow, TdhfError> {
    let e_field = cfg.pulse.amplitude(t);
    let mf = frame.evaluate(d, e_field, &cfg.pulse)?;
    if !(mf.energy.is_finite() && mf.energy_with_field.is_finite()) {
        return Err(TdhfError::NonFinite(t));
    }
    Ok(TrajectoryRow { t, e_field, energy: mf.energy, energy_with_field: mf.energy_with_field, norm, occupations })
}
