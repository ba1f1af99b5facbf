//! Restricted closed-shell Hartree–Fock.

use alloc::vec::Vec;

use crate::integrals::{EriTensor, IntegralSet};
use crate::linalg::{inverse_sqrt_spd, sorted_symmetric_eigen};
use crate::{CMatrix, Complex64, RMatrix};

/// Overlap eigenvalues below this signal linear dependence.
pub const LINEAR_DEPENDENCE_THRESHOLD: f64 = 1e-10;
/// HOMO/LUMO gaps below this are reported as degenerate.
pub const DEGENERACY_WARNING: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScfError {
    #[error("overlap matrix is numerically singular (smallest eigenvalue {0:e})")]
    LinearDependence(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("closed-shell solver needs an even electron count, got {0}")]
    OddElectronCount(usize),
    #[error("{n_elec} electrons do not fit into {n_basis} spatial orbitals")]
    TooManyElectrons { n_elec: usize, n_basis: usize },
    #[error("no convergence after {iterations} iterations (dE={last_de:e}, dP={last_dp:e})")]
    NotConverged { iterations: usize, last_de: f64, last_dp: f64 },
    #[error("energy became non-finite at iteration {0}")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfOptions {
    pub max_iter: usize,
    pub e_tol: f64,
    pub p_tol: f64,
    /// Fraction of the previous density kept while damping is active.
    pub damping: f64,
    pub damping_iters: usize,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self { max_iter: 200, e_tol: 1e-10, p_tol: 1e-8, damping: 0.3, damping_iters: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScfResult {
    /// AO→MO coefficients, one MO per column, ascending orbital energy.
    pub coefficients: RMatrix,
    pub orbital_energies: Vec<f64>,
    /// Spatial AO density `2 C_occ C_occ^T`.
    pub density: RMatrix,
    pub fock: RMatrix,
    pub energy: f64,
    pub n_elec: usize,
    pub iterations: usize,
    /// Energy of every iterate, starting from the core guess.
    pub energy_history: Vec<f64>,
}

impl ScfResult {
    pub fn n_occupied(&self) -> usize {
        self.n_elec / 2
    }
}

/// Symmetric orthogonaliser `S^{-1/2}`.
pub fn orthogonalizer(s: &RMatrix) -> Result<RMatrix, ScfError> {
    if !s.is_square() {
        return Err(ScfError::DimensionMismatch { expected: s.nrows(), got: s.ncols() });
    }
    inverse_sqrt_spd(s, LINEAR_DEPENDENCE_THRESHOLD).map_err(ScfError::LinearDependence)
}

fn check_dims(hcore: &RMatrix, eri: &EriTensor, n: usize) -> Result<(), ScfError> {
    let m = hcore.nrows();
    for got in [hcore.ncols(), eri.dim(), n] {
        if got != m {
            return Err(ScfError::DimensionMismatch { expected: m, got });
        }
    }
    Ok(())
}

/// `F_pq = h_pq + sum_rs P_rs [(pq|sr) - 1/2 (pr|sq)]`.
pub fn fock_from_density(hcore: &RMatrix, eri: &EriTensor, density: &RMatrix) -> Result<RMatrix, ScfError> {
    check_dims(hcore, eri, density.nrows())?;
    let m = hcore.nrows();
    let mut f = hcore.clone();
    for p in 0..m {
        for q in 0..m {
            let mut g = 0.0;
            for r in 0..m {
                for s in 0..m {
                    g += density[(r, s)] * (eri.get(p, q, s, r) - 0.5 * eri.get(p, r, s, q));
                }
            }
            f[(p, q)] += g;
        }
    }
    Ok(f)
}

/// Complex-density variant used by the dynamics; Hermitian `P` gives Hermitian `F`.
pub fn fock_from_density_complex(hcore: &RMatrix, eri: &EriTensor, density: &CMatrix) -> Result<CMatrix, ScfError> {
    check_dims(hcore, eri, density.nrows())?;
    let m = hcore.nrows();
    let mut f = crate::linalg::to_complex(hcore);
    for p in 0..m {
        for q in 0..m {
            let mut g = Complex64::new(0.0, 0.0);
            for r in 0..m {
                for s in 0..m {
                    g += density[(r, s)] * (eri.get(p, q, s, r) - 0.5 * eri.get(p, r, s, q));
                }
            }
            f[(p, q)] += g;
        }
    }
    Ok(f)
}

/// `1/2 sum_pq P_pq (h_pq + F_pq) + e_nuc`.
pub fn total_energy(density: &RMatrix, hcore: &RMatrix, fock: &RMatrix, e_nuc: f64) -> f64 {
    0.5 * density.zip_map(&(hcore + fock), |p, x| p * x).sum() + e_nuc
}

/// Real part of `1/2 Tr[P (h + F)] + e_nuc` for Hermitian complex `P`, `F`.
pub fn total_energy_complex(density: &CMatrix, hcore: &RMatrix, fock: &CMatrix, e_nuc: f64) -> f64 {
    let m = density.nrows();
    let mut acc = 0.0;
    for p in 0..m {
        for q in 0..m {
            // Tr[P A] = sum_pq P_pq A_qp
            acc += (density[(p, q)] * (fock[(q, p)] + hcore[(q, p)])).re;
        }
    }
    0.5 * acc + e_nuc
}

struct Diagonalised {
    coefficients: RMatrix,
    energies: Vec<f64>,
    density: RMatrix,
}

fn diagonalise(f: &RMatrix, x: &RMatrix, n_occ: usize) -> Diagonalised {
    let fp = x.transpose() * f * x;
    let (energies, cp) = sorted_symmetric_eigen(&fp);
    let mut coefficients = x * cp;
    // fix the sign of each MO: largest-magnitude AO coefficient positive
    for k in 0..coefficients.ncols() {
        let col = coefficients.column(k);
        let pivot = col.iter().copied().fold(0.0_f64, |a, b| if b.abs() > a.abs() + 1e-12 { b } else { a });
        if pivot < 0.0 {
            coefficients.column_mut(k).neg_mut();
        }
    }
    let occ = coefficients.columns(0, n_occ);
    let density = (occ * occ.transpose()) * 2.0;
    if n_occ > 0 && n_occ < energies.len() && (energies[n_occ] - energies[n_occ - 1]).abs() < DEGENERACY_WARNING {
        log::warn!("degenerate HOMO/LUMO: {} vs {}", energies[n_occ - 1], energies[n_occ]);
    }
    Diagonalised { coefficients, energies, density }
}

/// Fixed-point RHF starting from the core-Hamiltonian guess.
pub fn run_rhf(ints: &IntegralSet, n_elec: usize, opts: &ScfOptions) -> Result<ScfResult, ScfError> {
    let m = ints.n_basis();
    if !n_elec.is_multiple_of(2) {
        return Err(ScfError::OddElectronCount(n_elec));
    }
    if n_elec > 2 * m {
        return Err(ScfError::TooManyElectrons { n_elec, n_basis: m });
    }
    let n_occ = n_elec / 2;
    let x = orthogonalizer(&ints.overlap)?;
    let mut density = diagonalise(&ints.hcore, &x, n_occ).density;
    let mut history = Vec::new();
    let mut prev_energy = f64::NAN;
    let (mut last_de, mut last_dp) = (f64::INFINITY, f64::INFINITY);

    for iter in 1..=opts.max_iter {
        let fock = fock_from_density(&ints.hcore, &ints.eri, &density)?;
        let energy = total_energy(&density, &ints.hcore, &fock, ints.nuclear_repulsion);
        if !energy.is_finite() {
            return Err(ScfError::NonFinite(iter));
        }
        history.push(energy);
        let built = diagonalise(&fock, &x, n_occ).density;
        let next = if iter <= opts.damping_iters && opts.damping > 0.0 {
            &built * (1.0 - opts.damping) + &density * opts.damping
        } else {
            built
        };
        last_de = if prev_energy.is_nan() { f64::INFINITY } else { energy - prev_energy };
        last_dp = (&next - &density).amax();
        log::debug!("iter={} E={:.12} dE={:.3e} dP={:.3e}", iter, energy, last_de, last_dp);
        prev_energy = energy;
        density = next;
        if last_de.abs() < opts.e_tol && last_dp < opts.p_tol {
            let fock = fock_from_density(&ints.hcore, &ints.eri, &density)?;
            let d = diagonalise(&fock, &x, n_occ);
            let fock = fock_from_density(&ints.hcore, &ints.eri, &d.density)?;
            let energy = total_energy(&d.density, &ints.hcore, &fock, ints.nuclear_repulsion);
            return Ok(ScfResult {
                coefficients: d.coefficients,
                orbital_energies: d.energies,
                density: d.density,
                fock,
                energy,
                n_elec,
                iterations: iter,
                energy_history: history,
            });
        }
    }
    Err(ScfError::NotConverged { iterations: opts.max_iter, last_de, last_dp })
}
