//! Direct synthesis of the canonical triangle from a mode transformation.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::linalg::{unitarity_defect, wrap_angle};
use crate::{CMatrix, Complex64};

use super::onebody::{b_matrix, push_phases};
use super::{Circuit, CircuitError, Gate};

const UNITARY_TOL: f64 = 1e-10;

/// Canonical circuit (`n(n-1)/2` blocks and `n` phases) whose position-basis
/// one-body image is `u`. Columns are eliminated right to left with
/// Givens-type blocks; the leftover diagonal is moved to the end.
pub fn resynthesize(u: &CMatrix, perm: &[usize]) -> Result<Circuit, CircuitError> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(CircuitError::DimensionMismatch { expected: n, got: u.ncols() });
    }
    let defect = unitarity_defect(u);
    if !(defect <= UNITARY_TOL) {
        return Err(CircuitError::NotUnitary(defect));
    }
    let i = Complex64::new(0.0, 1.0);
    let mut r = u.clone();
    // levels[m - 1][k]: block s_k of level m
    let mut levels: Vec<Vec<(f64, f64)>> = (1..n).map(|m| alloc::vec![(0.0, 0.0); m]).collect();
    for size in (2..=n).rev() {
        let col = size - 1;
        for j in 0..col {
            let (x0, x1) = (r[(j, col)], r[(j + 1, col)]);
            let theta = x0.norm().atan2(x1.norm());
            let phi = if x0.norm() > 0.0 && x1.norm() > 0.0 { (i * x0 / x1).arg() } else { 0.0 };
            let bd = b_matrix(theta, phi).adjoint();
            for c in 0..n {
                let (a, b) = (r[(j, c)], r[(j + 1, c)]);
                r[(j, c)] = bd[(0, 0)] * a + bd[(0, 1)] * b;
                r[(j + 1, c)] = bd[(1, 0)] * a + bd[(1, 1)] * b;
            }
            levels[col - 1][j] = (theta, phi);
        }
    }
    let lead: Vec<f64> = (0..n).map(|k| r[(k, k)].arg()).collect();
    let mut blocks = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for (m, level) in levels.iter().enumerate() {
        for k in (0..=m).rev() {
            let (theta, phi) = level[k];
            blocks.push(Gate::block(k, k + 1, theta, phi));
        }
    }
    push_phases(&mut blocks, &lead)?;
    let phases = lead.iter().enumerate().map(|(qubit, &phi)| Gate::Phase { qubit, phi: wrap_angle(phi) });
    Circuit::from_gates(n, blocks.into_iter().chain(phases))?.with_labels((0..n).collect(), perm.to_vec())
}
