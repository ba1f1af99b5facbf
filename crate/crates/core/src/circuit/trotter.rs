//! One Trotter step of a one-body Hamiltonian as a swap network.

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::linalg::{hermiticity_defect, to_complex, wrap_angle};
use crate::{CMatrix, Complex64, RMatrix};

use super::onebody::decompose_u2;
use super::schedule::brickwork_rows;
use super::{Circuit, CircuitError, Gate, SwapConvention};

/// Row order inside a step. Alternating directions between consecutive
/// steps makes each pair of steps a symmetric product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// Rows first to last, then the diagonal phases.
    #[default]
    Forward,
    /// Diagonal phases, then rows last to first.
    Backward,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrotterOptions {
    pub convention: SwapConvention,
    pub direction: Direction,
}

const HERMITIAN_TOL: f64 = 1e-10;

/// `exp(-i dt [[0, g], [conj g, 0]])` followed by the single-particle swap.
fn swapped_hop(g: Complex64, dt: f64, swap_phase: Complex64) -> CMatrix {
    let r = g.norm();
    let (s, c) = (r * dt).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let (off_pq, off_qp) = if r > 0.0 {
        (-i * g * (s / r), -i * g.conj() * (s / r))
    } else {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    };
    // rows swapped by the exchange
    CMatrix::from_row_slice(
        2,
        2,
        &[
            off_qp * swap_phase,
            Complex64::new(c, 0.0) * swap_phase,
            Complex64::new(c, 0.0) * swap_phase,
            off_pq * swap_phase,
        ],
    )
}

/// Brickwork of swap-merged hopping blocks for Hermitian `g` (label basis),
/// with the diagonal as trailing phase gates. Wire `k` starts with label
/// `perm_in[k]`; the returned circuit ends with the reversed labelling.
pub fn trotter_step(g: &CMatrix, dt: f64, perm_in: &[usize], opts: TrotterOptions) -> Result<Circuit, CircuitError> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(CircuitError::DimensionMismatch { expected: n, got: g.ncols() });
    }
    if perm_in.len() != n {
        return Err(CircuitError::DimensionMismatch { expected: n, got: perm_in.len() });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CircuitError::InvalidTimeStep(dt));
    }
    let defect = hermiticity_defect(g);
    if !(defect <= HERMITIAN_TOL) {
        return Err(CircuitError::NotHermitian(defect));
    }
    let swap_phase = match opts.convention {
        SwapConvention::Fermionic => Complex64::new(1.0, 0.0),
        SwapConvention::ISwap => Complex64::new(0.0, 1.0),
    };

    let mut labels = perm_in.to_vec();
    let mut lambda = vec![0.0; n];
    let mut rows = brickwork_rows(n);
    let add_diagonal = |lambda: &mut [f64], labels: &[usize]| {
        for (k, &p) in labels.iter().enumerate() {
            // exp(-i dt G_pp n_p) = P(-dt G_pp)
            lambda[k] -= dt * g[(p, p)].re;
        }
    };
    if opts.direction == Direction::Backward {
        add_diagonal(&mut lambda, &labels);
        rows.reverse();
    }

    let mut gates = Vec::with_capacity(n * (n - 1) / 2 + n);
    for row in &rows {
        for &(k, l) in row {
            let (p, q) = (labels[k], labels[l]);
            let f = decompose_u2(&swapped_hop(g[(p, q)], dt, swap_phase));
            gates.push(Gate::block(k, l, f.theta, wrap_angle(f.phi - (lambda[k] - lambda[l]))));
            lambda[k] += f.alpha[0];
            lambda[l] += f.alpha[1];
            labels.swap(k, l);
        }
    }
    if opts.direction == Direction::Forward {
        add_diagonal(&mut lambda, &labels);
    }
    gates.extend(lambda.iter().enumerate().map(|(qubit, &phi)| Gate::Phase { qubit, phi: wrap_angle(phi) }));

    Circuit::from_gates(n, gates)?.with_labels(perm_in.to_vec(), labels)
}

/// Real-symmetric convenience wrapper.
pub fn trotter_step_real(
    g: &RMatrix,
    dt: f64,
    perm_in: &[usize],
    opts: TrotterOptions,
) -> Result<Circuit, CircuitError> {
    let asym = (g - g.transpose()).amax();
    if asym > HERMITIAN_TOL {
        return Err(CircuitError::NotHermitian(asym));
    }
    trotter_step(&to_complex(g), dt, perm_in, opts)
}
