//! Gate-level circuits over a linear qubit chain.
//!
//! Wire `0` is the most significant bit of a basis index. Wire positions
//! carry orbital labels that move as swap-merged blocks exchange modes; a
//! circuit records the labelling before and after it runs.

mod compress;
mod gate;
mod onebody;
mod resynth;
mod schedule;
mod trotter;
mod ybe;

use alloc::vec::Vec;

pub use compress::{compress_ybe, is_canonical, merge_blocks, Compressor};
pub use gate::{cx, fswap, match_block, phase, rx, rz, Gate, SwapConvention, HOPPING_ANGLE_SCALE, SWAP_ANGLE_OFFSET};
pub use onebody::{decompose_u2, one_body_of_circuit, push_phases, U2Factors};
pub use resynth::resynthesize;
pub use schedule::{pair_schedule, PairSchedule};
pub use trotter::{trotter_step, trotter_step_real, Direction, TrotterOptions};
pub use ybe::{ybe_reflect, ybe_reflect_conserving, ReflectedTriple, YBE_TOLERANCE};

use crate::{CMatrix, Complex64};

/// Width cap for dense circuit unitaries.
pub const MAX_DENSE_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitError {
    #[error("wire {wire} out of range for {n_qubits} qubits")]
    WireOutOfRange { wire: usize, n_qubits: usize },
    #[error("two-qubit gate on a repeated wire {0}")]
    RepeatedWire(usize),
    #[error("{0} qubits exceed the dense cap of {MAX_DENSE_QUBITS}")]
    TooWide(usize),
    #[error("gate {0} is not a particle-conserving free-fermion gate")]
    NotFreeFermion(usize),
    #[error("gate {0} acts on non-adjacent wires")]
    NotAdjacent(usize),
    #[error("blocks act on different wire pairs")]
    WireMismatch,
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid labelling: {0}")]
    InvalidPermutation(&'static str),
    #[error("time step must be positive and finite, got {0}")]
    InvalidTimeStep(f64),
    #[error("reflection failed: best residual {0:e}")]
    ReflectionFailed(f64),
    #[error("reflection needs a (q1,q2),(q2,q3),(q1,q2) pattern on adjacent wires")]
    BadTriple,
}

/// Ordered gate list plus the wire-to-label maps at entry and exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    input_labels: Vec<usize>,
    labels: Vec<usize>,
}

pub(crate) fn identity_labels(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn check_permutation(p: &[usize], n: usize) -> Result<(), CircuitError> {
    if p.len() != n {
        return Err(CircuitError::InvalidPermutation("length differs from width"));
    }
    let mut seen = alloc::vec![false; n];
    for &x in p {
        if x >= n || core::mem::replace(&mut seen[x], true) {
            return Err(CircuitError::InvalidPermutation("not a bijection"));
        }
    }
    Ok(())
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new(), input_labels: identity_labels(n_qubits), labels: identity_labels(n_qubits) }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self, CircuitError> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Sets the labelling at entry and exit.
    pub fn with_labels(mut self, input: Vec<usize>, output: Vec<usize>) -> Result<Self, CircuitError> {
        check_permutation(&input, self.n_qubits)?;
        check_permutation(&output, self.n_qubits)?;
        self.input_labels = input;
        self.labels = output;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Wire position -> orbital label after the circuit.
    pub fn permutation(&self) -> &[usize] {
        &self.labels
    }

    /// Wire position -> orbital label before the circuit.
    pub fn input_permutation(&self) -> &[usize] {
        &self.input_labels
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn phase_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Phase { .. })).count()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let (w, k) = gate.wires();
        for &wire in &w[..k] {
            if wire >= self.n_qubits {
                return Err(CircuitError::WireOutOfRange { wire, n_qubits: self.n_qubits });
            }
        }
        if k == 2 && w[0] == w[1] {
            return Err(CircuitError::RepeatedWire(w[0]));
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`, which must start from this circuit's exit labelling.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.n_qubits != self.n_qubits {
            return Err(CircuitError::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        if other.input_labels != self.labels {
            return Err(CircuitError::InvalidPermutation("labels do not chain"));
        }
        self.gates.extend_from_slice(&other.gates);
        self.labels.clone_from(&other.labels);
        Ok(())
    }

    /// Gates reversed and individually inverted; labels swap roles.
    pub fn inverse(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            input_labels: self.labels.clone(),
            labels: self.input_labels.clone(),
        }
    }
}

/// Applies a 1- or 2-qubit matrix to every column of `m` (rows index basis states).
fn apply_on_rows(m: &mut CMatrix, n_qubits: usize, gate: &Gate) {
    let u = gate.unitary();
    let (w, k) = gate.wires();
    let dim = 1usize << n_qubits;
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    let cols = m.ncols();
    if k == 1 {
        let b = bit(w[0]);
        for row in (0..dim).filter(|r| r & b == 0) {
            for c in 0..cols {
                let (a0, a1) = (m[(row, c)], m[(row | b, c)]);
                m[(row, c)] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                m[(row | b, c)] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
    } else {
        let (b1, b2) = (bit(w[0]), bit(w[1]));
        for row in (0..dim).filter(|r| r & (b1 | b2) == 0) {
            let idx = [row, row | b2, row | b1, row | b1 | b2];
            for c in 0..cols {
                let a: [Complex64; 4] = core::array::from_fn(|i| m[(idx[i], c)]);
                for (i, &r) in idx.iter().enumerate() {
                    m[(r, c)] = (0..4).map(|j| u[(i, j)] * a[j]).sum();
                }
            }
        }
    }
}

/// Dense `2^n x 2^n` unitary of the whole circuit.
pub fn circuit_unitary(c: &Circuit) -> Result<CMatrix, CircuitError> {
    if c.n_qubits > MAX_DENSE_QUBITS {
        return Err(CircuitError::TooWide(c.n_qubits));
    }
    let dim = 1usize << c.n_qubits;
    let mut u = CMatrix::identity(dim, dim);
    for g in &c.gates {
        apply_on_rows(&mut u, c.n_qubits, g);
    }
    Ok(u)
}
