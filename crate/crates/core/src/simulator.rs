//! Dense statevector engine.
//!
//! Wire `0` is the most significant bit of the basis index, so `|1100>` on
//! four wires is index `12`. Occupations and density matrices are reported in
//! orbital-label order through a wire-to-label permutation.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::{CMatrix, Complex64};

/// Largest register the dense engine accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("{0} qubits exceed the simulator cap of {MAX_QUBITS}")]
    TooWide(usize),
    #[error("wire {wire} out of range for {n_qubits} qubits")]
    WireOutOfRange { wire: usize, n_qubits: usize },
    #[error("circuit width {circuit} does not match state width {state}")]
    WidthMismatch { state: usize, circuit: usize },
    #[error("amplitude vector has length {0}, not a power of two")]
    BadLength(usize),
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("invalid permutation")]
    InvalidPermutation,
    #[error("shot count must be positive")]
    ZeroShots,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Basis state with `|1>` on every wire in `occupied`.
    pub fn init_state(n_qubits: usize, occupied: &[usize]) -> Result<Self, SimError> {
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooWide(n_qubits));
        }
        let mut index = 0usize;
        for &wire in occupied {
            if wire >= n_qubits {
                return Err(SimError::WireOutOfRange { wire, n_qubits });
            }
            index |= 1 << (n_qubits - 1 - wire);
        }
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes; the norm must be 1 within `1e-10`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooWide(n_qubits));
        }
        let s = Self { n_qubits, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn bit(&self, wire: usize) -> usize {
        1 << (self.n_qubits - 1 - wire)
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        let (w, k) = gate.wires();
        for &wire in &w[..k] {
            if wire >= self.n_qubits {
                return Err(SimError::WireOutOfRange { wire, n_qubits: self.n_qubits });
            }
        }
        let u = gate.unitary();
        if k == 1 {
            let b = self.bit(w[0]);
            for i in (0..self.amps.len()).filter(|i| i & b == 0) {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                self.amps[i | b] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        } else {
            let (b1, b2) = (self.bit(w[0]), self.bit(w[1]));
            for i in (0..self.amps.len()).filter(|i| i & (b1 | b2) == 0) {
                let idx = [i, i | b2, i | b1, i | b1 | b2];
                let a = idx.map(|j| self.amps[j]);
                for (r, &j) in idx.iter().enumerate() {
                    self.amps[j] = (0..4).map(|c| u[(r, c)] * a[c]).sum();
                }
            }
        }
        Ok(())
    }

    pub fn run_circuit(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(SimError::WidthMismatch { state: self.n_qubits, circuit: circuit.n_qubits() });
        }
        circuit.gates().iter().try_for_each(|g| self.apply_gate(g))
    }

    /// Exact `<Z_k>` per wire.
    pub fn z_expectations(&self) -> Vec<f64> {
        (0..self.n_qubits)
            .map(|q| {
                let b = self.bit(q);
                self.amps.iter().enumerate().map(|(i, a)| if i & b == 0 { a.norm_sqr() } else { -a.norm_sqr() }).sum()
            })
            .collect()
    }

    /// `n_p = (1 - <Z>)/2` for the wire carrying label `p`.
    pub fn occupations(&self, perm: &[usize]) -> Result<Vec<f64>, SimError> {
        let wire_of = invert(perm, self.n_qubits)?;
        let z = self.z_expectations();
        Ok(wire_of.iter().map(|&w| (1.0 - z[w]) / 2.0).collect())
    }

    /// `rho[(p, q)] = <a_p^dag a_q>` with Jordan–Wigner strings along the wires.
    pub fn one_rdm(&self, perm: &[usize]) -> Result<CMatrix, SimError> {
        let wire_of = invert(perm, self.n_qubits)?;
        let n = self.n_qubits;
        let mut wire_rdm = CMatrix::zeros(n, n);
        for i in 0..n {
            let bi = self.bit(i);
            wire_rdm[(i, i)] = self
                .amps
                .iter()
                .enumerate()
                .filter(|(x, _)| x & bi != 0)
                .map(|(_, a)| a.norm_sqr())
                .sum::<f64>()
                .into();
            for j in i + 1..n {
                let bj = self.bit(j);
                // bits strictly between wires i and j
                let between = (bi - 1) & !((bj << 1) - 1);
                let mut acc = Complex64::new(0.0, 0.0);
                for x in (0..self.amps.len()).filter(|x| x & bj != 0 && x & bi == 0) {
                    let y = (x & !bj) | bi;
                    let sign = if (x & between).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                    acc += self.amps[y].conj() * self.amps[x] * sign;
                }
                wire_rdm[(i, j)] = acc;
                wire_rdm[(j, i)] = acc.conj();
            }
        }
        Ok(CMatrix::from_fn(n, n, |p, q| wire_rdm[(wire_of[p], wire_of[q])]))
    }

    /// Finite-shot estimate of every `<Z_k>`; deterministic for a fixed seed.
    pub fn sample_z(&self, shots: usize, seed: u64) -> Result<Vec<f64>, SimError> {
        if shots == 0 {
            return Err(SimError::ZeroShots);
        }
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut total = 0.0;
        for a in &self.amps {
            total += a.norm_sqr();
            cdf.push(total);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = alloc::vec![0usize; self.n_qubits];
        for _ in 0..shots {
            let r = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&c| c <= r).min(self.amps.len() - 1);
            for (q, c) in counts.iter_mut().enumerate() {
                if idx & self.bit(q) != 0 {
                    *c += 1;
                }
            }
        }
        Ok(counts.iter().map(|&c| 1.0 - 2.0 * c as f64 / shots as f64).collect())
    }

    /// `(basis index, amplitude)` for amplitudes above `threshold` in magnitude.
    pub fn significant_amplitudes(&self, threshold: f64) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.amps.iter().copied().enumerate().filter(move |(_, a)| a.norm() > threshold)
    }
}

/// Label -> wire map of a wire -> label permutation.
fn invert(perm: &[usize], n: usize) -> Result<Vec<usize>, SimError> {
    if perm.len() != n {
        return Err(SimError::InvalidPermutation);
    }
    let mut wire_of = alloc::vec![usize::MAX; n];
    for (wire, &label) in perm.iter().enumerate() {
        if label >= n || wire_of[label] != usize::MAX {
            return Err(SimError::InvalidPermutation);
        }
        wire_of[label] = wire;
    }
    Ok(wire_of)
}
