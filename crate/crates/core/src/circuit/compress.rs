//! Constant-depth compression by local reflections.
//!
//! The canonical layout is a triangle `C_1 C_2 ... C_{n-1}` (time order) with
//! `C_m = s_{m-1} ... s_0` and `s_k` a hopping block on wires `(k, k+1)`,
//! followed by one phase per wire. A block appended after the triangle is
//! commuted down to its level, reflected with its neighbours, and the
//! displaced block is handed to the level below. Phase layers produced on the
//! way are pushed to the end.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::linalg::wrap_angle;
use crate::CMatrix;

use super::onebody::{b_matrix, decompose_u2};
use super::ybe::{reflect_upper_outer, Block};
use super::{Circuit, CircuitError, Gate};

/// Incremental canonical-form builder.
#[derive(Debug, Clone, PartialEq)]
pub struct Compressor {
    n: usize,
    /// `levels[m - 1][k]` is block `s_k` of `C_m`.
    levels: Vec<Vec<Block>>,
    lambda: Vec<f64>,
    absorbed: usize,
}

fn is_conserving_block(g: &Gate) -> bool {
    matches!(g, Gate::MatchBlock { theta_x, theta_z, .. } if ((theta_x - theta_z) / 2.0).sin().abs() < 1e-12)
}

impl Compressor {
    /// Identity triangle on `n` wires.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            levels: (1..n).map(|m| alloc::vec![(0.0, 0.0); m]).collect(),
            lambda: alloc::vec![0.0; n],
            absorbed: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Two-qubit gates absorbed so far.
    pub fn absorbed(&self) -> usize {
        self.absorbed
    }

    /// Appends a gate in time order.
    pub fn absorb(&mut self, gate: &Gate) -> Result<(), CircuitError> {
        self.absorb_indexed(gate, 0)
    }

    fn absorb_indexed(&mut self, gate: &Gate, idx: usize) -> Result<(), CircuitError> {
        let (w, k) = gate.wires();
        for &wire in &w[..k] {
            if wire >= self.n {
                return Err(CircuitError::WireOutOfRange { wire, n_qubits: self.n });
            }
        }
        if let Gate::Phase { qubit, phi } = *gate {
            self.lambda[qubit] += phi;
            return Ok(());
        }
        let local = gate.one_body().ok_or(CircuitError::NotFreeFermion(idx))?;
        if k != 2 {
            return Err(CircuitError::NotFreeFermion(idx));
        }
        if w[0].abs_diff(w[1]) != 1 {
            return Err(CircuitError::NotAdjacent(idx));
        }
        let lo = w[0].min(w[1]);
        let local = if w[0] < w[1] { local } else { CMatrix::from_fn(2, 2, |a, b| local[(1 - a, 1 - b)]) };
        let f = decompose_u2(&local);
        // the pending phase layer sits before the new block; move it past
        let phi = f.phi - (self.lambda[lo] - self.lambda[lo + 1]);
        self.insert(self.n - 1, lo, (f.theta, phi));
        self.lambda[lo] += f.alpha[0];
        self.lambda[lo + 1] += f.alpha[1];
        self.absorbed += 1;
        Ok(())
    }

    pub fn absorb_circuit(&mut self, c: &Circuit) -> Result<(), CircuitError> {
        if c.n_qubits() != self.n {
            return Err(CircuitError::DimensionMismatch { expected: self.n, got: c.n_qubits() });
        }
        for (idx, g) in c.gates().iter().enumerate() {
            self.absorb_indexed(g, idx)?;
        }
        Ok(())
    }

    /// Pushes phases `(wire, angle)` that act right after block `below` of
    /// level `m` through every later block into the trailing layer.
    fn push_from(&mut self, m: usize, below: usize, phases: &[(usize, f64)]) {
        let mut lam = alloc::vec![0.0; self.n];
        for &(q, a) in phases {
            lam[q] += a;
        }
        for k in 0..below {
            let b = &mut self.levels[m - 1][k];
            b.1 -= lam[k] - lam[k + 1];
        }
        for level in &mut self.levels[m..] {
            for (k, b) in level.iter_mut().enumerate() {
                b.1 -= lam[k] - lam[k + 1];
            }
        }
        for (l, a) in self.lambda.iter_mut().zip(lam) {
            *l += a;
        }
    }

    /// Block `b` on `(k, k+1)` placed right after level `m`.
    fn insert(&mut self, m: usize, k: usize, b: Block) {
        debug_assert!(k < m);
        if k == 0 {
            let s0 = self.levels[m - 1][0];
            let f = decompose_u2(&(b_matrix(b.0, b.1) * b_matrix(s0.0, s0.1)));
            self.levels[m - 1][0] = (f.theta, wrap_angle(f.phi));
            self.push_from(m, 0, &[(0, f.alpha[0]), (1, f.alpha[1])]);
            return;
        }
        let level = &self.levels[m - 1];
        let ([x, y, z], l) = reflect_upper_outer(level[k], level[k - 1], b);
        self.levels[m - 1][k] = (y.0, wrap_angle(y.1));
        self.levels[m - 1][k - 1] = (z.0, wrap_angle(z.1));
        self.push_from(m, k - 1, &[(k - 1, l[0]), (k, l[1]), (k + 1, l[2])]);
        self.insert(m - 1, k - 1, x);
    }

    /// Canonical circuit: `n(n-1)/2` blocks, then `n` phases.
    pub fn to_circuit(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for (m, level) in self.levels.iter().enumerate() {
            for k in (0..=m).rev() {
                let (theta, phi) = level[k];
                gates.push(Gate::block(k, k + 1, wrap_angle(theta), wrap_angle(phi)));
            }
        }
        gates.extend(self.lambda.iter().enumerate().map(|(qubit, &phi)| Gate::Phase { qubit, phi: wrap_angle(phi) }));
        Circuit::from_gates(self.n, gates).expect("canonical wires are in range")
    }
}

/// True for the triangle layout followed by at most one phase per wire in
/// ascending order.
pub fn is_canonical(c: &Circuit) -> bool {
    let n = c.n_qubits();
    let n_blocks = n * n.saturating_sub(1) / 2;
    let gates = c.gates();
    if gates.len() < n_blocks || gates.len() > n_blocks + n {
        return false;
    }
    let mut expected = (1..n).flat_map(|m| (0..m).rev());
    for g in &gates[..n_blocks] {
        let k = expected.next().expect("count checked");
        match g {
            Gate::MatchBlock { q1, q2, .. } if *q1 == k && *q2 == k + 1 && is_conserving_block(g) => {}
            _ => return false,
        }
    }
    let mut last = None;
    for g in &gates[n_blocks..] {
        match *g {
            Gate::Phase { qubit, .. } if last.is_none_or(|l| qubit > l) => last = Some(qubit),
            _ => return false,
        }
    }
    true
}

/// Rewrites a number-conserving circuit of adjacent blocks and phases into
/// the canonical triangle. Canonical inputs come back unchanged.
pub fn compress_ybe(c: &Circuit) -> Result<Circuit, CircuitError> {
    if is_canonical(c) {
        return Ok(c.clone());
    }
    let mut comp = Compressor::new(c.n_qubits());
    comp.absorb_circuit(c)?;
    comp.to_circuit().with_labels(c.input_permutation().to_vec(), c.permutation().to_vec())
}

/// Two consecutive blocks on the same ordered wire pair as one block with
/// summed angles.
pub fn merge_blocks(first: &Gate, second: &Gate) -> Result<Gate, CircuitError> {
    match (*first, *second) {
        (
            Gate::MatchBlock { q1, q2, theta_x: x1, theta_z: z1, phi: p1 },
            Gate::MatchBlock { q1: r1, q2: r2, theta_x: x2, theta_z: z2, phi: p2 },
        ) if q1 == r1 && q2 == r2 && (p1 - p2).abs() < 1e-15 => {
            Ok(Gate::MatchBlock { q1, q2, theta_x: wrap_angle(x1 + x2), theta_z: wrap_angle(z1 + z2), phi: p1 })
        }
        _ => Err(CircuitError::WireMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_unitary, one_body_of_circuit, trotter_step, Direction, TrotterOptions};
    use crate::linalg::{max_abs_diff, phase_aligned_distance};
    use crate::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
    }

    fn trotter_circuit(n: usize, steps: usize, seed: u64) -> Circuit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hermitian(n, &mut rng);
        let mut dir = Direction::Forward;
        let mut c = Circuit::new(n);
        for _ in 0..steps {
            let step = trotter_step(&g, 0.1, c.permutation(), TrotterOptions { direction: dir, ..Default::default() })
                .unwrap();
            c.append(&step).unwrap();
            dir = dir.flipped();
        }
        c
    }

    #[test]
    fn empty_input_gives_identity_triangle() {
        let c = compress_ybe(&Circuit::new(4)).unwrap();
        assert_eq!(c.block_count(), 6);
        assert_eq!(circuit_unitary(&c).unwrap(), CMatrix::identity(16, 16));
    }

    #[test]
    fn compression_is_exact_and_constant_size() {
        for steps in [1, 3, 7] {
            let c = trotter_circuit(4, steps, 3);
            let k = compress_ybe(&c).unwrap();
            assert_eq!(k.block_count(), 6);
            assert_eq!(k.phase_count(), 4);
            assert!(is_canonical(&k));
            let d = max_abs_diff(&circuit_unitary(&c).unwrap(), &circuit_unitary(&k).unwrap());
            assert!(d < 1e-10, "{steps}: {d}");
        }
    }

    #[test]
    fn canonical_input_is_fixed_point() {
        let k = compress_ybe(&trotter_circuit(5, 2, 9)).unwrap();
        assert_eq!(compress_ybe(&k).unwrap(), k);
    }

    #[test]
    fn reversed_orientation_and_swaps() {
        let c = Circuit::from_gates(
            3,
            [
                Gate::block(2, 1, 0.4, 0.3),
                Gate::Fswap { q1: 0, q2: 1, theta: 0.2, convention: super::super::SwapConvention::Fermionic },
                Gate::Phase { qubit: 1, phi: 0.7 },
                Gate::block(0, 1, -1.1, 2.0),
            ],
        )
        .unwrap();
        let k = compress_ybe(&c).unwrap();
        let d = max_abs_diff(&one_body_of_circuit(&c).unwrap(), &one_body_of_circuit(&k).unwrap());
        assert!(d < 1e-13);
        assert!(phase_aligned_distance(&circuit_unitary(&c).unwrap(), &circuit_unitary(&k).unwrap()) < 1e-12);
    }

    #[test]
    fn rejects_non_conserving_gates() {
        let c =
            Circuit::from_gates(2, [Gate::Phase { qubit: 0, phi: 0.1 }, Gate::match_block(0, 1, 0.1, 0.5)]).unwrap();
        assert_eq!(compress_ybe(&c), Err(CircuitError::NotFreeFermion(1)));
        let c = Circuit::from_gates(3, [Gate::block(0, 2, 0.1, 0.0)]).unwrap();
        assert_eq!(compress_ybe(&c), Err(CircuitError::NotAdjacent(0)));
    }

    #[test]
    fn merge_examples() {
        let b = |x, z| Gate::match_block(0, 1, x, z);
        assert_eq!(merge_blocks(&b(0.4, 0.2), &b(0.0, 0.0)).unwrap(), b(0.4, 0.2));
        assert_eq!(merge_blocks(&b(0.4, 0.2), &b(-0.4, -0.2)).unwrap(), b(0.0, 0.0));
        let m = merge_blocks(&b(0.3, 0.7), &b(0.5, 0.1)).unwrap();
        let Gate::MatchBlock { theta_x, theta_z, .. } = m else { panic!("not a block") };
        assert!((theta_x - 0.8).abs() < 1e-15 && (theta_z - 0.8).abs() < 1e-15);
        let prod = b(0.5, 0.1).unitary() * b(0.3, 0.7).unitary();
        assert!(phase_aligned_distance(&prod, &m.unitary()) < 1e-12);
        assert_eq!(merge_blocks(&b(0.1, 0.1), &Gate::match_block(1, 0, 0.1, 0.1)), Err(CircuitError::WireMismatch));
    }
}
