//! Seeded self-checks of the circuit rewrites, each against dense unitaries.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdhf_core::circuit::{
    circuit_unitary, compress_ybe, merge_blocks, one_body_of_circuit, pair_schedule, resynthesize, trotter_step,
    ybe_reflect, ybe_reflect_conserving, Circuit, CircuitError, Direction, Gate, TrotterOptions,
};
use tdhf_core::linalg::{max_abs_diff, phase_aligned_distance};
use tdhf_core::{CMatrix, Complex64};

pub const YBE_TOL: f64 = 1e-10;
pub const MERGE_TOL: f64 = 1e-12;
pub const ROUTE_TOL: f64 = 1e-8;
pub const DEPTH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Structural failures (wrong counts, solver errors) seen along the way.
    pub failures: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.max_residual <= self.tolerance
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<9} samples={:<5} max_residual={:.3e} tol={:.0e} failures={} {}",
            self.name,
            self.samples,
            self.max_residual,
            self.tolerance,
            self.failures,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-PI..PI)
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `steps` Trotter steps of `g` with alternating sweep direction.
pub fn trotter_circuit(g: &CMatrix, dt: f64, steps: usize) -> Result<Circuit, CircuitError> {
    let mut c = Circuit::new(g.nrows());
    let mut direction = Direction::Forward;
    for _ in 0..steps {
        let step = trotter_step(g, dt, c.permutation(), TrotterOptions { direction, ..Default::default() })?;
        c.append(&step)?;
        direction = direction.flipped();
    }
    Ok(c)
}

fn dense(gates: &[Gate], n: usize) -> Result<CMatrix, CircuitError> {
    circuit_unitary(&Circuit::from_gates(n, gates.iter().copied())?)
}

fn triple_on(outer: usize, mut make: impl FnMut(usize, usize) -> Gate) -> [Gate; 3] {
    let middle = 1 - outer;
    [make(outer, outer + 1), make(middle, middle + 1), make(outer, outer + 1)]
}

/// Literal reflection of general match-block triples (global phase ignored)
/// and the number-conserving reflection of `B(theta, phi)` triples (exact,
/// trailing phases included). Both orientations are drawn.
pub fn ybe_suite(samples: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport { name: "ybe", samples, max_residual: 0.0, tolerance: YBE_TOL, failures: 0 };
    for _ in 0..samples {
        let outer = rng.random_range(0..2usize);
        let literal = triple_on(outer, |a, b| Gate::match_block(a, b, angle(rng), angle(rng)));
        let conserving = triple_on(outer, |a, b| Gate::block(a, b, angle(rng), angle(rng)));
        let literal_res =
            ybe_reflect(&literal).and_then(|out| Ok(phase_aligned_distance(&dense(&literal, 3)?, &dense(&out, 3)?)));
        let conserving_res = ybe_reflect_conserving(&conserving).and_then(|r| {
            let mut out = r.gates.to_vec();
            out.extend(r.phases.iter().enumerate().map(|(qubit, &phi)| Gate::Phase { qubit, phi }));
            Ok(max_abs_diff(&dense(&conserving, 3)?, &dense(&out, 3)?))
        });
        for res in [literal_res, conserving_res] {
            match res {
                Ok(r) => report.max_residual = report.max_residual.max(r),
                Err(_) => report.failures += 1,
            }
        }
    }
    report
}

/// Same-pair blocks sharing `phi` compose to the angle-sum block.
pub fn merge_suite(samples: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport { name: "merge", samples, max_residual: 0.0, tolerance: MERGE_TOL, failures: 0 };
    for _ in 0..samples {
        let phi = if rng.random_bool(0.5) { 0.0 } else { angle(rng) };
        let a = Gate::MatchBlock { q1: 0, q2: 1, theta_x: angle(rng), theta_z: angle(rng), phi };
        let b = Gate::MatchBlock { q1: 0, q2: 1, theta_x: angle(rng), theta_z: angle(rng), phi };
        match merge_blocks(&a, &b) {
            Ok(m) => {
                let r = phase_aligned_distance(&(b.unitary() * a.unitary()), &m.unitary());
                report.max_residual = report.max_residual.max(r);
            }
            Err(_) => report.failures += 1,
        }
    }
    report
}

/// Every pair of `n` labels meets exactly once and the order ends reversed,
/// for `n` in `2..=10`.
pub fn schedule_suite() -> SuiteReport {
    let mut report = SuiteReport { name: "schedule", samples: 9, max_residual: 0.0, tolerance: 0.0, failures: 0 };
    for n in 2..=10usize {
        let s = pair_schedule(n);
        let mut pairs = s.realized_pairs.clone();
        pairs.sort_unstable();
        pairs.dedup();
        let ok = pairs.len() == n * (n - 1) / 2
            && s.realized_pairs.len() == pairs.len()
            && s.final_permutation == (0..n).rev().collect::<Vec<_>>();
        if !ok {
            report.failures += 1;
        }
    }
    report
}

/// YBE compression and one-body resynthesis against the uncompressed
/// circuit, for random `G` on 4 and 6 modes.
pub fn route_suite(draws: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut report =
        SuiteReport { name: "routes", samples: draws, max_residual: 0.0, tolerance: ROUTE_TOL, failures: 0 };
    for k in 0..draws {
        let n = if k % 2 == 0 { 4 } else { 6 };
        let g = random_hermitian(n, rng);
        let steps = rng.random_range(1..=8usize);
        let check = || -> Result<(f64, bool), CircuitError> {
            let c = trotter_circuit(&g, 0.1, steps)?;
            let a = compress_ybe(&c)?;
            let b = resynthesize(&one_body_of_circuit(&c)?, c.permutation())?;
            let (ua, ub, u) = (circuit_unitary(&a)?, circuit_unitary(&b)?, circuit_unitary(&c)?);
            let r = max_abs_diff(&ua, &ub).max(max_abs_diff(&ua, &u));
            Ok((r, a.block_count() == n * (n - 1) / 2 && a.permutation() == c.permutation()))
        };
        match check() {
            Ok((r, shape_ok)) => {
                report.max_residual = report.max_residual.max(r);
                report.failures += usize::from(!shape_ok);
            }
            Err(_) => report.failures += 1,
        }
    }
    report
}

/// Block and phase counts of the compressed 4-mode circuit for each step
/// count, with the largest unitary residual.
pub fn depth_profile(g: &CMatrix, dt: f64, step_counts: &[usize]) -> Result<(Vec<(usize, usize)>, f64), CircuitError> {
    let mut counts = Vec::new();
    let mut worst = 0.0f64;
    for &steps in step_counts {
        let c = trotter_circuit(g, dt, steps)?;
        let z = compress_ybe(&c)?;
        worst = worst.max(max_abs_diff(&circuit_unitary(&z)?, &circuit_unitary(&c)?));
        counts.push((z.block_count(), z.phase_count()));
    }
    Ok((counts, worst))
}

/// 10, 25 and 50 steps on 4 modes compress to one and the same shape.
pub fn depth_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport { name: "depth", samples: 3, max_residual: 0.0, tolerance: DEPTH_TOL, failures: 0 };
    let g = random_hermitian(4, rng);
    match depth_profile(&g, 0.1, &[10, 25, 50]) {
        Ok((counts, worst)) => {
            report.max_residual = worst;
            let same = counts.windows(2).all(|w| w[0] == w[1]);
            let (blocks, phases) = counts[0];
            report.failures += usize::from(!(same && blocks <= 6 && phases <= 4));
        }
        Err(_) => report.failures += 1,
    }
    report
}

/// All suites from one seed. Route draws are capped at 20.
pub fn run_all(samples: usize, seed: u64) -> Vec<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        ybe_suite(samples, &mut rng),
        merge_suite(samples, &mut rng),
        schedule_suite(),
        route_suite(samples.min(20), &mut rng),
        depth_suite(&mut rng),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_repeats() {
        let a = run_all(5, 3);
        assert!(a.iter().all(SuiteReport::passed), "{a:?}");
        assert_eq!(a, run_all(5, 3));
    }

    #[test]
    fn report_line() {
        let r = SuiteReport { name: "merge", samples: 2, max_residual: 2e-13, tolerance: 1e-12, failures: 0 };
        assert_eq!(r.to_string(), "merge     samples=2     max_residual=2.000e-13 tol=1e-12 failures=0 PASS");
        assert!(!SuiteReport { failures: 1, ..r }.passed());
    }
}
