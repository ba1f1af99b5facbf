//! Three-block reflection `A12 B23 C12 -> A'23 B'12 C'23`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{max_abs_diff, wrap_angle};
use crate::{CMatrix, Complex64, RMatrix};

use super::onebody::{decompose_u2, one_body_of_circuit};
use super::{circuit_unitary, Circuit, CircuitError, Gate};

/// Residual above which a reflection is reported as failed.
pub const YBE_TOLERANCE: f64 = 1e-8;
const SOLVER_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;
const N_SEEDS: u64 = 8;

/// Number-conserving reflection: `gates` in time order, then `phases` on the
/// three wires (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectedTriple {
    pub gates: [Gate; 3],
    pub phases: [f64; 3],
    pub residual: f64,
}

/// Lowest wire and, per gate, local wires `(a, b)` in `0..3`.
fn local_layout(triple: &[Gate; 3]) -> Result<(usize, [(usize, usize); 3]), CircuitError> {
    let mut pairs = [(0usize, 0usize); 3];
    for (slot, g) in triple.iter().enumerate() {
        let (w, k) = g.wires();
        if k != 2 || w[0].abs_diff(w[1]) != 1 {
            return Err(CircuitError::BadTriple);
        }
        pairs[slot] = (w[0], w[1]);
    }
    let key = |p: (usize, usize)| p.0.min(p.1);
    let (outer, middle) = (key(pairs[0]), key(pairs[1]));
    if key(pairs[2]) != outer || outer.abs_diff(middle) != 1 {
        return Err(CircuitError::BadTriple);
    }
    let base = outer.min(middle);
    Ok((base, pairs.map(|(a, b)| (a - base, b - base))))
}

fn local_circuit(gates: &[Gate]) -> Circuit {
    Circuit::from_gates(3, gates.iter().copied()).expect("local wires are valid")
}

fn relocate(g: &Gate, (a, b): (usize, usize)) -> Gate {
    match *g {
        Gate::MatchBlock { theta_x, theta_z, phi, .. } => Gate::MatchBlock { q1: a, q2: b, theta_x, theta_z, phi },
        Gate::Fswap { theta, convention, .. } => Gate::Fswap { q1: a, q2: b, theta, convention },
        Gate::Cx { .. } => Gate::Cx { control: a, target: b },
        other => other,
    }
}

/// Output wire order: the middle pair, the outer pair, the middle pair.
fn output_pairs(pairs: &[(usize, usize); 3]) -> [(usize, usize); 3] {
    [pairs[1], pairs[0], pairs[1]]
}

fn literal_unitary(p: &[f64], out: &[(usize, usize); 3]) -> CMatrix {
    let gates: Vec<Gate> = (0..3)
        .map(|k| Gate::MatchBlock { q1: out[k].0, q2: out[k].1, theta_x: p[2 * k], theta_z: p[2 * k + 1], phi: 0.0 })
        .collect();
    circuit_unitary(&local_circuit(&gates)).expect("three wires")
}

/// Real residual vector `e^{i gamma} U(p) - target` with `gamma` chosen optimally.
fn residual(p: &[f64], out: &[(usize, usize); 3], target: &CMatrix) -> Vec<f64> {
    let u = literal_unitary(p, out);
    let overlap: Complex64 = u.iter().zip(target.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    u.iter()
        .zip(target.iter())
        .flat_map(|(a, b)| {
            let d = a * phase - b;
            [d.re, d.im]
        })
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Levenberg–Marquardt with a central-difference Jacobian.
fn levenberg_marquardt(mut p: Vec<f64>, f: impl Fn(&[f64]) -> Vec<f64>) -> (Vec<f64>, f64) {
    let n = p.len();
    let mut r = f(&p);
    let mut cost = sum_sq(&r);
    let mut mu = 1e-3;
    let h = 1e-6;
    for _ in 0..MAX_ITER {
        if max_abs(&r) < SOLVER_TOL {
            break;
        }
        let m = r.len();
        let mut jac = RMatrix::zeros(m, n);
        for j in 0..n {
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[j] += h;
            minus[j] -= h;
            let (rp, rm) = (f(&plus), f(&minus));
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let grad = &jt * nalgebra::DVector::from_column_slice(&r);
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for d in 0..n {
                a[(d, d)] += mu * (1.0 + jtj[(d, d)]);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&grad))) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(x, s)| x + s).collect();
            let rt = f(&trial);
            let ct = sum_sq(&rt);
            if ct < cost {
                p = trial;
                r = rt;
                cost = ct;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (p, max_abs(&r))
}

fn block_angles(g: &Gate) -> [f64; 2] {
    match *g {
        Gate::MatchBlock { theta_x, theta_z, .. } => [theta_x, theta_z],
        Gate::Fswap { theta, .. } => [-theta, -theta],
        _ => [0.0, 0.0],
    }
}

/// Reflects three blocks of the match-block family in time order, solving
/// numerically for the six angles of the mirrored triple. The 8x8 unitary is
/// preserved up to a global phase.
pub fn ybe_reflect(triple: &[Gate; 3]) -> Result<[Gate; 3], CircuitError> {
    let (base, pairs) = local_layout(triple)?;
    let local: Vec<Gate> = triple.iter().zip(pairs).map(|(g, p)| relocate(g, p)).collect();
    let target = circuit_unitary(&local_circuit(&local))?;
    let out = output_pairs(&pairs);
    if max_abs_diff(&target, &CMatrix::identity(8, 8)) < SOLVER_TOL {
        return Ok(out.map(|(a, b)| Gate::match_block(a + base, b + base, 0.0, 0.0)));
    }

    let ang: Vec<[f64; 2]> = triple.iter().map(block_angles).collect();
    let mut starts: Vec<Vec<f64>> = vec![[ang[2], ang[1], ang[0]].concat(), [ang[0], ang[1], ang[2]].concat()];
    for seed in 2..N_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        starts.push((0..6).map(|_| rng.random_range(-PI..PI)).collect());
    }
    let mut best = (Vec::new(), f64::INFINITY);
    for start in starts {
        let (p, res) = levenberg_marquardt(start, |p| residual(p, &out, &target));
        if res < best.1 {
            best = (p, res);
        }
        if best.1 < SOLVER_TOL {
            break;
        }
    }
    let (p, res) = best;
    if !(res <= YBE_TOLERANCE) {
        return Err(CircuitError::ReflectionFailed(res));
    }
    Ok(core::array::from_fn(|k| Gate::MatchBlock {
        q1: out[k].0 + base,
        q2: out[k].1 + base,
        theta_x: wrap_angle(p[2 * k]),
        theta_z: wrap_angle(p[2 * k + 1]),
        phi: 0.0,
    }))
}

pub(crate) type Block = (f64, f64);
type M3 = nalgebra::Matrix3<Complex64>;

/// `B(theta, phi)` on positions `(lo, lo + 1)` of three modes.
pub(crate) fn b3(lo: usize, (theta, phi): Block) -> M3 {
    let (s, c) = theta.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let mut m = M3::identity();
    m[(lo, lo)] = Complex64::new(c, 0.0);
    m[(lo + 1, lo + 1)] = Complex64::new(c, 0.0);
    m[(lo, lo + 1)] = -i * Complex64::from_polar(s, phi);
    m[(lo + 1, lo)] = -i * Complex64::from_polar(s, -phi);
    m
}

/// `(theta, phi)` of the `B` whose adjoint, applied on columns `(j, j+1)`,
/// zeroes entry `(r, j+1)`.
fn null_right(m: &M3, r: usize, j: usize) -> Block {
    let (a, b) = (m[(r, j)], m[(r, j + 1)]);
    let theta = b.norm().atan2(a.norm());
    let phi = if a.norm() > 0.0 && b.norm() > 0.0 { (Complex64::new(0.0, 1.0) * b / a).arg() } else { 0.0 };
    (theta, phi)
}

/// `v = L B12(x) B01(y) B12(z)`: returns `[z, y, x]` (time order) and `L`.
fn split_upper_middle(v: &M3) -> ([Block; 3], [f64; 3]) {
    let z = null_right(v, 0, 1);
    let m = v * b3(1, z).adjoint();
    let y = null_right(&m, 0, 0);
    let m = m * b3(0, y).adjoint();
    let sub = CMatrix::from_fn(2, 2, |a, b| m[(a + 1, b + 1)]);
    let f = decompose_u2(&sub);
    ([z, y, (f.theta, f.phi)], [m[(0, 0)].arg(), f.alpha[0], f.alpha[1]])
}

/// Same with the roles of the pairs exchanged: `v = L B01(x) B12(y) B01(z)`.
fn split_lower_middle(v: &M3) -> ([Block; 3], [f64; 3]) {
    let j = M3::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    );
    // mirroring the chain maps B(theta, phi) on a pair to B(theta, -phi)
    let (blocks, mut l) = split_upper_middle(&(j * v * j));
    l.reverse();
    (blocks.map(|(t, p)| (t, -p)), l)
}

/// Time-ordered `B12(a) B01(b) B12(c)` rewritten as `B01(x) B12(y) B01(z)`
/// followed by phases on the three modes.
pub(crate) fn reflect_upper_outer(a: Block, b: Block, c: Block) -> ([Block; 3], [f64; 3]) {
    split_lower_middle(&(b3(1, c) * b3(0, b) * b3(1, a)))
}

/// Number-conserving reflection in closed form on the 3x3 one-body image.
///
/// Inputs must be adjacent particle-conserving blocks; the mirrored triple
/// is `B(theta, phi)` blocks followed by three phases. Exact up to rounding,
/// with no global phase left over.
pub fn ybe_reflect_conserving(triple: &[Gate; 3]) -> Result<ReflectedTriple, CircuitError> {
    let (base, pairs) = local_layout(triple)?;
    let local: Vec<Gate> = triple.iter().zip(pairs).map(|(g, p)| relocate(g, p)).collect();
    let v = one_body_of_circuit(&local_circuit(&local))?;
    let v3 = M3::from_fn(|a, b| v[(a, b)]);
    let outer_is_lower = pairs[0].0.min(pairs[0].1) == 0;
    let (params, phases) = if outer_is_lower { split_upper_middle(&v3) } else { split_lower_middle(&v3) };
    let out = output_pairs(&pairs);
    let gates: [Gate; 3] = core::array::from_fn(|k| {
        let (a, b) = out[k];
        // B(theta, phi) on (lo, hi) is B(theta, -phi) on (hi, lo)
        let phi = if a < b { params[k].1 } else { -params[k].1 };
        Gate::block(a + base, b + base, params[k].0, wrap_angle(phi))
    });
    let phases = phases.map(wrap_angle);

    let mut check: Vec<Gate> = gates.iter().zip(out).map(|(g, p)| relocate(g, p)).collect();
    check.extend(phases.iter().enumerate().map(|(q, &phi)| Gate::Phase { qubit: q, phi }));
    let residual = max_abs_diff(&one_body_of_circuit(&local_circuit(&check))?, &v);
    if !(residual <= YBE_TOLERANCE) {
        return Err(CircuitError::ReflectionFailed(residual));
    }
    Ok(ReflectedTriple { gates, phases, residual })
}
