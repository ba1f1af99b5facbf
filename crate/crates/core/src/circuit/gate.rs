//! Gate set and exact unitaries.
//!
//! Two-qubit matrices are written in the basis `|b1 b2>` of the gate's wires
//! as listed (`q1` is the more significant bit), so index `2*b1 + b2`.

use core::f64::consts::FRAC_PI_2;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::{CMatrix, Complex64};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hopping angle per unit `G_pq * dt`; `MB(s*G*dt, s*G*dt)` equals
/// `exp(-i dt G_pq (XX+YY)/2)` on an adjacent pair.
pub const HOPPING_ANGLE_SCALE: f64 = 1.0;
/// Angle offset that turns a hopping block into a swap-merged block:
/// `MB(x + pi/2, x + pi/2) (S (x) S)` is a strict fermionic swap after the hop `x`.
pub const SWAP_ANGLE_OFFSET: f64 = FRAC_PI_2;

/// Phase carried by the doubly occupied state of an `FSWAP`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SwapConvention {
    /// Single-particle part `e^{i theta} sigma_x`, `-e^{2 i theta}` on `|11>`.
    /// At `theta = 0` this is the exact fermionic mode exchange.
    #[default]
    Fermionic,
    /// `e^{i theta}` on the odd sector, `+1` on `|11>`; `theta = pi/2` is iSWAP.
    ISwap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx {
        qubit: usize,
        theta: f64,
    },
    Rz {
        qubit: usize,
        theta: f64,
    },
    Cx {
        control: usize,
        target: usize,
    },
    /// `diag(1, e^{i phi})`.
    Phase {
        qubit: usize,
        phi: f64,
    },
    /// `(P(phi) (x) 1) exp(-i theta_x XX/2) exp(-i theta_z YY/2) (P(-phi) (x) 1)`,
    /// built from the six-gate Rx/CX/Rz sequence with control on `q1`.
    MatchBlock {
        q1: usize,
        q2: usize,
        theta_x: f64,
        theta_z: f64,
        phi: f64,
    },
    Fswap {
        q1: usize,
        q2: usize,
        theta: f64,
        convention: SwapConvention,
    },
}

impl Gate {
    /// Number-conserving block with hopping angle `theta` and hopping phase `phi`.
    pub fn block(q1: usize, q2: usize, theta: f64, phi: f64) -> Self {
        Gate::MatchBlock { q1, q2, theta_x: theta, theta_z: theta, phi }
    }

    pub fn match_block(q1: usize, q2: usize, theta_x: f64, theta_z: f64) -> Self {
        Gate::MatchBlock { q1, q2, theta_x, theta_z, phi: 0.0 }
    }

    pub fn wires(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::Rx { qubit, .. } | Gate::Rz { qubit, .. } | Gate::Phase { qubit, .. } => ([qubit, qubit], 1),
            Gate::Cx { control, target } => ([control, target], 2),
            Gate::MatchBlock { q1, q2, .. } | Gate::Fswap { q1, q2, .. } => ([q1, q2], 2),
        }
    }

    pub fn arity(&self) -> usize {
        self.wires().1
    }

    pub fn is_two_qubit(&self) -> bool {
        self.arity() == 2
    }

    /// The gate undoing this one.
    pub fn inverse(&self) -> Self {
        match *self {
            Gate::Rx { qubit, theta } => Gate::Rx { qubit, theta: -theta },
            Gate::Rz { qubit, theta } => Gate::Rz { qubit, theta: -theta },
            Gate::Cx { .. } => *self,
            Gate::Phase { qubit, phi } => Gate::Phase { qubit, phi: -phi },
            Gate::MatchBlock { q1, q2, theta_x, theta_z, phi } => {
                Gate::MatchBlock { q1, q2, theta_x: -theta_x, theta_z: -theta_z, phi }
            }
            Gate::Fswap { q1, q2, theta, convention } => Gate::Fswap { q1, q2, theta: -theta, convention },
        }
    }

    /// Dense 2x2 or 4x4 unitary.
    pub fn unitary(&self) -> CMatrix {
        match *self {
            Gate::Rx { theta, .. } => rx(theta),
            Gate::Rz { theta, .. } => rz(theta),
            Gate::Phase { phi, .. } => phase(phi),
            Gate::Cx { .. } => cx(),
            Gate::MatchBlock { theta_x, theta_z, phi, .. } => match_block(theta_x, theta_z, phi),
            Gate::Fswap { theta, convention, .. } => fswap(theta, convention),
        }
    }

    /// `2x2` mode transformation `u` with `U a_j^dag U^dag = sum_i u_ij a_i^dag`
    /// over the gate's wires in listed order, or `None` when the gate is not
    /// a particle-conserving free-fermion gate on its own.
    pub fn one_body(&self) -> Option<CMatrix> {
        const TOL: f64 = 1e-12;
        match *self {
            Gate::Phase { phi, .. } => Some(CMatrix::from_element(1, 1, Complex64::from_polar(1.0, phi))),
            Gate::MatchBlock { theta_x, theta_z, phi, .. } => {
                ((theta_x - theta_z) / 2.0).sin().abs().lt(&TOL).then(|| {
                    let odd = match_block(theta_x, theta_z, phi);
                    let u = CMatrix::from_row_slice(2, 2, &[odd[(2, 2)], odd[(2, 1)], odd[(1, 2)], odd[(1, 1)]]);
                    // even-sector sign (-1 when theta_x - theta_z = 2 pi mod 4 pi) is a parity
                    // factor, not a one-body map; reject it
                    (odd[(0, 0)] - ONE).norm().lt(&TOL).then_some(u)
                })?
            }
            Gate::Fswap { theta, convention, .. } => {
                let ok = match convention {
                    SwapConvention::Fermionic => true,
                    SwapConvention::ISwap => (theta.cos()).abs() < TOL,
                };
                ok.then(|| {
                    let e = Complex64::from_polar(1.0, theta);
                    CMatrix::from_row_slice(2, 2, &[ZERO, e, e, ZERO])
                })
            }
            _ => None,
        }
    }
}

fn m2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

pub fn rx(theta: f64) -> CMatrix {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    m2(c, s, s, c)
}

pub fn rz(theta: f64) -> CMatrix {
    m2(Complex64::from_polar(1.0, -theta / 2.0), ZERO, ZERO, Complex64::from_polar(1.0, theta / 2.0))
}

pub fn phase(phi: f64) -> CMatrix {
    m2(ONE, ZERO, ZERO, Complex64::from_polar(1.0, phi))
}

/// Control on the first wire.
pub fn cx() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

pub fn match_block(theta_x: f64, theta_z: f64, phi: f64) -> CMatrix {
    let h = rx(FRAC_PI_2).kronecker(&rx(FRAC_PI_2));
    let h_inv = rx(-FRAC_PI_2).kronecker(&rx(-FRAC_PI_2));
    let core = h * cx() * rx(theta_x).kronecker(&rz(theta_z)) * cx() * h_inv;
    if phi == 0.0 {
        return core;
    }
    let id = CMatrix::identity(2, 2);
    phase(phi).kronecker(&id) * core * phase(-phi).kronecker(&id)
}

pub fn fswap(theta: f64, convention: SwapConvention) -> CMatrix {
    let e = Complex64::from_polar(1.0, theta);
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 2)] = e;
    m[(2, 1)] = e;
    m[(3, 3)] = match convention {
        SwapConvention::Fermionic => -e * e,
        SwapConvention::ISwap => ONE,
    };
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, phase_aligned_distance, propagator, unitarity_defect};
    use core::f64::consts::PI;

    fn pauli(k: usize) -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        match k {
            0 => m2(ZERO, ONE, ONE, ZERO),
            1 => m2(ZERO, -i, i, ZERO),
            _ => m2(ONE, ZERO, ZERO, -ONE),
        }
    }

    #[test]
    fn zero_block_is_identity() {
        assert!(max_abs_diff(&match_block(0.0, 0.0, 0.0), &CMatrix::identity(4, 4)) < 1e-15);
    }

    #[test]
    fn block_is_xx_yy_exponential() {
        let xx = pauli(0).kronecker(&pauli(0));
        let yy = pauli(1).kronecker(&pauli(1));
        for &(a, b) in &[(0.3, -1.2), (2.0, 2.0), (-PI, 0.7)] {
            let expect = propagator(&(xx.clone() * Complex64::new(0.5, 0.0)), a)
                * propagator(&(yy.clone() * Complex64::new(0.5, 0.0)), b);
            assert!(max_abs_diff(&match_block(a, b, 0.0), &expect) < 1e-13);
        }
    }

    #[test]
    fn iswap_fswap_at_quarter_turn() {
        let i = Complex64::new(0.0, 1.0);
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = ONE;
        expect[(1, 2)] = i;
        expect[(2, 1)] = i;
        expect[(3, 3)] = ONE;
        assert!(max_abs_diff(&fswap(FRAC_PI_2, SwapConvention::ISwap), &expect) < 1e-15);
        // the same matrix inside the block family
        assert!(max_abs_diff(&match_block(-FRAC_PI_2, -FRAC_PI_2, 0.0), &expect) < 1e-15);
    }

    #[test]
    fn fermionic_swap_at_zero_is_mode_exchange() {
        let m = fswap(0.0, SwapConvention::Fermionic);
        assert_eq!(m[(3, 3)], -ONE);
        assert_eq!(m[(1, 2)], ONE);
    }

    #[test]
    fn hopping_angle_calibration() {
        let xx = pauli(0).kronecker(&pauli(0));
        let yy = pauli(1).kronecker(&pauli(1));
        let (g, dt) = (0.37, 0.05);
        let gen = (xx + yy) * Complex64::new(g / 2.0, 0.0);
        let theta = HOPPING_ANGLE_SCALE * g * dt;
        let hop = propagator(&gen, dt);
        assert!(max_abs_diff(&match_block(theta, theta, 0.0), &hop) < 1e-14);
        let s = phase(FRAC_PI_2);
        let swapped = match_block(theta + SWAP_ANGLE_OFFSET, theta + SWAP_ANGLE_OFFSET, 0.0) * s.kronecker(&s);
        let expect = fswap(0.0, SwapConvention::Fermionic) * hop;
        assert!(max_abs_diff(&swapped, &expect) < 1e-14);
    }

    #[test]
    fn every_gate_is_unitary_and_inverse_undoes_it() {
        let gates = [
            Gate::Rx { qubit: 0, theta: 0.4 },
            Gate::Rz { qubit: 0, theta: -1.3 },
            Gate::Phase { qubit: 0, phi: 2.2 },
            Gate::Cx { control: 0, target: 1 },
            Gate::MatchBlock { q1: 0, q2: 1, theta_x: 0.9, theta_z: -0.4, phi: 1.1 },
            Gate::Fswap { q1: 0, q2: 1, theta: 0.3, convention: SwapConvention::ISwap },
            Gate::Fswap { q1: 0, q2: 1, theta: 0.3, convention: SwapConvention::Fermionic },
        ];
        for g in gates {
            let u = g.unitary();
            assert!(unitarity_defect(&u) < 1e-12, "{:?}", g);
            let n = u.nrows();
            assert!(max_abs_diff(&(g.inverse().unitary() * u), &CMatrix::identity(n, n)) < 1e-12);
        }
    }

    #[test]
    fn one_body_images() {
        let i = Complex64::new(0.0, 1.0);
        let g = Gate::block(0, 1, 0.3, 0.8);
        let u = g.one_body().unwrap();
        let (c, s) = (0.3_f64.cos(), 0.3_f64.sin());
        let expect = m2(
            Complex64::new(c, 0.0),
            -i * Complex64::from_polar(s, 0.8),
            -i * Complex64::from_polar(s, -0.8),
            Complex64::new(c, 0.0),
        );
        assert!(max_abs_diff(&u, &expect) < 1e-14);
        assert!(Gate::match_block(0, 1, 0.3, 0.5).one_body().is_none());
        assert!(Gate::match_block(0, 1, 0.3, 0.3 + 2.0 * PI).one_body().is_none());
        assert!(Gate::Fswap { q1: 0, q2: 1, theta: 0.2, convention: SwapConvention::ISwap }.one_body().is_none());
        let sw = Gate::Fswap { q1: 0, q2: 1, theta: FRAC_PI_2, convention: SwapConvention::ISwap };
        assert!(phase_aligned_distance(&sw.one_body().unwrap(), &m2(ZERO, i, i, ZERO)) < 1e-15);
        assert!(Gate::Cx { control: 0, target: 1 }.one_body().is_none());
    }
}
