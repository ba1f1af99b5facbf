//! Free-fermion (one-body) images of number-conserving circuits.

use crate::linalg::wrap_angle;
use crate::{CMatrix, Complex64};
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use super::{Circuit, CircuitError, Gate};

/// `W = diag(e^{i alpha_0}, e^{i alpha_1}) B(theta, phi)` with
/// `B = [[cos, -i e^{i phi} sin], [-i e^{-i phi} sin, cos]]`, `theta` in `[0, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2Factors {
    pub theta: f64,
    pub phi: f64,
    pub alpha: [f64; 2],
}

pub(crate) fn b_matrix(theta: f64, phi: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            -i * Complex64::from_polar(s, phi),
            -i * Complex64::from_polar(s, -phi),
            Complex64::new(c, 0.0),
        ],
    )
}

/// Splits a 2x2 unitary into a hopping block followed by two phases.
pub fn decompose_u2(w: &CMatrix) -> U2Factors {
    let i = Complex64::new(0.0, 1.0);
    let (w11, w12, w21) = (w[(0, 0)], w[(0, 1)], w[(1, 0)]);
    let theta = w12.norm().atan2(w11.norm());
    if w11.norm() < 1e-300 {
        return U2Factors { theta, phi: 0.0, alpha: [(i * w12).arg(), (i * w21).arg()] };
    }
    let a0 = w11.arg();
    if w12.norm() < 1e-300 {
        return U2Factors { theta, phi: 0.0, alpha: [a0, w[(1, 1)].arg()] };
    }
    let phi = wrap_angle((i * w12).arg() - a0);
    // take alpha_1 from whichever entry of its row is larger
    let a1 = if w11.norm() >= w12.norm() { w[(1, 1)].arg() } else { wrap_angle((i * w21).arg() + phi) };
    U2Factors { theta, phi, alpha: [a0, a1] }
}

/// Moves a phase layer `lambda` (acting before `gates`) to after them by
/// re-phasing every block; the layer itself is unchanged.
pub fn push_phases(gates: &mut [Gate], lambda: &[f64]) -> Result<(), CircuitError> {
    for (idx, g) in gates.iter_mut().enumerate() {
        match g {
            Gate::Phase { .. } => {}
            Gate::MatchBlock { q1, q2, theta_x, theta_z, phi } if ((*theta_x - *theta_z) / 2.0).sin().abs() < 1e-12 => {
                *phi = wrap_angle(*phi - (lambda[*q1] - lambda[*q2]));
            }
            _ => return Err(CircuitError::NotFreeFermion(idx)),
        }
    }
    Ok(())
}

/// Position-basis mode map `u` with `U a_q^dag U^dag = sum_p u_pq a_p^dag`.
pub fn one_body_of_circuit(c: &Circuit) -> Result<CMatrix, CircuitError> {
    let n = c.n_qubits();
    let mut u = CMatrix::identity(n, n);
    for (idx, g) in c.gates().iter().enumerate() {
        let local = g.one_body().ok_or(CircuitError::NotFreeFermion(idx))?;
        let (w, k) = g.wires();
        if k == 2 && w[0].abs_diff(w[1]) != 1 {
            return Err(CircuitError::NotAdjacent(idx));
        }
        // rows w[..k] of u are replaced by local * rows
        let rows: alloc::vec::Vec<_> = (0..k).map(|r| u.row(w[r]).clone_owned()).collect();
        for a in 0..k {
            let mut acc = &rows[0] * local[(a, 0)];
            for b in 1..k {
                acc += &rows[b] * local[(a, b)];
            }
            u.set_row(w[a], &acc);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use core::f64::consts::FRAC_PI_2;

    fn rebuild(f: &U2Factors) -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![
            Complex64::from_polar(1.0, f.alpha[0]),
            Complex64::from_polar(1.0, f.alpha[1]),
        ]));
        d * b_matrix(f.theta, f.phi)
    }

    #[test]
    fn decomposition_round_trips() {
        let samples = [
            b_matrix(0.3, 1.2),
            b_matrix(FRAC_PI_2, 0.4),
            b_matrix(0.0, 0.0),
            crate::linalg::propagator(
                &CMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(0.3, 0.0),
                        Complex64::new(0.2, -0.7),
                        Complex64::new(0.2, 0.7),
                        Complex64::new(-1.1, 0.0),
                    ],
                ),
                1.7,
            ),
        ];
        for w in samples {
            let f = decompose_u2(&w);
            assert!((0.0..=FRAC_PI_2 + 1e-15).contains(&f.theta));
            assert!(max_abs_diff(&rebuild(&f), &w) < 1e-13, "{:?}", f);
        }
    }

    #[test]
    fn empty_circuit_maps_to_identity() {
        assert_eq!(one_body_of_circuit(&Circuit::new(3)).unwrap(), CMatrix::identity(3, 3));
    }

    #[test]
    fn rejects_non_free_gates() {
        let c = Circuit::from_gates(3, [Gate::Cx { control: 0, target: 1 }]).unwrap();
        assert_eq!(one_body_of_circuit(&c), Err(CircuitError::NotFreeFermion(0)));
        let far = Circuit::from_gates(3, [Gate::block(0, 2, 0.1, 0.0)]).unwrap();
        assert_eq!(one_body_of_circuit(&far), Err(CircuitError::NotAdjacent(0)));
    }

    #[test]
    fn pushed_phases_commute_through_blocks() {
        let lambda = [0.4, -1.0, 0.7];
        let gates = [Gate::block(0, 1, 0.3, 0.2), Gate::block(2, 1, 1.1, -0.5)];
        let phases = lambda.iter().enumerate().map(|(q, &phi)| Gate::Phase { qubit: q, phi });
        let before = Circuit::from_gates(3, phases.clone().chain(gates)).unwrap();
        let mut moved = gates;
        push_phases(&mut moved, &lambda).unwrap();
        let after = Circuit::from_gates(3, moved.into_iter().chain(phases)).unwrap();
        let (a, b) = (one_body_of_circuit(&before).unwrap(), one_body_of_circuit(&after).unwrap());
        assert!(max_abs_diff(&a, &b) < 1e-14);
    }
}
