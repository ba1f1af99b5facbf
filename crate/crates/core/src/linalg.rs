//! Small dense helpers on top of `nalgebra`.

use crate::{CMatrix, Complex64, RMatrix};
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

/// `S^{-1/2}` of a symmetric positive-definite matrix.
///
/// Fails with the smallest eigenvalue when it is below `min_eigenvalue`.
pub fn inverse_sqrt_spd(s: &RMatrix, min_eigenvalue: f64) -> Result<RMatrix, f64> {
    let eig = s.clone().symmetric_eigen();
    let smallest = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smallest > min_eigenvalue) {
        return Err(smallest);
    }
    let n = s.nrows();
    let mut out = RMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        out += (v * v.transpose()) / lambda.sqrt();
    }
    Ok(out)
}

/// Eigenvalues (ascending) and matching eigenvector columns of a real symmetric matrix.
pub fn sorted_symmetric_eigen(m: &RMatrix) -> (alloc::vec::Vec<f64>, RMatrix) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: alloc::vec::Vec<usize> = (0..n).collect();
    // stable sort keeps index order on exact ties
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = RMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `exp(-i t H)` for Hermitian `H`, via eigendecomposition.
pub fn propagator(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let phase = Complex64::from_polar(1.0, -lambda * t);
        out += (v * v.adjoint()) * phase;
    }
    out
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |U†U - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Distance between two matrices after quotienting out a global phase.
///
/// The phase is fixed by aligning the largest-magnitude element of `a` with
/// the same element of `b`.
pub fn phase_aligned_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let (idx, _) =
        a.iter().enumerate().fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
    let ratio = b[idx] / a[idx];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b.iter()).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}
