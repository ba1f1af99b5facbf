//! Quadrature oracle for s-Gaussian integrals.
//!
//! Overlap and kinetic integrals use a fine trapezoid rule per Cartesian
//! direction. Coulomb-type integrals write `1/r = 2/sqrt(pi) int_0^inf
//! exp(-t^2 r^2) dt`, integrate over `t` with Gauss–Legendre panels after
//! `t = u / (1 - u)`, and evaluate each per-direction Gaussian integral from
//! its quadratic form.

#![allow(dead_code)]

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use tdhf_core::integrals::{BasisSet, Molecule};
use tdhf_core::RMatrix;

/// Unnormalised primitive `c exp(-a |r - A|^2)`.
#[derive(Clone, Copy, Debug)]
pub struct Prim {
    pub a: f64,
    pub c: f64,
    pub centre: [f64; 3],
}

pub fn contracted(basis: &BasisSet) -> Vec<Vec<Prim>> {
    basis
        .shells()
        .iter()
        .map(|s| s.primitives().iter().map(|p| Prim { a: p.exponent, c: p.coefficient, centre: s.centre }).collect())
        .collect()
}

fn trapezoid(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut acc = 0.5 * (f(lo) + f(hi));
    for k in 1..n {
        acc += f(lo + k as f64 * h);
    }
    acc * h
}

fn window(x: &[f64]) -> (f64, f64) {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min) - 14.0;
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 14.0;
    (lo, hi)
}

const GRID: usize = 4000;

fn overlap_1d(a: f64, ax: f64, b: f64, bx: f64) -> f64 {
    let (lo, hi) = window(&[ax, bx]);
    trapezoid(lo, hi, GRID, |x| (-a * (x - ax).powi(2) - b * (x - bx).powi(2)).exp())
}

/// `int g_a d^2/dx^2 g_b dx`.
fn laplacian_1d(a: f64, ax: f64, b: f64, bx: f64) -> f64 {
    let (lo, hi) = window(&[ax, bx]);
    trapezoid(lo, hi, GRID, |x| {
        let gb = (-b * (x - bx).powi(2)).exp();
        (-a * (x - ax).powi(2)).exp() * (4.0 * b * b * (x - bx).powi(2) - 2.0 * b) * gb
    })
}

pub fn prim_overlap(p: &Prim, q: &Prim) -> f64 {
    p.c * q.c * (0..3).map(|d| overlap_1d(p.a, p.centre[d], q.a, q.centre[d])).product::<f64>()
}

pub fn prim_kinetic(p: &Prim, q: &Prim) -> f64 {
    let s: Vec<f64> = (0..3).map(|d| overlap_1d(p.a, p.centre[d], q.a, q.centre[d])).collect();
    let l: Vec<f64> = (0..3).map(|d| laplacian_1d(p.a, p.centre[d], q.a, q.centre[d])).collect();
    -0.5 * p.c * q.c * (l[0] * s[1] * s[2] + s[0] * l[1] * s[2] + s[0] * s[1] * l[2])
}

/// `int exp(-x^T A x + b^T x + c) dx` over `R^k`, `k = 1, 2`.
fn gaussian_1(a: f64, b: f64, c: f64) -> f64 {
    (PI / a).sqrt() * (b * b / (4.0 * a) + c).exp()
}

fn gaussian_2(a: [[f64; 2]; 2], b: [f64; 2], c: f64) -> f64 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
    let quad = b[0] * (inv[0][0] * b[0] + inv[0][1] * b[1]) + b[1] * (inv[1][0] * b[0] + inv[1][1] * b[1]);
    PI / det.sqrt() * (quad / 4.0 + c).exp()
}

/// `int_0^inf f(t) dt` on the unit interval with panel breaks.
fn t_integral(f: impl Fn(f64) -> f64) -> f64 {
    let gl = GaussLegendre::new(64).expect("degree >= 2");
    let breaks = [0.0, 0.2, 0.5, 0.8, 0.95, 0.99, 1.0];
    breaks
        .windows(2)
        .map(|w| {
            gl.integrate(w[0], w[1], |u| {
                let t = u / (1.0 - u);
                f(t) / ((1.0 - u) * (1.0 - u))
            })
        })
        .sum()
}

/// `<p| 1/|r - C| |q>`.
pub fn prim_coulomb_point(p: &Prim, q: &Prim, c: [f64; 3]) -> f64 {
    let f = |t: f64| {
        (0..3)
            .map(|d| {
                let (x, y, z) = (p.centre[d], q.centre[d], c[d]);
                let t2 = t * t;
                gaussian_1(
                    p.a + q.a + t2,
                    2.0 * (p.a * x + q.a * y + t2 * z),
                    -(p.a * x * x + q.a * y * y + t2 * z * z),
                )
            })
            .product::<f64>()
    };
    p.c * q.c * 2.0 / PI.sqrt() * t_integral(f)
}

/// `(pq|rs)` in chemists' notation.
pub fn prim_eri(p: &Prim, q: &Prim, r: &Prim, s: &Prim) -> f64 {
    let (a1, a2) = (p.a + q.a, r.a + s.a);
    let f = |t: f64| {
        let t2 = t * t;
        (0..3)
            .map(|d| {
                let b1 = 2.0 * (p.a * p.centre[d] + q.a * q.centre[d]);
                let b2 = 2.0 * (r.a * r.centre[d] + s.a * s.centre[d]);
                let c = -(p.a * p.centre[d].powi(2)
                    + q.a * q.centre[d].powi(2)
                    + r.a * r.centre[d].powi(2)
                    + s.a * s.centre[d].powi(2));
                gaussian_2([[a1 + t2, -t2], [-t2, a2 + t2]], [b1, b2], c)
            })
            .product::<f64>()
    };
    p.c * q.c * r.c * s.c * 2.0 / PI.sqrt() * t_integral(f)
}

fn contract2(u: &[Prim], v: &[Prim], f: impl Fn(&Prim, &Prim) -> f64) -> f64 {
    u.iter().flat_map(|p| v.iter().map(move |q| (p, q))).map(|(p, q)| f(p, q)).sum()
}

pub fn overlap(basis: &BasisSet) -> RMatrix {
    let sh = contracted(basis);
    RMatrix::from_fn(sh.len(), sh.len(), |i, j| contract2(&sh[i], &sh[j], prim_overlap))
}

pub fn hcore(basis: &BasisSet, mol: &Molecule) -> RMatrix {
    let sh = contracted(basis);
    RMatrix::from_fn(sh.len(), sh.len(), |i, j| {
        let t = contract2(&sh[i], &sh[j], prim_kinetic);
        let v: f64 = mol
            .atoms()
            .iter()
            .map(|at| {
                -(at.atomic_number as f64) * contract2(&sh[i], &sh[j], |p, q| prim_coulomb_point(p, q, at.position))
            })
            .sum();
        t + v
    })
}

pub fn eri(basis: &BasisSet, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let sh = contracted(basis);
    let mut acc = 0.0;
    for p in &sh[i] {
        for q in &sh[j] {
            for r in &sh[k] {
                for s in &sh[l] {
                    acc += prim_eri(p, q, r, s);
                }
            }
        }
    }
    acc
}

/// Closed-shell minimal-basis homonuclear diatomic: the occupied orbital is
/// fixed by symmetry, `sigma = (phi_1 + phi_2) / sqrt(2 + 2 S_12)`, so
/// `E = 2 h_gg + (gg|gg) + e_nuc` with every integral from quadrature.
pub fn symmetric_dimer_energy(basis: &BasisSet, mol: &Molecule) -> f64 {
    let s = overlap(basis);
    let h = hcore(basis, mol);
    let n2 = 1.0 / (2.0 + 2.0 * s[(0, 1)]);
    let h_gg = n2 * (h[(0, 0)] + h[(1, 1)] + 2.0 * h[(0, 1)]);
    let mut j_gg = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    j_gg += eri(basis, i, j, k, l);
                }
            }
        }
    }
    j_gg *= n2 * n2;
    let atoms = mol.atoms();
    let r: f64 = (0..3).map(|d| (atoms[0].position[d] - atoms[1].position[d]).powi(2)).sum::<f64>().sqrt();
    let e_nuc = (atoms[0].atomic_number * atoms[1].atomic_number) as f64 / r;
    2.0 * h_gg + j_gg + e_nuc
}
