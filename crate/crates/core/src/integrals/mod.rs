//! One- and two-electron integrals over contracted s-type Gaussians.
//!
//! Everything is in atomic units; positions are bohr. The closed forms are the
//! usual Gaussian-product-theorem expressions for s functions, with the Boys
//! function `F0` carrying the Coulomb singularity.

mod basis;
mod boys;
mod elements;

use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

pub use basis::{build_basis, BasisName, BasisSet, Primitive, Shell};
pub use boys::{boys_f0, BOYS_SERIES_THRESHOLD};
pub use elements::{atomic_number, element_symbol};

use crate::RMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegralError {
    #[error("Boys function argument must be non-negative, got {0}")]
    NegativeBoysArgument(f64),
    #[error("atomic number must be at least 1 (atom {index})")]
    InvalidAtomicNumber { index: usize },
    #[error("atoms {0} and {1} sit at the same position")]
    CoincidentAtoms(usize, usize),
    #[error("molecule has no atoms")]
    EmptyMolecule,
    #[error("unsupported basis set `{0}`")]
    UnsupportedBasis(alloc::string::String),
    #[error("element Z={0} is not available in this s-only engine")]
    UnsupportedElement(u32),
    #[error("unknown element symbol `{0}`")]
    UnknownElement(alloc::string::String),
    #[error("invalid shell: {0}")]
    InvalidShell(&'static str),
    #[error("malformed basis data at line {line}: {reason}")]
    BasisData { line: usize, reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub atomic_number: u32,
    /// Position in bohr.
    pub position: [f64; 3],
}

/// Nuclear framework.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    atoms: Vec<Atom>,
}

impl Molecule {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, IntegralError> {
        if atoms.is_empty() {
            return Err(IntegralError::EmptyMolecule);
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.atomic_number < 1 {
                return Err(IntegralError::InvalidAtomicNumber { index: i });
            }
            for (j, b) in atoms.iter().enumerate().skip(i + 1) {
                if distance2(&a.position, &b.position) == 0.0 {
                    return Err(IntegralError::CoincidentAtoms(i, j));
                }
            }
        }
        Ok(Self { atoms })
    }

    /// Builds a molecule without the physical-charge check (charges may be
    /// zero); used for test fixtures that switch off the nuclear attraction.
    pub fn with_charges(atoms: Vec<(f64, [f64; 3])>) -> ChargedFramework {
        ChargedFramework { centres: atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn translated(&self, shift: [f64; 3]) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { atomic_number: a.atomic_number, position: add(&a.position, &shift) })
            .collect();
        Self { atoms }
    }

    /// Point charges seen by the electrons.
    pub fn charges(&self) -> ChargedFramework {
        ChargedFramework { centres: self.atoms.iter().map(|a| (a.atomic_number as f64, a.position)).collect() }
    }

    /// Total nuclear charge.
    pub fn nuclear_charge(&self) -> u32 {
        self.atoms.iter().map(|a| a.atomic_number).sum()
    }
}

/// Point charges `(Z, position)` entering the nuclear-attraction integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargedFramework {
    pub centres: Vec<(f64, [f64; 3])>,
}

/// Dense symmetric two-electron tensor in chemist notation `(pq|rs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EriTensor {
    n: usize,
    data: Vec<f64>,
}

impl EriTensor {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: alloc::vec![0.0; n * n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.index(p, q, r, s)]
    }

    /// Writes `value` to all eight permutationally equivalent slots.
    pub fn set_symmetric(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let i = self.index(a, b, c, d);
            self.data[i] = value;
        }
    }

    /// Largest deviation from 8-fold permutational symmetry.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.get(p, q, r, s);
                        for w in [self.get(q, p, r, s), self.get(p, q, s, r), self.get(r, s, p, q)] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Everything the mean-field machinery needs about a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub overlap: RMatrix,
    pub hcore: RMatrix,
    pub eri: EriTensor,
    /// `<p|x|q>`, `<p|y|q>`, `<p|z|q>`.
    pub dipole: [RMatrix; 3],
    pub nuclear_repulsion: f64,
}

impl IntegralSet {
    pub fn compute(molecule: &Molecule, basis: &BasisSet) -> Self {
        Self {
            overlap: overlap_matrix(basis),
            hcore: core_hamiltonian(basis, &molecule.charges()),
            eri: eri_tensor(basis),
            dipole: dipole_matrices(basis),
            nuclear_repulsion: nuclear_repulsion(molecule),
        }
    }

    /// All-zero set of dimension `n` with identity overlap.
    pub fn empty(n: usize, nuclear_repulsion: f64) -> Self {
        Self {
            overlap: RMatrix::identity(n, n),
            hcore: RMatrix::zeros(n, n),
            eri: EriTensor::zeros(n),
            dipole: [RMatrix::zeros(n, n), RMatrix::zeros(n, n), RMatrix::zeros(n, n)],
            nuclear_repulsion,
        }
    }

    pub fn n_basis(&self) -> usize {
        self.overlap.nrows()
    }
}

#[inline]
pub(crate) fn distance2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]) * (a[k] - b[k])).sum()
}

#[inline]
fn add(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Gaussian product of two primitives `exp(-a|r-A|^2) exp(-b|r-B|^2)`.
struct Product {
    p: f64,
    centre: [f64; 3],
    prefactor: f64,
}

#[inline]
fn product(a: f64, ca: &[f64; 3], b: f64, cb: &[f64; 3]) -> Product {
    let p = a + b;
    let centre = [(a * ca[0] + b * cb[0]) / p, (a * ca[1] + b * cb[1]) / p, (a * ca[2] + b * cb[2]) / p];
    Product { p, centre, prefactor: (-a * b / p * distance2(ca, cb)).exp() }
}

fn primitive_overlap(a: f64, ca: &[f64; 3], b: f64, cb: &[f64; 3]) -> f64 {
    let g = product(a, ca, b, cb);
    (PI / g.p).powf(1.5) * g.prefactor
}

/// Contracted integral `sum_ij d_i d_j f(prim_i, prim_j)`.
fn contract2(sa: &Shell, sb: &Shell, f: impl Fn(f64, f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for pa in sa.primitives() {
        for pb in sb.primitives() {
            acc += pa.coefficient * pb.coefficient * f(pa.exponent, pb.exponent);
        }
    }
    acc
}

fn one_electron(basis: &BasisSet, f: impl Fn(&Shell, &Shell) -> f64) -> RMatrix {
    let n = basis.len();
    let mut m = RMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = f(&basis.shells()[i], &basis.shells()[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

pub fn overlap_matrix(basis: &BasisSet) -> RMatrix {
    one_electron(basis, |sa, sb| contract2(sa, sb, |a, b| primitive_overlap(a, &sa.centre, b, &sb.centre)))
}

pub fn kinetic_matrix(basis: &BasisSet) -> RMatrix {
    one_electron(basis, |sa, sb| {
        let r2 = distance2(&sa.centre, &sb.centre);
        contract2(sa, sb, |a, b| {
            let mu = a * b / (a + b);
            mu * (3.0 - 2.0 * mu * r2) * primitive_overlap(a, &sa.centre, b, &sb.centre)
        })
    })
}

/// Attraction to point charges, `-sum_C Z_C <a|1/|r-C||b>`.
pub fn attraction_matrix(basis: &BasisSet, charges: &ChargedFramework) -> RMatrix {
    one_electron(basis, |sa, sb| {
        contract2(sa, sb, |a, b| {
            let g = product(a, &sa.centre, b, &sb.centre);
            charges
                .centres
                .iter()
                .map(|(z, c)| -z * 2.0 * PI / g.p * g.prefactor * boys::f0(g.p * distance2(&g.centre, c)))
                .sum::<f64>()
        })
    })
}

/// `T + V_ne`.
pub fn core_hamiltonian(basis: &BasisSet, charges: &ChargedFramework) -> RMatrix {
    kinetic_matrix(basis) + attraction_matrix(basis, charges)
}

fn primitive_eri(
    (a, ca): (f64, &[f64; 3]),
    (b, cb): (f64, &[f64; 3]),
    (c, cc): (f64, &[f64; 3]),
    (d, cd): (f64, &[f64; 3]),
) -> f64 {
    let g1 = product(a, ca, b, cb);
    let g2 = product(c, cc, d, cd);
    let (p, q) = (g1.p, g2.p);
    let t = p * q / (p + q) * distance2(&g1.centre, &g2.centre);
    2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt()) * g1.prefactor * g2.prefactor * boys::f0(t)
}

pub fn eri_tensor(basis: &BasisSet) -> EriTensor {
    let n = basis.len();
    let shells = basis.shells();
    let mut eri = EriTensor::zeros(n);
    for p in 0..n {
        for q in 0..=p {
            let pq = p * (p + 1) / 2 + q;
            for r in 0..n {
                for s in 0..=r {
                    let rs = r * (r + 1) / 2 + s;
                    if rs > pq {
                        continue;
                    }
                    let (sp, sq, sr, ss) = (&shells[p], &shells[q], &shells[r], &shells[s]);
                    let mut acc = 0.0;
                    for gp in sp.primitives() {
                        for gq in sq.primitives() {
                            for gr in sr.primitives() {
                                for gs in ss.primitives() {
                                    acc += gp.coefficient
                                        * gq.coefficient
                                        * gr.coefficient
                                        * gs.coefficient
                                        * primitive_eri(
                                            (gp.exponent, &sp.centre),
                                            (gq.exponent, &sq.centre),
                                            (gr.exponent, &sr.centre),
                                            (gs.exponent, &ss.centre),
                                        );
                                }
                            }
                        }
                    }
                    eri.set_symmetric(p, q, r, s, acc);
                }
            }
        }
    }
    eri
}

/// `<a|x_c|b> = P_c S_ab` for every primitive pair, contracted.
pub fn dipole_matrices(basis: &BasisSet) -> [RMatrix; 3] {
    core::array::from_fn(|axis| {
        one_electron(basis, |sa, sb| {
            contract2(sa, sb, |a, b| {
                let g = product(a, &sa.centre, b, &sb.centre);
                g.centre[axis] * (PI / g.p).powf(1.5) * g.prefactor
            })
        })
    })
}

pub fn nuclear_repulsion(molecule: &Molecule) -> f64 {
    let atoms = molecule.atoms();
    let mut e = 0.0;
    for (i, a) in atoms.iter().enumerate() {
        for b in &atoms[i + 1..] {
            e += (a.atomic_number * b.atomic_number) as f64 / distance2(&a.position, &b.position).sqrt();
        }
    }
    e
}
