//! Hybrid quantum/classical time-dependent Hartree–Fock.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every numerical piece of
//! the pipeline:
//!
//! - [`integrals`]: s-type contracted Gaussian integrals and basis data.
//! - [`scf`]: restricted closed-shell Hartree–Fock ground state.
//! - [`circuit`]: match-block/FSWAP gate IR, swap-network Trotter steps, YBE
//!   reflection, and the two compression routes.
//! - [`simulator`]: dense statevector engine and measurements.
//! - [`tdhf`]: laser pulse, mean-field assembly, the hybrid measure/rebuild/
//!   propagate loop, and the exact matrix propagator used as its oracle.
//!
//! File formats and the command line live in the companion `tdhf` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod circuit;
pub mod integrals;
pub mod linalg;
pub mod scf;
pub mod simulator;
pub mod tdhf;

pub use num_complex::Complex64;

/// Real dense matrix used throughout.
pub type RMatrix = nalgebra::DMatrix<f64>;
/// Complex dense matrix used throughout.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

/// Angstrom per bohr (CODATA 2018).
pub const BOHR_IN_ANGSTROM: f64 = 0.529_177_210_903;
