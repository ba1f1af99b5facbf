//! Contracted s shells and the bundled basis library.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::str::FromStr;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

use super::{IntegralError, Molecule};

const LIBRARY: &str = include_str!("../../data/basis.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisName {
    Sto3g,
    SixThirtyOneG,
}

impl BasisName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sto3g => "sto-3g",
            Self::SixThirtyOneG => "6-31g",
        }
    }
}

impl FromStr for BasisName {
    type Err = IntegralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sto-3g" | "sto3g" => Ok(Self::Sto3g),
            "6-31g" | "631g" => Ok(Self::SixThirtyOneG),
            _ => Err(IntegralError::UnsupportedBasis(s.to_string())),
        }
    }
}

/// A primitive with its normalisation folded into `coefficient`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub exponent: f64,
    pub coefficient: f64,
}

/// Contracted s function normalised to unit self-overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub centre: [f64; 3],
    primitives: Vec<Primitive>,
}

impl Shell {
    /// `raw` holds `(exponent, coefficient)` pairs with coefficients referring
    /// to normalised primitives.
    pub fn new(centre: [f64; 3], raw: &[(f64, f64)]) -> Result<Self, IntegralError> {
        if raw.is_empty() {
            return Err(IntegralError::InvalidShell("no primitives"));
        }
        if raw.iter().any(|&(a, _)| !(a > 0.0) || !a.is_finite()) {
            return Err(IntegralError::InvalidShell("exponents must be positive"));
        }
        let mut primitives: Vec<Primitive> =
            raw.iter().map(|&(a, d)| Primitive { exponent: a, coefficient: d * (2.0 * a / PI).powf(0.75) }).collect();
        let mut self_overlap = 0.0;
        for p in &primitives {
            for q in &primitives {
                self_overlap += p.coefficient * q.coefficient * (PI / (p.exponent + q.exponent)).powf(1.5);
            }
        }
        if !(self_overlap > 0.0) {
            return Err(IntegralError::InvalidShell("vanishing contraction"));
        }
        let scale = 1.0 / self_overlap.sqrt();
        for p in &mut primitives {
            p.coefficient *= scale;
        }
        Ok(Self { centre, primitives })
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    shells: Vec<Shell>,
}

impl BasisSet {
    pub fn new(shells: Vec<Shell>) -> Self {
        Self { shells }
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }
}

/// Shell templates `(exponent, coefficient)` for one element in one basis.
fn library_shells(name: BasisName, symbol: &str) -> Result<Vec<Vec<(f64, f64)>>, IntegralError> {
    let mut in_block = false;
    let mut shells: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut remaining = 0usize;
    for (idx, raw) in LIBRARY.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason| IntegralError::BasisData { line: idx + 1, reason };
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap_or("");
        if head == "basis" {
            if remaining != 0 {
                return Err(bad("shell ended early"));
            }
            let b = tok.next().ok_or(bad("missing basis name"))?;
            let el = tok.next().ok_or(bad("missing element"))?;
            if in_block {
                break;
            }
            in_block = b.eq_ignore_ascii_case(name.as_str()) && el.eq_ignore_ascii_case(symbol);
            continue;
        }
        if !in_block {
            continue;
        }
        if head == "S" {
            if remaining != 0 {
                return Err(bad("shell ended early"));
            }
            remaining = tok.next().and_then(|t| t.parse().ok()).ok_or(bad("bad primitive count"))?;
            shells.push(Vec::with_capacity(remaining));
            continue;
        }
        let a: f64 = head.parse().map_err(|_| bad("bad exponent"))?;
        let d: f64 = tok.next().and_then(|t| t.parse().ok()).ok_or(bad("bad coefficient"))?;
        if remaining == 0 {
            return Err(bad("primitive outside a shell"));
        }
        shells.last_mut().expect("shell opened").push((a, d));
        remaining -= 1;
    }
    if remaining != 0 {
        return Err(IntegralError::BasisData { line: LIBRARY.lines().count(), reason: "truncated shell" });
    }
    Ok(shells)
}

/// Places the library shells of `name` on every atom.
pub fn build_basis(molecule: &Molecule, name: BasisName) -> Result<BasisSet, IntegralError> {
    let mut shells = Vec::new();
    for atom in molecule.atoms() {
        let symbol =
            super::element_symbol(atom.atomic_number).ok_or(IntegralError::UnsupportedElement(atom.atomic_number))?;
        let templates = library_shells(name, symbol)?;
        if templates.is_empty() {
            return Err(IntegralError::UnsupportedElement(atom.atomic_number));
        }
        for t in &templates {
            shells.push(Shell::new(atom.position, t)?);
        }
    }
    Ok(BasisSet::new(shells))
}
