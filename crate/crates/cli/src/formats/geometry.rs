use std::str::FromStr;

use tdhf_core::integrals::{atomic_number, Atom, Molecule};
use tdhf_core::BOHR_IN_ANGSTROM;

use super::{content_lines, parse_err, parse_f64, FormatError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Angstrom,
    Bohr,
}

impl FromStr for Units {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "angstrom" | "ang" | "a" => Ok(Self::Angstrom),
            "bohr" | "au" | "a.u." => Ok(Self::Bohr),
            _ => Err(FormatError::Invalid(format!("unknown length unit `{s}`"))),
        }
    }
}

/// Parsed geometry before unit conversion.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryFile {
    pub units: Option<Units>,
    pub atoms: Vec<(String, [f64; 3])>,
}

/// Optional unit tag line, then `<symbol> <x> <y> <z>` per atom.
pub fn parse_geometry(text: &str) -> Result<GeometryFile, FormatError> {
    let mut lines = content_lines(text).peekable();
    let units = match lines.peek() {
        Some(&(_, l)) if !l.contains(char::is_whitespace) => {
            let (n, l) = lines.next().expect("peeked");
            Some(l.parse::<Units>().map_err(|_| parse_err(n, format!("expected `angstrom` or `bohr`, found `{l}`")))?)
        }
        _ => None,
    };
    let mut atoms = Vec::new();
    for (n, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        if tok.len() != 4 {
            return Err(parse_err(n, "expected `<symbol> <x> <y> <z>`"));
        }
        let pos = [parse_f64(tok[1], n)?, parse_f64(tok[2], n)?, parse_f64(tok[3], n)?];
        atoms.push((tok[0].to_string(), pos));
    }
    if atoms.is_empty() {
        return Err(parse_err(0, "no atoms"));
    }
    Ok(GeometryFile { units, atoms })
}

/// Reads a geometry into bohr. `units` overrides the file's tag; with
/// neither, angstrom is assumed.
pub fn load_geometry(text: &str, units: Option<Units>) -> Result<Molecule, FormatError> {
    let g = parse_geometry(text)?;
    let scale = match units.or(g.units).unwrap_or_default() {
        Units::Angstrom => 1.0 / BOHR_IN_ANGSTROM,
        Units::Bohr => 1.0,
    };
    let atoms = g
        .atoms
        .iter()
        .map(|(sym, p)| {
            let z = atomic_number(sym).ok_or_else(|| FormatError::Invalid(format!("unknown element `{sym}`")))?;
            Ok(Atom { atomic_number: z, position: p.map(|x| x * scale) })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Molecule::new(atoms).map_err(|e| FormatError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angstrom_converted() {
        let m = load_geometry("angstrom\nH 0 0 0\nH 0 0 0.734\n", None).unwrap();
        assert!((m.atoms()[1].position[2] - 1.3871).abs() < 1e-4);
        assert_eq!(m.atoms()[0].atomic_number, 1);
    }

    #[test]
    fn bohr_passes_through() {
        let m = load_geometry("# comment\nbohr\nH 0 0 0  # first\nh 0 0 1.4\n", None).unwrap();
        assert_eq!(m.atoms()[1].position, [0.0, 0.0, 1.4]);
        let flagged = load_geometry("angstrom\nH 0 0 0\nH 0 0 1.4\n", Some(Units::Bohr)).unwrap();
        assert_eq!(flagged.atoms()[1].position[2], 1.4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_geometry("").is_err());
        assert!(parse_geometry("bohr\n").is_err());
        assert!(matches!(parse_geometry("bohr\nH 0 0\n"), Err(FormatError::Parse { line: 2, .. })));
        assert!(parse_geometry("parsec\nH 0 0 0\n").is_err());
        assert!(load_geometry("bohr\nXx 0 0 0\n", None).is_err());
        assert!(parse_geometry("bohr\nH 0 0 nan\n").is_err());
    }
}
