use std::fmt::Write;

use tdhf_core::integrals::IntegralSet;

use super::{content_lines, parse_err, parse_f64, parse_usize, FormatError};

/// Integrals plus the electron count from the header.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralFile {
    pub integrals: IntegralSet,
    pub n_elec: usize,
}

enum Section {
    Main,
    Dipole(usize),
    Overlap,
}

fn header_value<'a>(tokens: &[&'a str], key: &str, line: usize) -> Result<&'a str, FormatError> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| parse_err(line, format!("header is missing {key}=")))
}

/// Reads the header `M= NELEC= ENUC=`, then `<value> p q r s` records
/// (1-based; `r = s = 0` for one-electron terms, all zero for the nuclear
/// repulsion), then optional `DIPOLE X|Y|Z` and `OVERLAP` sections of
/// `<value> p q` records. Overlap defaults to the identity.
pub fn read_fcidump(text: &str) -> Result<IntegralFile, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
    let tokens: Vec<&str> = header.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
    let m = parse_usize(header_value(&tokens, "M", hl)?, hl)?;
    let n_elec = parse_usize(header_value(&tokens, "NELEC", hl)?, hl)?;
    let enuc = parse_f64(header_value(&tokens, "ENUC", hl)?, hl)?;
    if m == 0 {
        return Err(parse_err(hl, "M must be positive"));
    }
    let mut ints = IntegralSet::empty(m, enuc);
    let mut section = Section::Main;
    let index = |tok: &str, n: usize| -> Result<usize, FormatError> {
        let i = parse_usize(tok, n)?;
        if i > m {
            return Err(parse_err(n, format!("orbital index {i} exceeds M={m}")));
        }
        Ok(i)
    };
    for (n, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        match tok[0].to_ascii_uppercase().as_str() {
            "DIPOLE" => {
                let axis = match tok.get(1).map(|s| s.to_ascii_uppercase()) {
                    Some(a) if a == "X" => 0,
                    Some(a) if a == "Y" => 1,
                    Some(a) if a == "Z" => 2,
                    _ => return Err(parse_err(n, "expected `DIPOLE X|Y|Z`")),
                };
                section = Section::Dipole(axis);
                continue;
            }
            "OVERLAP" => {
                ints.overlap.fill(0.0);
                section = Section::Overlap;
                continue;
            }
            _ => {}
        }
        let value = parse_f64(tok[0], n)?;
        match section {
            Section::Main => {
                if tok.len() != 5 {
                    return Err(parse_err(n, "expected `<value> p q r s`"));
                }
                let idx = [index(tok[1], n)?, index(tok[2], n)?, index(tok[3], n)?, index(tok[4], n)?];
                match idx {
                    [0, 0, 0, 0] => ints.nuclear_repulsion = value,
                    [p, q, 0, 0] if p > 0 && q > 0 => {
                        ints.hcore[(p - 1, q - 1)] = value;
                        ints.hcore[(q - 1, p - 1)] = value;
                    }
                    [p, q, r, s] if p > 0 && q > 0 && r > 0 && s > 0 => {
                        ints.eri.set_symmetric(p - 1, q - 1, r - 1, s - 1, value)
                    }
                    _ => return Err(parse_err(n, "reserved index pattern")),
                }
            }
            Section::Dipole(_) | Section::Overlap => {
                if tok.len() != 3 {
                    return Err(parse_err(n, "expected `<value> p q`"));
                }
                let (p, q) = (index(tok[1], n)?, index(tok[2], n)?);
                if p == 0 || q == 0 {
                    return Err(parse_err(n, "indices are 1-based"));
                }
                let target = match section {
                    Section::Dipole(axis) => &mut ints.dipole[axis],
                    _ => &mut ints.overlap,
                };
                target[(p - 1, q - 1)] = value;
                target[(q - 1, p - 1)] = value;
            }
        }
    }
    Ok(IntegralFile { integrals: ints, n_elec })
}

/// Writes every symmetry-unique non-zero integral with 17 significant digits.
pub fn write_fcidump(ints: &IntegralSet, n_elec: usize) -> String {
    let m = ints.n_basis();
    let mut out = String::new();
    let _ = writeln!(out, "M={m} NELEC={n_elec} ENUC={:.16e}", ints.nuclear_repulsion);
    let pair = |p: usize, q: usize| p * (p + 1) / 2 + q;
    for p in 0..m {
        for q in 0..=p {
            for r in 0..m {
                for s in 0..=r {
                    if pair(r, s) > pair(p, q) {
                        continue;
                    }
                    let v = ints.eri.get(p, q, r, s);
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:.16e} {} {} {} {}", p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for p in 0..m {
        for q in 0..=p {
            let v = ints.hcore[(p, q)];
            if v != 0.0 {
                let _ = writeln!(out, "{v:.16e} {} {} 0 0", p + 1, q + 1);
            }
        }
    }
    let _ = writeln!(out, "{:.16e} 0 0 0 0", ints.nuclear_repulsion);
    let mut lower = |name: &str, mat: &tdhf_core::RMatrix| {
        let _ = writeln!(out, "{name}");
        for p in 0..m {
            for q in 0..=p {
                if mat[(p, q)] != 0.0 {
                    let _ = writeln!(out, "{:.16e} {} {}", mat[(p, q)], p + 1, q + 1);
                }
            }
        }
    };
    for (axis, d) in ["X", "Y", "Z"].iter().zip(&ints.dipole) {
        lower(&format!("DIPOLE {axis}"), d);
    }
    lower("OVERLAP", &ints.overlap);
    out
}
