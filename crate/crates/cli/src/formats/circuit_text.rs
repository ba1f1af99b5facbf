use std::fmt::Write;

use tdhf_core::circuit::{Circuit, Gate, SwapConvention};

use super::{content_lines, parse_err, parse_f64, parse_usize, FormatError};

/// Parses `QUBITS n`, optional `PERM_IN` / `PERM` label lines, then one gate
/// per line. Qubits are 0-based, qubit 0 is the most significant bit.
///
/// Gate lines: `MB q1 q2 theta_x theta_z [phi]`, `FSWAP q1 q2 theta
/// [fermionic|iswap]`, `P q phi`, `CX qc qt`, `RX q theta`, `RZ q theta`.
pub fn read_circuit(text: &str) -> Result<Circuit, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing `QUBITS <n>` header"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        [tag, n] if tag.eq_ignore_ascii_case("QUBITS") => parse_usize(n, hl)?,
        _ => return Err(parse_err(hl, "expected `QUBITS <n>`")),
    };
    let mut circuit = Circuit::new(n);
    let mut perm_in = None;
    let mut perm_out = None;
    for (ln, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        let tag = tok[0].to_ascii_uppercase();
        let args = &tok[1..];
        let want = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(parse_err(ln, format!("`{tag}` takes {k} arguments, found {}", args.len())))
            }
        };
        let q = |i: usize| parse_usize(args[i], ln);
        let a = |i: usize| parse_f64(args[i], ln);
        let gate = match tag.as_str() {
            "PERM_IN" | "PERM" => {
                let p = args.iter().map(|t| parse_usize(t, ln)).collect::<Result<Vec<_>, _>>()?;
                if tag == "PERM" {
                    perm_out = Some(p)
                } else {
                    perm_in = Some(p)
                }
                continue;
            }
            "MB" => {
                if args.len() != 4 && args.len() != 5 {
                    return Err(parse_err(ln, "`MB` takes q1 q2 theta_x theta_z [phi]"));
                }
                let phi = if args.len() == 5 { a(4)? } else { 0.0 };
                Gate::MatchBlock { q1: q(0)?, q2: q(1)?, theta_x: a(2)?, theta_z: a(3)?, phi }
            }
            "FSWAP" => {
                let convention = match args.get(3).map(|s| s.to_ascii_lowercase()) {
                    None => SwapConvention::ISwap,
                    Some(s) if s == "iswap" => SwapConvention::ISwap,
                    Some(s) if s == "fermionic" => SwapConvention::Fermionic,
                    Some(s) => return Err(parse_err(ln, format!("unknown FSWAP convention `{s}`"))),
                };
                if args.len() != 3 && args.len() != 4 {
                    return Err(parse_err(ln, "`FSWAP` takes q1 q2 theta [fermionic|iswap]"));
                }
                Gate::Fswap { q1: q(0)?, q2: q(1)?, theta: a(2)?, convention }
            }
            "P" => {
                want(2)?;
                Gate::Phase { qubit: q(0)?, phi: a(1)? }
            }
            "CX" => {
                want(2)?;
                Gate::Cx { control: q(0)?, target: q(1)? }
            }
            "RX" => {
                want(2)?;
                Gate::Rx { qubit: q(0)?, theta: a(1)? }
            }
            "RZ" => {
                want(2)?;
                Gate::Rz { qubit: q(0)?, theta: a(1)? }
            }
            _ => return Err(parse_err(ln, format!("unknown gate tag `{}`", tok[0]))),
        };
        circuit.push(gate).map_err(|e| parse_err(ln, e.to_string()))?;
    }
    if perm_in.is_some() || perm_out.is_some() {
        let input = perm_in.unwrap_or_else(|| (0..n).collect());
        let output = perm_out.unwrap_or_else(|| input.clone());
        circuit = circuit.with_labels(input, output).map_err(|e| FormatError::Invalid(e.to_string()))?;
    }
    Ok(circuit)
}

/// Inverse of [`read_circuit`]; angles carry 17 significant digits.
pub fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "QUBITS {}", c.n_qubits());
    let identity: Vec<usize> = (0..c.n_qubits()).collect();
    if c.input_permutation() != identity.as_slice() || c.permutation() != identity.as_slice() {
        let join = |p: &[usize]| p.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "PERM_IN {}", join(c.input_permutation()));
        let _ = writeln!(out, "PERM {}", join(c.permutation()));
    }
    for g in c.gates() {
        let _ = match *g {
            Gate::MatchBlock { q1, q2, theta_x, theta_z, phi: 0.0 } => {
                writeln!(out, "MB {q1} {q2} {theta_x:.16e} {theta_z:.16e}")
            }
            Gate::MatchBlock { q1, q2, theta_x, theta_z, phi } => {
                writeln!(out, "MB {q1} {q2} {theta_x:.16e} {theta_z:.16e} {phi:.16e}")
            }
            Gate::Fswap { q1, q2, theta, convention: SwapConvention::ISwap } => {
                writeln!(out, "FSWAP {q1} {q2} {theta:.16e}")
            }
            Gate::Fswap { q1, q2, theta, convention: SwapConvention::Fermionic } => {
                writeln!(out, "FSWAP {q1} {q2} {theta:.16e} fermionic")
            }
            Gate::Phase { qubit, phi } => writeln!(out, "P {qubit} {phi:.16e}"),
            Gate::Cx { control, target } => writeln!(out, "CX {control} {target}"),
            Gate::Rx { qubit, theta } => writeln!(out, "RX {qubit} {theta:.16e}"),
            Gate::Rz { qubit, theta } => writeln!(out, "RZ {qubit} {theta:.16e}"),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Circuit {
        Circuit::from_gates(
            3,
            [
                Gate::MatchBlock { q1: 0, q2: 1, theta_x: 0.1, theta_z: -0.2, phi: 0.0 },
                Gate::MatchBlock { q1: 1, q2: 2, theta_x: 1.0 / 3.0, theta_z: 0.5, phi: 0.7 },
                Gate::Fswap { q1: 1, q2: 2, theta: 0.3, convention: SwapConvention::Fermionic },
                Gate::Fswap { q1: 0, q2: 1, theta: 0.4, convention: SwapConvention::ISwap },
                Gate::Phase { qubit: 2, phi: -1.25 },
                Gate::Cx { control: 2, target: 0 },
                Gate::Rx { qubit: 0, theta: std::f64::consts::PI },
                Gate::Rz { qubit: 1, theta: 1e-17 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let c = sample();
        assert_eq!(read_circuit(&write_circuit(&c)).unwrap(), c);
        let labelled = c.with_labels(vec![0, 1, 2], vec![2, 0, 1]).unwrap();
        let text = write_circuit(&labelled);
        assert!(text.contains("PERM 2 0 1"));
        assert_eq!(read_circuit(&text).unwrap(), labelled);
    }

    #[test]
    fn default_fswap_is_iswap_type() {
        let c = read_circuit("QUBITS 2\nFSWAP 0 1 0.5\n").unwrap();
        assert!(matches!(c.gates()[0], Gate::Fswap { convention: SwapConvention::ISwap, .. }));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let e = read_circuit("QUBITS 2\n# note\nTOFFOLI 0 1 2\n").unwrap_err();
        assert_eq!(e, parse_err(3, "unknown gate tag `TOFFOLI`"));
        assert!(read_circuit("").is_err());
        assert!(read_circuit("QUBIT 2\n").is_err());
        assert!(read_circuit("QUBITS 2\nMB 0 1 0.1\n").is_err());
        assert!(read_circuit("QUBITS 2\nMB 0 2 0.1 0.2\n").is_err());
        assert!(read_circuit("QUBITS 2\nP 0 x\n").is_err());
        assert!(read_circuit("QUBITS 2\nFSWAP 0 1 0.1 bosonic\n").is_err());
        assert!(read_circuit("QUBITS 2\nPERM 0 0\n").is_err());
    }
}
