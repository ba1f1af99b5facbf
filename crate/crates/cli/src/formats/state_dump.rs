use std::fmt::Write;

use tdhf_core::simulator::Statevector;

/// One `<bitstring> <re> <im>` line per amplitude above `threshold`, qubit 0
/// leftmost.
pub fn write_state(state: &Statevector, threshold: f64) -> String {
    let n = state.n_qubits();
    let mut out = String::new();
    for (i, a) in state.significant_amplitudes(threshold) {
        let _ = writeln!(out, "{i:0n$b} {:.16e} {:.16e}", a.re, a.im);
    }
    out
}
