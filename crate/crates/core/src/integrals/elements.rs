//! Element symbols.

const SYMBOLS: [&str; 18] =
    ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar"];

/// Case-insensitive symbol lookup.
pub fn atomic_number(symbol: &str) -> Option<u32> {
    SYMBOLS.iter().position(|s| s.eq_ignore_ascii_case(symbol)).map(|i| i as u32 + 1)
}

pub fn element_symbol(z: u32) -> Option<&'static str> {
    SYMBOLS.get((z as usize).checked_sub(1)?).copied()
}
