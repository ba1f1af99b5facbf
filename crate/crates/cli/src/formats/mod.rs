//! Text formats read and written by the command line.

mod circuit_text;
mod fcidump;
mod geometry;
mod state_dump;
mod trajectory_csv;

pub use circuit_text::{read_circuit, write_circuit};
pub use fcidump::{read_fcidump, write_fcidump, IntegralFile};
pub use geometry::{load_geometry, parse_geometry, GeometryFile, Units};
pub use state_dump::write_state;
pub use trajectory_csv::{downsample, read_trajectory, write_trajectory};

/// Malformed input, with the 1-based line where it was detected.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// Non-empty lines with `#` comments stripped, numbered from 1.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn parse_f64(tok: &str, line: usize) -> Result<f64, FormatError> {
    let v: f64 = tok.parse().map_err(|_| parse_err(line, format!("expected a number, found `{tok}`")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value `{tok}`")));
    }
    Ok(v)
}

pub(crate) fn parse_usize(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}
