use std::io::{Read, Write};

use tdhf_core::tdhf::{Trajectory, TrajectoryRow};

use super::FormatError;

const FIXED_COLUMNS: usize = 5;

fn csv_err(e: csv::Error) -> FormatError {
    FormatError::Invalid(e.to_string())
}

/// Writes `t,e_field,energy,energy_with_field,norm,occ_1..occ_k`, numbers in
/// scientific notation with 12 significant digits.
pub fn write_trajectory<W: Write>(traj: &Trajectory, out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(traj.column_names()).map_err(csv_err)?;
    for row in &traj.rows {
        w.write_record(row.values().iter().map(|v| format!("{v:.11e}"))).map_err(csv_err)?;
    }
    w.flush().map_err(|e| FormatError::Invalid(e.to_string()))
}

/// Reads a file written by [`write_trajectory`], rejecting non-finite values
/// and rows whose width differs from the header.
pub fn read_trajectory<R: Read>(input: R) -> Result<Trajectory, FormatError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    let width = header.len();
    if width < FIXED_COLUMNS
        || header.iter().take(FIXED_COLUMNS).ne(["t", "e_field", "energy", "energy_with_field", "norm"])
    {
        return Err(FormatError::Invalid("unexpected trajectory header".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(csv_err)?;
        if rec.len() != width {
            return Err(super::parse_err(line, format!("expected {width} columns, found {}", rec.len())));
        }
        let v = rec.iter().map(|t| super::parse_f64(t.trim(), line)).collect::<Result<Vec<_>, _>>()?;
        rows.push(TrajectoryRow {
            t: v[0],
            e_field: v[1],
            energy: v[2],
            energy_with_field: v[3],
            norm: v[4],
            occupations: v[FIXED_COLUMNS..].to_vec(),
        });
    }
    Ok(Trajectory { rows })
}

/// Keeps every k-th row, with k chosen so at most `max_rows` remain (plus
/// the final row, which is always kept).
pub fn downsample(traj: &Trajectory, max_rows: usize) -> Trajectory {
    let n = traj.len();
    if n <= max_rows || max_rows < 2 {
        return traj.clone();
    }
    let stride = (n - 1).div_ceil(max_rows - 1);
    let mut rows: Vec<TrajectoryRow> = traj.rows.iter().step_by(stride).cloned().collect();
    if !(n - 1).is_multiple_of(stride) {
        rows.push(traj.rows[n - 1].clone());
    }
    Trajectory { rows }
}
