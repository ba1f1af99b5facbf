//! Brickwork swap network on a linear chain.

use alloc::vec::Vec;

/// Rows of adjacent position pairs and the label pairs they bring together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSchedule {
    /// Row `r` holds pairs `(k, k+1)` with `k = r mod 2, r mod 2 + 2, ...`.
    pub layers: Vec<Vec<(usize, usize)>>,
    /// Label pairs `(a, b)` (`a < b`) in meeting order, starting from the identity labelling.
    pub realized_pairs: Vec<(usize, usize)>,
    /// Labelling after the last row.
    pub final_permutation: Vec<usize>,
}

pub(crate) fn brickwork_rows(n: usize) -> Vec<Vec<(usize, usize)>> {
    (0..n)
        .map(|r| (r % 2..n.saturating_sub(1)).step_by(2).map(|k| (k, k + 1)).collect::<Vec<_>>())
        .filter(|row| !row.is_empty())
        .collect()
}

/// `n` alternating rows; every label meets every other exactly once and the
/// order ends reversed.
pub fn pair_schedule(n: usize) -> PairSchedule {
    let layers = brickwork_rows(n);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut realized_pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for row in &layers {
        for &(k, l) in row {
            let (a, b) = (labels[k], labels[l]);
            realized_pairs.push((a.min(b), a.max(b)));
            labels.swap(k, l);
        }
    }
    PairSchedule { layers, realized_pairs, final_permutation: labels }
}
