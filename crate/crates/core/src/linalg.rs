//! Exact rank computation for sparse rational linear systems.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, BigRational)>;

/// Incremental row-echelon basis over ℚ.
///
/// Rows are reduced against the stored pivots as they are inserted, so the rank is
/// available at any time without a separate elimination pass.
#[derive(Debug, Default)]
pub struct EchelonBasis {
    pivots: BTreeMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts a row; returns `true` when it was independent of the rows seen so far.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|(_, v)| !v.is_zero());
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(pivot) => {
                    // pivot rows are monic
                    row = axpy(&row, &-lead_val, pivot);
                }
                None => {
                    let inv = lead_val.recip();
                    for (_, v) in row.iter_mut() {
                        *v *= &inv;
                    }
                    debug_assert!(row[0].1.is_one());
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }
}

/// `x + k·y` for sorted sparse rows.
fn axpy(x: &SparseRow, k: &BigRational, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, k * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + k * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a list of sparse rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut basis = EchelonBasis::new();
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}
