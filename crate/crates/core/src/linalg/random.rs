use std::collections::HashSet;

use rand::Rng;

use super::SparseMatrix;
use crate::seed::{rng_for, LABEL_RANDOM_MATRIX};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomValues {
    /// every stored entry is 1, like a biadjacency matrix
    Binary,
    /// stored entries uniform in [0, 1)
    Uniform,
}

/// Random sparse matrix with `round(density · rows · cols)` stored entries
/// at uniformly chosen distinct positions. Deterministic in `seed`.
pub fn random_sparse(
    n_rows: usize,
    n_cols: usize,
    density: f64,
    seed: u64,
    values: RandomValues,
) -> Result<SparseMatrix> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "density {density} outside [0, 1]"
        )));
    }
    let total = n_rows
        .checked_mul(n_cols)
        .ok_or_else(|| Error::InvalidArgument("matrix too large".into()))?;
    let target = ((density * total as f64).round() as usize).min(total);
    let mut rng = rng_for(seed, LABEL_RANDOM_MATRIX);
    let mut positions: Vec<usize> = if 2 * target > total {
        // dense enough that rejection sampling would stall; shuffle instead
        let mut all: Vec<usize> = (0..total).collect();
        for i in 0..target {
            let j = rng.random_range(i..total);
            all.swap(i, j);
        }
        all.truncate(target);
        all
    } else {
        let mut seen = HashSet::with_capacity(target);
        let mut picked = Vec::with_capacity(target);
        while picked.len() < target {
            let p = rng.random_range(0..total);
            if seen.insert(p) {
                picked.push(p);
            }
        }
        picked
    };
    positions.sort_unstable();
    let triplets: Vec<(usize, usize, f64)> = positions
        .into_iter()
        .map(|p| {
            let v = match values {
                RandomValues::Binary => 1.0,
                RandomValues::Uniform => rng.random::<f64>(),
            };
            (p / n_cols, p % n_cols, v)
        })
        .collect();
    SparseMatrix::from_triplets(n_rows, n_cols, triplets)
}
