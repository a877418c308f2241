use rayon::prelude::*;

use super::{DenseMatrix, Parallelism};
use crate::{Error, Result};

/// Compressed sparse row matrix of `f64`.
///
/// ```text
/// row_offsets.len() = n_rows + 1, row_offsets[0] = 0, row_offsets[n_rows] = nnz
/// col_indices[row_offsets[i]..row_offsets[i + 1]] strictly increasing, < n_cols
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::MalformedMatrix(msg));
        if row_offsets.len() != n_rows + 1 {
            return bad(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                n_rows + 1
            ));
        }
        if row_offsets[0] != 0 {
            return bad("row_offsets[0] must be 0".into());
        }
        if col_indices.len() != values.len() {
            return bad(format!(
                "{} column indices but {} values",
                col_indices.len(),
                values.len()
            ));
        }
        if row_offsets[n_rows] != col_indices.len() {
            return bad(format!(
                "row_offsets[n_rows] = {} but nnz = {}",
                row_offsets[n_rows],
                col_indices.len()
            ));
        }
        for i in 0..n_rows {
            let (start, end) = (row_offsets[i], row_offsets[i + 1]);
            if start > end {
                return bad(format!("row_offsets decreases at row {i}"));
            }
            let row = &col_indices[start..end];
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!(
                    "column indices of row {i} are not strictly increasing"
                ));
            }
            if row.last().is_some_and(|&c| c >= n_cols) {
                return bad(format!("column index out of range in row {i}"));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets in any order.
    /// Duplicate positions are summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut triplets: Vec<_> = triplets.into_iter().collect();
        if let Some(&(i, j, _)) = triplets
            .iter()
            .find(|&&(i, j, _)| i >= n_rows || j >= n_cols)
        {
            return Err(Error::MalformedMatrix(format!(
                "entry ({i}, {j}) outside a {n_rows}x{n_cols} matrix"
            )));
        }
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_offsets = vec![0; n_rows + 1];
        let mut col_indices: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((i, j));
            row_offsets[i + 1] += 1;
            col_indices.push(j);
            values.push(v);
        }
        for i in 0..n_rows {
            row_offsets[i + 1] += row_offsets[i];
        }
        Self::new(n_rows, n_cols, row_offsets, col_indices, values)
    }

    pub fn from_dense(dense: &DenseMatrix) -> Self {
        let triplets = (0..dense.rows())
            .flat_map(|i| (0..dense.cols()).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = dense[(i, j)];
                (v != 0.0).then_some((i, j, v))
            });
        Self::from_triplets(dense.rows(), dense.cols(), triplets).expect("dense shape is valid")
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, n, (0..=n).collect(), (0..n).collect(), vec![1.0; n]).expect("valid identity")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |p| vals[p])
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> SparseMatrix {
        Self::from_triplets(
            self.n_cols,
            self.n_rows,
            self.iter().map(|(i, j, v)| (j, i, v)),
        )
        .expect("transpose of a valid matrix is valid")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut dense = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for (i, j, v) in self.iter() {
            dense[(i, j)] = v;
        }
        dense
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<f64>> {
        let dense = self.to_dense();
        (0..self.n_rows).map(|i| dense.row(i).to_vec()).collect()
    }

    /// `y = A x`, each `y_i` accumulated over row `i` in storage order.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n_rows];
        self.spmv_into(x, &mut y, Parallelism::Sequential)?;
        Ok(y)
    }

    /// `y = A x` into a caller buffer. Rows are independent, so the parallel
    /// mode gives the same bits as the sequential one.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64], par: Parallelism) -> Result<()> {
        check_len("spmv input", self.n_cols, x.len())?;
        check_len("spmv output", self.n_rows, y.len())?;
        let row_dot = |i: usize| {
            let (cols, vals) = self.row(i);
            cols.iter()
                .zip(vals)
                .fold(0.0, |acc, (&j, &v)| acc + v * x[j])
        };
        if par.is_sequential() {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row_dot(i);
            }
        } else {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = row_dot(i));
        }
        Ok(())
    }

    /// `x = Aᵀ y`, scattered row by row in storage order.
    pub fn spmv_t(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.n_cols];
        self.spmv_t_into(y, &mut x)?;
        Ok(x)
    }

    pub fn spmv_t_into(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        check_len("spmv_t input", self.n_rows, y.len())?;
        check_len("spmv_t output", self.n_cols, x.len())?;
        x.fill(0.0);
        for (i, &yi) in y.iter().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                x[j] += v * yi;
            }
        }
        Ok(())
    }
}

fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
