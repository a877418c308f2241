//! Sparse matrices, the randomized truncated SVD, and a dense reference SVD
//! for checking it on small instances.

mod dense;
mod mtx;
mod oracle;
mod parallel;
mod random;
mod sparse;
mod svd;

pub use dense::DenseMatrix;
pub use mtx::{read_matrix_market, write_matrix_market};
pub use oracle::{dense_svd_oracle, DenseSvd, ORACLE_MAX_ENTRIES};
pub use parallel::Parallelism;
pub use random::{random_sparse, RandomValues};
pub use sparse::SparseMatrix;
pub use svd::{reconstruction_error, truncated_svd, SvdOptions, SvdResult};

/// Flips the sign of column `j` of `u` (and row `j` of `vt`) so that the
/// entry of largest magnitude in that column of `u` is non-negative. The
/// first entry wins ties.
pub(crate) fn normalize_signs(u: &mut DenseMatrix, vt: &mut DenseMatrix) {
    for j in 0..u.cols() {
        let mut best = 0.0f64;
        let mut sign = 1.0;
        for i in 0..u.rows() {
            let x = u[(i, j)];
            if x.abs() > best {
                best = x.abs();
                sign = if x < 0.0 { -1.0 } else { 1.0 };
            }
        }
        if sign < 0.0 {
            for i in 0..u.rows() {
                u[(i, j)] = -u[(i, j)];
            }
            for x in vt.row_mut(j) {
                *x = -*x;
            }
        }
    }
}
