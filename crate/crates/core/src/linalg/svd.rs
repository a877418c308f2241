//! Randomized truncated SVD (range finder + subspace iteration).
//!
//! For `A` of size `m × n`, target rank `k` and `l = k + oversampling`:
//!
//! 1. `Ω` is an `n × l` standard Gaussian matrix drawn from the seeded stream.
//! 2. `Q = orth(A Ω)`.
//! 3. `power_iterations` times: `W = orth(Aᵀ Q)`, `Q = orth(A W)`.
//! 4. `Aᵀ Q = Q_b R` (thin QR), `R = U_r Σ V_rᵀ` (dense SVD of an `l × l` matrix).
//! 5. `U = Q V_r`, `V = Q_b U_r`, both truncated to `k` columns.
//!
//! Only products with `A` and `Aᵀ` touch the sparse matrix. Orthonormalization
//! is Householder QR.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::householder;
use faer::linalg::matmul::matmul;
use faer::linalg::qr::no_pivoting::factor as qr_factor;
use faer::linalg::svd::{self as faer_svd, ComputeSvdVectors};
use faer::reborrow::ReborrowMut;
use faer::{Accum, Conj, Mat, MatMut, MatRef, Par};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{normalize_signs, DenseMatrix, Parallelism, SparseMatrix};
use crate::seed::{rng_for, LABEL_RANGE_FINDER};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvdOptions {
    pub oversampling: usize,
    pub power_iterations: usize,
    pub parallelism: Parallelism,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            oversampling: 10,
            power_iterations: 4,
            parallelism: Parallelism::Sequential,
        }
    }
}

/// Rank-`k` factors `A ≈ U Σ V*`.
///
/// `u` is `n_rows × k` with orthonormal columns, `vt` is `k × n_cols` with
/// orthonormal rows, `sigma` is non-increasing and non-negative. In every
/// column of `u` the entry of largest magnitude is non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub vt: DenseMatrix,
    pub k: usize,
    pub seed: u64,
    /// oversampling actually used (after clamping)
    pub oversampling: usize,
    pub power_iterations: usize,
}

impl SvdResult {
    pub fn n_rows(&self) -> usize {
        self.u.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.vt.cols()
    }

    /// Dense `U Σ V*`. Only sensible for small matrices.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (x, s) in us.row_mut(i).iter_mut().zip(&self.sigma) {
                *x *= s;
            }
        }
        us.matmul(&self.vt)
    }
}

/// Column-major block of `l` dense vectors.
struct Block {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Block {
    fn as_ref(&self) -> MatRef<'_, f64> {
        MatRef::from_column_major_slice(&self.data, self.rows, self.cols)
    }

    fn as_mut(&mut self) -> MatMut<'_, f64> {
        MatMut::from_column_major_slice_mut(&mut self.data, self.rows, self.cols)
    }
}

pub fn truncated_svd(
    a: &SparseMatrix,
    k: usize,
    seed: u64,
    options: &SvdOptions,
) -> Result<SvdResult> {
    let (m, n) = (a.n_rows(), a.n_cols());
    let min_dim = m.min(n);
    if k == 0 || k > min_dim {
        return Err(Error::InvalidArgument(format!(
            "k = {k} outside [1, {min_dim}] for a {m}x{n} matrix"
        )));
    }
    if a.nnz() == 0 {
        return Err(Error::InvalidArgument(
            "matrix has no nonzero entries".into(),
        ));
    }
    let mut oversampling = options.oversampling;
    if k + oversampling > min_dim {
        let clamped = min_dim - k;
        log::warn!(
            "k + oversampling = {} exceeds min dimension {min_dim}; oversampling clamped to {clamped}",
            k + oversampling
        );
        oversampling = clamped;
    }
    let l = k + oversampling;
    let parallelism = options.parallelism;
    let par = parallelism.faer_par();

    parallelism.install(|| {
        let omega = gaussian_block(n, l, seed);
        let mut q = orthonormalize(spmm(a, &omega, parallelism), par);
        drop(omega);
        for _ in 0..options.power_iterations {
            let w = orthonormalize(spmm_t(a, &q, parallelism), par);
            q = orthonormalize(spmm(a, &w, parallelism), par);
        }

        let (qb, r) = householder_qr(spmm_t(a, &q, parallelism), par, true);
        let r = r.expect("R requested");
        let (ur, s, vr) = small_svd(r.as_ref(), par)?;

        // A ≈ (Q V_r) Σ (Q_b U_r)ᵀ
        let mut order: Vec<usize> = (0..l).collect();
        order.sort_by(|&x, &y| s[y].total_cmp(&s[x]));
        order.truncate(k);
        let vr_k = Mat::<f64>::from_fn(l, k, |i, c| vr[(i, order[c])]);
        let ur_k = Mat::<f64>::from_fn(l, k, |i, c| ur[(i, order[c])]);
        let sigma: Vec<f64> = order.iter().map(|&c| s[c].max(0.0)).collect();

        let mut u_cols = Mat::<f64>::zeros(m, k);
        matmul(
            u_cols.as_mut(),
            Accum::Replace,
            q.as_ref(),
            vr_k.as_ref(),
            1.0,
            par,
        );
        let mut v_cols = Mat::<f64>::zeros(n, k);
        matmul(
            v_cols.as_mut(),
            Accum::Replace,
            qb.as_ref(),
            ur_k.as_ref(),
            1.0,
            par,
        );

        let mut u = DenseMatrix::from_fn(m, k, |i, c| u_cols[(i, c)]);
        let mut vt = DenseMatrix::zeros(k, n);
        for c in 0..k {
            for (j, x) in vt.row_mut(c).iter_mut().enumerate() {
                *x = v_cols[(j, c)];
            }
        }
        normalize_signs(&mut u, &mut vt);
        Ok(SvdResult {
            u,
            sigma,
            vt,
            k,
            seed,
            oversampling,
            power_iterations: options.power_iterations,
        })
    })
}

fn gaussian_block(rows: usize, cols: usize, seed: u64) -> Block {
    let mut rng = rng_for(seed, LABEL_RANGE_FINDER);
    let data = (0..rows * cols)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    Block { rows, cols, data }
}

/// `A X` for an `n_cols × l` block, one sparse product per column.
fn spmm(a: &SparseMatrix, x: &Block, parallelism: Parallelism) -> Block {
    let (m, n) = (a.n_rows(), a.n_cols());
    debug_assert_eq!(x.rows, n);
    let mut data = vec![0.0; m * x.cols];
    let column = |(out, input): (&mut [f64], &[f64])| {
        a.spmv_into(input, out, Parallelism::Sequential)
            .expect("block shapes match the matrix");
    };
    if parallelism.is_sequential() {
        data.chunks_mut(m).zip(x.data.chunks(n)).for_each(column);
    } else {
        data.par_chunks_mut(m)
            .zip(x.data.par_chunks(n))
            .for_each(column);
    }
    Block {
        rows: m,
        cols: x.cols,
        data,
    }
}

/// `Aᵀ Y` for an `n_rows × l` block.
fn spmm_t(a: &SparseMatrix, y: &Block, parallelism: Parallelism) -> Block {
    let (m, n) = (a.n_rows(), a.n_cols());
    debug_assert_eq!(y.rows, m);
    let mut data = vec![0.0; n * y.cols];
    let column = |(out, input): (&mut [f64], &[f64])| {
        a.spmv_t_into(input, out)
            .expect("block shapes match the matrix");
    };
    if parallelism.is_sequential() {
        data.chunks_mut(n).zip(y.data.chunks(m)).for_each(column);
    } else {
        data.par_chunks_mut(n)
            .zip(y.data.par_chunks(m))
            .for_each(column);
    }
    Block {
        rows: n,
        cols: y.cols,
        data,
    }
}

fn orthonormalize(block: Block, par: Par) -> Block {
    householder_qr(block, par, false).0
}

/// Thin Householder QR of a tall block (`rows ≥ cols`). Returns the explicit
/// `Q` and, if asked, the `cols × cols` upper-triangular `R`.
fn householder_qr(mut block: Block, par: Par, want_r: bool) -> (Block, Option<Mat<f64>>) {
    let (m, l) = (block.rows, block.cols);
    debug_assert!(m >= l);
    let bs = qr_factor::recommended_block_size::<f64>(m, l);
    let mut coeff = Mat::<f64>::zeros(bs, l);
    qr_factor::qr_in_place(
        block.as_mut(),
        coeff.as_mut(),
        par,
        MemStack::new(&mut MemBuffer::new(qr_factor::qr_in_place_scratch::<f64>(
            m,
            l,
            bs,
            par,
            Default::default(),
        ))),
        Default::default(),
    );
    let r = want_r.then(|| {
        let factored = block.as_ref();
        Mat::<f64>::from_fn(l, l, |i, j| if i <= j { factored[(i, j)] } else { 0.0 })
    });
    // keep only the unit-lower-trapezoidal Householder basis
    for j in 0..l {
        let col = &mut block.data[j * m..(j + 1) * m];
        col[..j].fill(0.0);
        col[j] = 1.0;
    }
    let mut q = Block {
        rows: m,
        cols: l,
        data: vec![0.0; m * l],
    };
    for j in 0..l {
        q.data[j * m + j] = 1.0;
    }
    householder::apply_block_householder_sequence_on_the_left_in_place_with_conj(
        block.as_ref(),
        coeff.as_ref(),
        Conj::No,
        q.as_mut(),
        par,
        MemStack::new(&mut MemBuffer::new(
            householder::apply_block_householder_sequence_on_the_left_in_place_scratch::<f64>(
                m, bs, l,
            ),
        )),
    );
    (q, r)
}

/// Dense SVD of a small square matrix: `(U, singular values, V)`.
fn small_svd(r: MatRef<'_, f64>, par: Par) -> Result<(Mat<f64>, Vec<f64>, Mat<f64>)> {
    let l = r.nrows();
    let mut s = Diag::<f64>::zeros(l);
    let mut u = Mat::<f64>::zeros(l, l);
    let mut v = Mat::<f64>::zeros(l, l);
    faer_svd::svd(
        r,
        s.as_mut(),
        Some(u.as_mut()),
        Some(v.as_mut()),
        par,
        MemStack::new(&mut MemBuffer::new(faer_svd::svd_scratch::<f64>(
            l,
            l,
            ComputeSvdVectors::Thin,
            ComputeSvdVectors::Thin,
            par,
            Default::default(),
        ))),
        Default::default(),
    )
    .map_err(|e| Error::Numerical(format!("dense SVD of the projected matrix failed: {e:?}")))?;
    let s = (0..l).map(|i| s[i]).collect();
    Ok((u, s, v))
}

/// Direct evaluation is used while `rows · cols · k` stays below this.
const DIRECT_RESIDUAL_BUDGET: f64 = 1e10;

/// `‖A − U Σ V*‖_F`.
///
/// Small problems stream the residual block by block of rows, so no dense
/// `m × n` matrix is formed and there is no cancellation. Large problems use
/// `‖A‖² − 2⟨A, UΣV*⟩ + ‖UΣV*‖²` with the cross term taken over the nonzeros
/// of `A`; that route has absolute accuracy around `1e-8 · ‖A‖_F`.
pub fn reconstruction_error(a: &SparseMatrix, r: &SvdResult) -> Result<f64> {
    let (m, n) = (a.n_rows(), a.n_cols());
    let k = r.sigma.len();
    if r.u.rows() != m {
        return Err(Error::DimensionMismatch {
            context: "reconstruction_error rows",
            expected: m,
            found: r.u.rows(),
        });
    }
    if r.vt.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "reconstruction_error columns",
            expected: n,
            found: r.vt.cols(),
        });
    }
    if r.u.cols() != k || r.vt.rows() != k {
        return Err(Error::DimensionMismatch {
            context: "reconstruction_error rank",
            expected: k,
            found: r.u.cols().min(r.vt.rows()),
        });
    }
    let us = Mat::<f64>::from_fn(m, k, |i, c| r.u[(i, c)] * r.sigma[c]);
    let vt = MatRef::from_row_major_slice(r.vt.as_slice(), k, n);

    if (m as f64) * (n as f64) * (k as f64) <= DIRECT_RESIDUAL_BUDGET {
        let block_rows = (1 << 20) / n.max(1) + 1;
        let mut total = 0.0;
        let mut dense = Mat::<f64>::zeros(block_rows.min(m), n);
        let mut start = 0;
        while start < m {
            let rows = block_rows.min(m - start);
            let mut block = dense.as_mut().subrows_mut(0, rows);
            matmul(
                block.rb_mut(),
                Accum::Replace,
                us.as_ref().subrows(start, rows),
                vt,
                1.0,
                Par::Seq,
            );
            for i in 0..rows {
                let (cols, vals) = a.row(start + i);
                for (&j, &v) in cols.iter().zip(vals) {
                    block[(i, j)] -= v;
                }
            }
            for j in 0..n {
                for i in 0..rows {
                    let x = block[(i, j)];
                    total += x * x;
                }
            }
            start += rows;
        }
        return Ok(total.sqrt());
    }

    let a_norm2: f64 = a.values().iter().map(|v| v * v).sum();
    let mut cross = 0.0;
    for (i, j, v) in a.iter() {
        let mut lij = 0.0;
        for c in 0..k {
            lij += us[(i, c)] * vt[(c, j)];
        }
        cross += v * lij;
    }
    let mut utu = Mat::<f64>::zeros(k, k);
    matmul(
        utu.as_mut(),
        Accum::Replace,
        us.transpose(),
        us.as_ref(),
        1.0,
        Par::Seq,
    );
    let mut vvt = Mat::<f64>::zeros(k, k);
    matmul(
        vvt.as_mut(),
        Accum::Replace,
        vt,
        vt.transpose(),
        1.0,
        Par::Seq,
    );
    let mut low_rank_norm2 = 0.0;
    for x in 0..k {
        for y in 0..k {
            low_rank_norm2 += utu[(x, y)] * vvt[(x, y)];
        }
    }
    Ok((a_norm2 - 2.0 * cross + low_rank_norm2).max(0.0).sqrt())
}
