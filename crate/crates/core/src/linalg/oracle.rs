//! Dense reference SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! Slow and simple, independent of the randomized path. Only meant for
//! checking [`truncated_svd`](super::truncated_svd) on small matrices.

use super::{normalize_signs, DenseMatrix, SparseMatrix};
use crate::{Error, Result};

/// Largest `n_rows · n_cols` the oracle accepts.
pub const ORACLE_MAX_ENTRIES: usize = 1_000_000;

const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U Σ V*` with `r = min(n_rows, n_cols)` singular triplets,
/// singular values non-increasing.
#[derive(Clone, Debug)]
pub struct DenseSvd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub vt: DenseMatrix,
}

impl DenseSvd {
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (x, s) in us.row_mut(i).iter_mut().zip(&self.sigma) {
                *x *= s;
            }
        }
        us.matmul(&self.vt)
    }

    /// Optimal rank-`k` Frobenius error, `sqrt(Σ_{i>k} σ_i²)`.
    pub fn tail_norm(&self, k: usize) -> f64 {
        self.sigma.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt()
    }
}

pub fn dense_svd_oracle(a: &SparseMatrix) -> Result<DenseSvd> {
    let (m, n) = (a.n_rows(), a.n_cols());
    if m.saturating_mul(n) > ORACLE_MAX_ENTRIES {
        return Err(Error::InvalidArgument(format!(
            "dense oracle limited to {ORACLE_MAX_ENTRIES} entries, matrix is {m}x{n}"
        )));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "dense oracle needs a non-empty matrix".into(),
        ));
    }
    // Work on the orientation with at least as many rows as columns.
    let tall = m >= n;
    let (p, q) = if tall { (m, n) } else { (n, m) };
    let mut g: Vec<Vec<f64>> = vec![vec![0.0; p]; q];
    for (i, j, v) in a.iter() {
        if tall {
            g[j][i] = v;
        } else {
            g[i][j] = v;
        }
    }
    let mut v: Vec<Vec<f64>> = (0..q)
        .map(|j| {
            let mut e = vec![0.0; q];
            e[j] = 1.0;
            e
        })
        .collect();

    // Rotations below these levels only stir rounding noise.
    let tol = p as f64 * f64::EPSILON;
    let frob_sq: f64 = g.iter().map(|col| dot(col, col)).sum();
    let negligible = (f64::EPSILON * f64::EPSILON) * frob_sq;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for c1 in 0..q {
            for c2 in c1 + 1..q {
                let alpha = dot(&g[c1], &g[c1]);
                let beta = dot(&g[c2], &g[c2]);
                let gamma = dot(&g[c1], &g[c2]);
                if gamma == 0.0
                    || alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut g, c1, c2, c, s);
                rotate(&mut v, c1, c2, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("Jacobi SVD did not converge".into()));
    }

    let norms: Vec<f64> = g.iter().map(|col| dot(col, col).sqrt()).collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let cutoff = sigma[0] * 1e-13;

    let mut left: Vec<Vec<f64>> = Vec::with_capacity(q);
    for &j in &order {
        if norms[j] > cutoff && norms[j] > 0.0 {
            left.push(g[j].iter().map(|x| x / norms[j]).collect());
        } else {
            left.push(complete_basis(&left, p));
        }
    }
    let right: Vec<&Vec<f64>> = order.iter().map(|&j| &v[j]).collect();

    // left: q vectors of length p; right: q vectors of length q
    let (mut u, mut vt) = if tall {
        (
            DenseMatrix::from_fn(m, q, |i, k| left[k][i]),
            DenseMatrix::from_fn(q, n, |k, j| right[k][j]),
        )
    } else {
        (
            DenseMatrix::from_fn(m, q, |i, k| right[k][i]),
            DenseMatrix::from_fn(q, n, |k, j| left[k][j]),
        )
    };
    let sigma = sigma
        .into_iter()
        .map(|s| if s > cutoff { s } else { 0.0 })
        .collect();
    normalize_signs(&mut u, &mut vt);
    Ok(DenseSvd { u, sigma, vt })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(cols: &mut [Vec<f64>], c1: usize, c2: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(c2);
    for (x, y) in lo[c1].iter_mut().zip(hi[0].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// A unit vector orthogonal to every vector in `basis`, from the first
/// standard basis vector that survives two Gram–Schmidt passes.
fn complete_basis(basis: &[Vec<f64>], len: usize) -> Vec<f64> {
    let mut best: Option<Vec<f64>> = None;
    let mut best_norm = 0.0;
    for e in 0..len {
        let mut x = vec![0.0; len];
        x[e] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let d = dot(&x, b);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= d * bi;
                }
            }
        }
        let norm = dot(&x, &x).sqrt();
        if norm > 0.5 {
            return x.into_iter().map(|xi| xi / norm).collect();
        }
        if norm > best_norm {
            best_norm = norm;
            best = Some(x);
        }
    }
    let x = best.expect("basis smaller than the space");
    x.into_iter().map(|xi| xi / best_norm).collect()
}
