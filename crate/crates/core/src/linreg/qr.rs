//! Householder QR with column pivoting (largest remaining column norm first).
//!
//! Columns are scaled to unit Euclidean norm before factorization, so the
//! rank threshold does not depend on the units of individual regressors.

use nalgebra::{DMatrix, DVector};

/// Relative pivot threshold: `|R_kk| <= RANK_TOL * ||X D||_F` is treated as rank
/// loss, where `D` scales every column of `X` to unit norm.
pub const RANK_TOL: f64 = 1e-10;

pub struct LstsqSolution {
    pub coef: DVector<f64>,
    /// `(X'X)^{-1}` in the original column order.
    pub xtx_inv: DMatrix<f64>,
}

/// Solve `min ||y - X b||` for full-column-rank `X`.
///
/// On rank deficiency returns the original index of the column whose pivot
/// fell below the threshold.
pub fn lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<LstsqSolution, usize> {
    let (m, n) = x.shape();
    debug_assert!(m >= n);
    let col_scale: Vec<f64> = (0..n).map(|j| x.column(j).norm()).collect();
    if let Some(j) = col_scale.iter().position(|&c| c == 0.0) {
        return Err(j);
    }
    let mut a = DMatrix::from_fn(m, n, |i, j| x[(i, j)] / col_scale[j]);
    let scale = a.norm();
    let mut qty = y.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (best, best_norm) = (k..n)
            .map(|j| (j, a.view((k, j), (m - k, 1)).norm_squared()))
            .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best != k {
            a.swap_columns(k, best);
            perm.swap(k, best);
        }
        let norm = best_norm.sqrt();
        if norm <= RANK_TOL * scale {
            return Err(perm[k]);
        }
        let akk = a[(k, k)];
        let alpha = if akk >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv > 0.0 {
            let beta = 2.0 / vtv;
            for j in (k + 1)..n {
                let s: f64 = beta * v.iter().enumerate().map(|(i, vi)| vi * a[(k + i, j)]).sum::<f64>();
                for (i, vi) in v.iter().enumerate() {
                    a[(k + i, j)] -= s * vi;
                }
            }
            let s: f64 = beta * v.iter().enumerate().map(|(i, vi)| vi * qty[k + i]).sum::<f64>();
            for (i, vi) in v.iter().enumerate() {
                qty[k + i] -= s * vi;
            }
        }
        a[(k, k)] = alpha;
        for i in (k + 1)..m {
            a[(i, k)] = 0.0;
        }
    }

    let r = a.view((0, 0), (n, n)).upper_triangle();
    let rhs = qty.rows(0, n).into_owned();
    let z = r
        .solve_upper_triangular(&rhs)
        .expect("pivots checked above threshold");
    let rinv = r
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .expect("pivots checked above threshold");
    let c = &rinv * rinv.transpose();

    let mut coef = DVector::zeros(n);
    let mut xtx_inv = DMatrix::zeros(n, n);
    for i in 0..n {
        let (pi, si) = (perm[i], col_scale[perm[i]]);
        coef[pi] = z[i] / si;
        for j in 0..n {
            xtx_inv[(pi, perm[j])] = c[(i, j)] / (si * col_scale[perm[j]]);
        }
    }
    Ok(LstsqSolution { coef, xtx_inv })
}
