//! Companion-form helpers shared by AR and VAR forecasting.

use nalgebra::DMatrix;

/// Stacked first-order form of `y_t = sum A_l y_{t-l}` with `k x k` blocks.
pub(crate) fn companion(k: usize, blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let p = blocks.len();
    let n = k * p;
    let mut f = DMatrix::zeros(n, n);
    for (l, a) in blocks.iter().enumerate() {
        f.view_mut((0, l * k), (k, k)).copy_from(a);
    }
    for i in k..n {
        f[(i, i - k)] = 1.0;
    }
    f
}

/// MA weight blocks `Psi_0 .. Psi_{n-1}`: the leading `k x k` block of `F^j`.
pub(crate) fn ma_weights(k: usize, blocks: &[DMatrix<f64>], n: usize) -> Vec<DMatrix<f64>> {
    if blocks.is_empty() {
        return (0..n)
            .map(|j| if j == 0 { DMatrix::identity(k, k) } else { DMatrix::zeros(k, k) })
            .collect();
    }
    let f = companion(k, blocks);
    let mut power = DMatrix::identity(f.nrows(), f.ncols());
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(power.view((0, 0), (k, k)).into_owned());
        power = &f * &power;
    }
    out
}

pub(crate) fn spectral_radius(k: usize, blocks: &[DMatrix<f64>]) -> f64 {
    if blocks.is_empty() {
        return 0.0;
    }
    companion(k, blocks)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Iterate `y_{T+h} = c + sum A_l y_{T+h-l}`; `history` is oldest first and
/// holds at least `p` observations.
pub(crate) fn iterate_point(
    intercepts: &[f64],
    blocks: &[DMatrix<f64>],
    history: &[Vec<f64>],
    horizon: usize,
) -> Vec<Vec<f64>> {
    let k = intercepts.len();
    let mut path: Vec<Vec<f64>> = history.to_vec();
    for _ in 0..horizon {
        let mut y = intercepts.to_vec();
        for (l, a) in blocks.iter().enumerate() {
            let prev = &path[path.len() - 1 - l];
            for i in 0..k {
                for j in 0..k {
                    y[i] += a[(i, j)] * prev[j];
                }
            }
        }
        path.push(y);
    }
    path.split_off(history.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ar1_weights_are_powers() {
        let phi = 0.7;
        let w = ma_weights(1, &[DMatrix::from_element(1, 1, phi)], 10);
        let mut power = 1.0;
        for m in &w {
            assert_eq!(m[(0, 0)], power);
            power *= phi;
        }
    }

    #[test]
    fn ar2_weights_follow_recursion() {
        let (a, b) = (0.5, 0.3);
        let blocks = [DMatrix::from_element(1, 1, a), DMatrix::from_element(1, 1, b)];
        let w = ma_weights(1, &blocks, 12);
        let mut psi = vec![1.0, a];
        for j in 2..12 {
            psi.push(a * psi[j - 1] + b * psi[j - 2]);
        }
        for j in 0..12 {
            assert!((w[j][(0, 0)] - psi[j]).abs() < 1e-14);
        }
        assert!(spectral_radius(1, &blocks) < 1.0);
        assert!((spectral_radius(1, &[DMatrix::from_element(1, 1, 1.0)]) - 1.0).abs() < 1e-12);
    }
}
