//! Scalar helpers over `libm` and a small dense least-squares solver.

use alloc::vec;
use alloc::vec::Vec;

pub const E: f64 = core::f64::consts::E;
pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, k: i32) -> f64 {
    libm::pow(x, k as f64)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `log Γ(x)` for `x > 0`.
#[inline]
pub fn lgamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `log(p!)`.
#[inline]
pub fn ln_factorial(p: u64) -> f64 {
    lgamma(p as f64 + 1.0)
}

/// `log log(e + x)`, nonnegative for `x >= 0`.
#[inline]
pub fn lnln_e(x: f64) -> f64 {
    ln(ln(E + x))
}

/// `k!` as a float, exact up to `k = 22`.
pub fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Ordinary least squares fit of `y ≈ X β`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coef: Vec<f64>,
    /// Standard errors of the coefficients (zero when the fit is exact).
    pub std_err: Vec<f64>,
    pub rss: f64,
}

/// Solves the least-squares problem by Householder QR. `rows[i]` is the
/// i-th design row; every row must have the same length `k <= rows.len()`.
/// Returns `None` when the design is rank deficient.
#[allow(clippy::needless_range_loop)] // triangular solves read clearer with explicit indices
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<LinearFit> {
    let m = rows.len();
    let k = rows.first()?.len();
    if m < k || y.len() != m || k == 0 {
        return None;
    }
    // column-major copy of the design
    let mut a: Vec<Vec<f64>> = (0..k)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let mut b = y.to_vec();
    let mut scale = vec![0.0; k];
    for j in 0..k {
        let s = a[j].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if s == 0.0 {
            return None;
        }
        scale[j] = s;
        a[j].iter_mut().for_each(|v| *v /= s);
    }
    let mut diag = vec![0.0; k];
    for j in 0..k {
        let norm = sqrt(a[j][j..].iter().map(|v| v * v).sum::<f64>());
        if norm < 1e-300 {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        diag[j] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(j + 1) {
            let dot: f64 = v.iter().zip(&col[j..]).map(|(p, q)| p * q).sum();
            let f = 2.0 * dot / vnorm2;
            col[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
        }
        let dot: f64 = v.iter().zip(&b[j..]).map(|(p, q)| p * q).sum();
        let f = 2.0 * dot / vnorm2;
        b[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
    }
    // R is upper triangular with diag on the diagonal and a[col][row] above it.
    let r = |i: usize, j: usize| if i == j { diag[i] } else { a[j][i] };
    let cond = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()))
        / diag.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    if !(cond < 1e13) {
        return None;
    }
    let mut coef = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = b[i];
        for j in i + 1..k {
            s -= r(i, j) * coef[j];
        }
        coef[i] = s / r(i, i);
    }
    let rss: f64 = b[k..].iter().map(|v| v * v).sum();
    // diag((R^T R)^{-1}) = row norms of R^{-1}
    let mut rinv = vec![vec![0.0; k]; k];
    for col in 0..k {
        for i in (0..=col).rev() {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for j in i + 1..=col {
                s -= r(i, j) * rinv[j][col];
            }
            rinv[i][col] = s / r(i, i);
        }
    }
    let dof = (m - k).max(1) as f64;
    let sigma2 = rss / dof;
    let std_err = (0..k)
        .map(|i| sqrt(sigma2 * rinv[i].iter().map(|v| v * v).sum::<f64>()) / scale[i])
        .collect();
    let coef = coef.iter().zip(&scale).map(|(c, s)| c / s).collect();
    Some(LinearFit { coef, std_err, rss })
}
