//! Shared numeric primitives: tiny no-intercept least squares, the standard
//! normal quantile, the infimum-form empirical quantile, and the
//! Kolmogorov-Smirnov distance of a sample to a reference CDF.

use crate::error::{Error, Result};

/// Gram determinant rejection threshold, relative to (trace/2)^2.
pub(crate) const GRAM_DET_TOL: f64 = 1e-14;

/// Solution of a two-regressor least squares problem without intercept.
#[derive(Debug, Clone)]
pub struct Ls2Solution {
    /// Slope coefficients on the first and second regressor.
    pub coef: [f64; 2],
    /// Residuals `y - fitted`, aligned to the observation index.
    pub residuals: Vec<f64>,
    /// Whether the 2x2 Gram matrix passed the invertibility check.
    pub gram_ok: bool,
}

/// Least squares of `y` on two columns `(x1, x2)` with no intercept.
///
/// Solves the 2x2 normal equations in closed form. The Gram matrix is
/// rejected as singular when `det <= 1e-14 * (trace/2)^2`, which is
/// scale-invariant and adequate for two regressors.
pub fn solve_ls2(x1: &[f64], x2: &[f64], y: &[f64]) -> Result<Ls2Solution> {
    assert_eq!(x1.len(), x2.len(), "regressor lengths differ");
    assert_eq!(x1.len(), y.len(), "regressor and response lengths differ");
    assert!(x1.len() >= 2, "need at least two observations");

    let (mut s11, mut s12, mut s22, mut s1y, mut s2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x1.len() {
        s11 += x1[i] * x1[i];
        s12 += x1[i] * x2[i];
        s22 += x2[i] * x2[i];
        s1y += x1[i] * y[i];
        s2y += x2[i] * y[i];
    }
    let det = s11 * s22 - s12 * s12;
    let half_trace = 0.5 * (s11 + s22);
    if det <= GRAM_DET_TOL * half_trace * half_trace {
        return Err(Error::SingularDesign("2x2 Gram matrix not invertible"));
    }
    let a = (s22 * s1y - s12 * s2y) / det;
    let b = (s11 * s2y - s12 * s1y) / det;
    let residuals = (0..y.len()).map(|i| y[i] - a * x1[i] - b * x2[i]).collect();
    Ok(Ls2Solution {
        coef: [a, b],
        residuals,
        gram_ok: true,
    })
}

/// Slope of the no-intercept regression of `y` on `x`: `sum(x*y) / sum(x^2)`.
pub fn solve_ls1(x: &[f64], y: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), y.len(), "regressor and response lengths differ");
    assert!(!x.is_empty(), "need at least one observation");
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    if sxx == 0.0 {
        return Err(Error::SingularDesign("regressor column is all zero"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok(sxy / sxx)
}

/// Standard normal CDF via `erfc`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal quantile, `Phi^-1(p)` for `p` in (0,1).
///
/// Rational approximation (Acklam) refined by one Halley step against the
/// erfc-based CDF; the refined value satisfies `|Phi(z) - p| <= 1e-9`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::DomainError(format!(
            "normal quantile needs p in (0,1), got {p}"
        )));
    }
    let x = acklam_inverse(p);
    // Halley refinement: e = Phi(x) - p, u = e / phi(x).
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    Ok(x - u / (1.0 + 0.5 * x * u))
}

fn acklam_inverse(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Empirical quantile under the infimum definition: the k-th order statistic
/// with `k = ceil(B * level)`, i.e. the smallest `u` whose empirical CDF
/// reaches `level`. No interpolation.
pub fn empirical_quantile_inf(values: &[f64], level: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::DomainError(format!(
            "quantile level must lie in (0,1), got {level}"
        )));
    }
    let b = values.len();
    let mut k = ((b as f64) * level).ceil() as usize;
    // Pin k to the exact infimum: smallest k with k/B >= level, guarding the
    // ceil against representation error in B * level.
    k = k.clamp(1, b);
    if k > 1 && ((k - 1) as f64) / (b as f64) >= level {
        k -= 1;
    }
    if (k as f64) / (b as f64) < level && k < b {
        k += 1;
    }
    let mut work = values.to_vec();
    let (_, kth, _) = work.select_nth_unstable_by(k - 1, |a, b| a.total_cmp(b));
    Ok(*kth)
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `sample` and a
/// reference CDF, evaluated at both sides of every ECDF jump.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], reference_cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    let m = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = reference_cdf(x);
        let upper = ((i + 1) as f64 / m - f).abs();
        let lower = (i as f64 / m - f).abs();
        sup = sup.max(upper).max(lower);
    }
    Ok(sup)
}
