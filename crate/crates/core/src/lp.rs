//! Lag-augmented local projection estimation: the two-regressor LP fit, the
//! horizon-restricted and full-sample AR(1) slopes, the HC standard-error
//! family, and the studentized root.

use serde::{Deserialize, Serialize};

use crate::dgp::Series;
use crate::error::{Error, Result};
use crate::numerics::GRAM_DET_TOL;

/// Which heteroskedasticity-consistent standard error studentizes a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeKind {
    Hc,
    Hc2,
    Hc3,
}

/// A fitted local projection at one horizon.
///
/// Regressing `y_{t+h}` on `(y_t, y_{t-1})` without intercept over
/// `t = 1..n-h` yields the slope pair `(beta_hat, gamma_hat)` and residuals
/// `xi_resid`. The auxiliary AR slope `rho_hat_h` over the same index range
/// defines `u_resid_h = y_t - rho_hat_h * y_{t-1}`, whose squares weight the
/// sandwich standard errors. `leverage` holds the projection diagonal of the
/// two-column design with rows `(u_resid_h[t], y_{t-1})`.
#[derive(Debug, Clone)]
pub struct LpFit {
    pub h: usize,
    pub beta_hat: f64,
    pub gamma_hat: f64,
    pub xi_resid: Vec<f64>,
    pub rho_hat_h: f64,
    pub u_resid_h: Vec<f64>,
    pub se_hc: f64,
    pub se_hc2: f64,
    pub se_hc3: f64,
    pub leverage: Vec<f64>,
}

impl LpFit {
    pub fn se(&self, kind: SeKind) -> f64 {
        match kind {
            SeKind::Hc => self.se_hc,
            SeKind::Hc2 => self.se_hc2,
            SeKind::Hc3 => self.se_hc3,
        }
    }

    /// Number of usable observations `n - h`.
    pub fn observations(&self) -> usize {
        self.xi_resid.len()
    }
}

/// A studentized root `(beta_hat - beta_ref) / se`.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub value: f64,
    pub beta_hat: f64,
    pub se_used: f64,
    pub se_kind: SeKind,
}

/// Impulse response of an AR(1) model at horizon `h`: `rho^h`.
pub fn impulse_response(rho: f64, h: usize) -> f64 {
    rho.powi(h as i32)
}

/// Fit the lag-augmented local projection at horizon `h >= 1`.
pub fn fit_lp(series: &Series, h: usize) -> Result<LpFit> {
    if h == 0 {
        return Err(Error::DomainError(
            "horizon 0 is the identity response; fit starts at h = 1".into(),
        ));
    }
    let y = series.values();
    let n = series.sample_size();
    if n < h + 3 {
        return Err(Error::HorizonTooLarge { n, h });
    }
    let m = n - h;

    let (mut s11, mut s12, mut s22, mut s1y, mut s2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for t in 1..=m {
        let x1 = y[t];
        let x2 = y[t - 1];
        let resp = y[t + h];
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        s1y += x1 * resp;
        s2y += x2 * resp;
    }
    let det = s11 * s22 - s12 * s12;
    let half_trace = 0.5 * (s11 + s22);
    if det <= GRAM_DET_TOL * half_trace * half_trace {
        return Err(Error::SingularDesign("collinear LP regressors"));
    }
    let beta_hat = (s22 * s1y - s12 * s2y) / det;
    let gamma_hat = (s11 * s2y - s12 * s1y) / det;
    // Same index range as the LP regression: sum(y_t y_{t-1}) / sum(y_{t-1}^2).
    let rho_hat_h = s12 / s22;

    let mut xi_resid = Vec::with_capacity(m);
    let mut u_resid_h = Vec::with_capacity(m);
    for t in 1..=m {
        xi_resid.push(y[t + h] - beta_hat * y[t] - gamma_hat * y[t - 1]);
        u_resid_h.push(y[t] - rho_hat_h * y[t - 1]);
    }

    let mut g11 = 0.0;
    let mut g12 = 0.0;
    for t in 1..=m {
        let u = u_resid_h[t - 1];
        g11 += u * u;
        g12 += u * y[t - 1];
    }
    let g22 = s22;
    if g11 == 0.0 {
        return Err(Error::DegenerateVariance("all AR residuals are zero"));
    }
    let det2 = g11 * g22 - g12 * g12;
    let half_trace2 = 0.5 * (g11 + g22);
    if det2 <= GRAM_DET_TOL * half_trace2 * half_trace2 {
        return Err(Error::SingularDesign("degenerate standard-error design"));
    }

    let mut leverage = Vec::with_capacity(m);
    let (mut w, mut w2, mut w3) = (0.0, 0.0, 0.0);
    for t in 1..=m {
        let u = u_resid_h[t - 1];
        let x2 = y[t - 1];
        let p = (u * u * g22 - 2.0 * u * x2 * g12 + x2 * x2 * g11) / det2;
        if p >= 1.0 - 1e-12 {
            return Err(Error::SingularDesign(
                "observation with unit leverage in the standard-error design",
            ));
        }
        leverage.push(p);
        let xi2u2 = xi_resid[t - 1] * xi_resid[t - 1] * u * u;
        w += xi2u2;
        w2 += xi2u2 / (1.0 - p);
        w3 += xi2u2 / ((1.0 - p) * (1.0 - p));
    }

    Ok(LpFit {
        h,
        beta_hat,
        gamma_hat,
        xi_resid,
        rho_hat_h,
        u_resid_h,
        se_hc: w.sqrt() / g11,
        se_hc2: w2.sqrt() / g11,
        se_hc3: w3.sqrt() / g11,
        leverage,
    })
}

/// Full-sample AR(1) slope `sum(y_{t-1} y_t) / sum(y_{t-1}^2)` over
/// `t = 1..n`, the coefficient the bootstrap recursion is built from.
///
/// A series whose lag column is identically zero yields 0 (the numerator is
/// zero as well, and the zero slope is the minimum-norm solution).
pub fn rho_hat_full(series: &Series) -> f64 {
    let y = series.values();
    let n = series.sample_size();
    let mut num = 0.0;
    let mut den = 0.0;
    for t in 1..=n {
        num += y[t - 1] * y[t];
        den += y[t - 1] * y[t - 1];
    }
    if den == 0.0 {
        return 0.0;
    }
    num / den
}

/// Studentized root for `beta_ref` using the selected standard error.
pub fn root(fit: &LpFit, beta_ref: f64, se_kind: SeKind) -> Result<Root> {
    let se = fit.se(se_kind);
    if se.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::DegenerateVariance(
            "selected standard error is not positive",
        ));
    }
    Ok(Root {
        value: (fit.beta_hat - beta_ref) / se,
        beta_hat: fit.beta_hat,
        se_used: se,
        se_kind,
    })
}
