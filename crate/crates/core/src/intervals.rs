//! The eight confidence-interval constructions: normal-theory intervals for
//! each HC standard error, symmetric bootstrap intervals for the residual
//! (HC and HC3) and wild schemes, and the equal-tailed percentile-t variants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bootstrap::{
    critical_value_sym, quantile_pair_equal_tail, BootstrapDraws, BootstrapScheme,
};
use crate::error::{Error, Result};
use crate::lp::{LpFit, SeKind};
use crate::numerics::normal_quantile;

/// Confidence interval method labels as they appear in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalMethod {
    #[serde(rename = "RB")]
    Rb,
    #[serde(rename = "RB_per_t")]
    RbPerT,
    #[serde(rename = "RB_hc3")]
    RbHc3,
    #[serde(rename = "WB")]
    Wb,
    #[serde(rename = "WB_per_t")]
    WbPerT,
    #[serde(rename = "AA")]
    Aa,
    #[serde(rename = "AA_hc2")]
    AaHc2,
    #[serde(rename = "AA_hc3")]
    AaHc3,
}

/// All eight methods in report column order.
pub const ALL_METHODS: [IntervalMethod; 8] = [
    IntervalMethod::Rb,
    IntervalMethod::RbPerT,
    IntervalMethod::RbHc3,
    IntervalMethod::Wb,
    IntervalMethod::WbPerT,
    IntervalMethod::Aa,
    IntervalMethod::AaHc2,
    IntervalMethod::AaHc3,
];

impl IntervalMethod {
    pub fn name(&self) -> &'static str {
        match self {
            IntervalMethod::Rb => "RB",
            IntervalMethod::RbPerT => "RB_per_t",
            IntervalMethod::RbHc3 => "RB_hc3",
            IntervalMethod::Wb => "WB",
            IntervalMethod::WbPerT => "WB_per_t",
            IntervalMethod::Aa => "AA",
            IntervalMethod::AaHc2 => "AA_hc2",
            IntervalMethod::AaHc3 => "AA_hc3",
        }
    }

    /// Bootstrap draw set the method consumes: scheme plus the SE kind that
    /// studentizes the bootstrap roots. Normal-theory methods need none.
    pub fn required_draws(&self) -> Option<(BootstrapScheme, SeKind)> {
        match self {
            IntervalMethod::Rb | IntervalMethod::RbPerT => {
                Some((BootstrapScheme::Residual, SeKind::Hc))
            }
            IntervalMethod::RbHc3 => Some((BootstrapScheme::Residual, SeKind::Hc3)),
            IntervalMethod::Wb | IntervalMethod::WbPerT => {
                Some((BootstrapScheme::Wild, SeKind::Hc))
            }
            IntervalMethod::Aa | IntervalMethod::AaHc2 | IntervalMethod::AaHc3 => None,
        }
    }

    /// Standard error that scales this method's interval.
    pub fn interval_se_kind(&self) -> SeKind {
        match self {
            IntervalMethod::RbHc3 | IntervalMethod::AaHc3 => SeKind::Hc3,
            IntervalMethod::AaHc2 => SeKind::Hc2,
            _ => SeKind::Hc,
        }
    }
}

impl fmt::Display for IntervalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntervalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_METHODS
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::ConfigError(format!("methods: unknown interval method {s:?}")))
    }
}

/// A two-sided confidence interval for one impulse response coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub method: IntervalMethod,
    pub h: usize,
    /// Nominal level `1 - alpha`.
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Whether the closed interval contains `beta_true`.
pub fn covers(ci: &ConfidenceInterval, beta_true: f64) -> bool {
    ci.lower <= beta_true && beta_true <= ci.upper
}

fn check_draws(
    method: IntervalMethod,
    draws: Option<&BootstrapDraws>,
) -> Result<&BootstrapDraws> {
    let (scheme, se_kind) = method
        .required_draws()
        .expect("only bootstrap methods check draws");
    let draws = draws.ok_or_else(|| {
        Error::MismatchedDraws(format!("{method} requires bootstrap draws, got none"))
    })?;
    if draws.scheme != scheme || draws.se_kind != se_kind {
        return Err(Error::MismatchedDraws(format!(
            "{method} requires {scheme:?}+{se_kind:?} draws, got {:?}+{:?}",
            draws.scheme, draws.se_kind
        )));
    }
    Ok(draws)
}

/// Build the confidence interval for one method at level `1 - alpha`.
///
/// Bootstrap methods require draws produced with the matching scheme and
/// root SE kind; see [`IntervalMethod::required_draws`].
pub fn build_interval(
    fit: &LpFit,
    method: IntervalMethod,
    alpha: f64,
    draws: Option<&BootstrapDraws>,
) -> Result<ConfidenceInterval> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    let beta = fit.beta_hat;
    let (lower, upper) = match method {
        IntervalMethod::Aa | IntervalMethod::AaHc2 | IntervalMethod::AaHc3 => {
            let z = normal_quantile(1.0 - alpha / 2.0)?;
            let se = fit.se(method.interval_se_kind());
            (beta - z * se, beta + z * se)
        }
        IntervalMethod::Rb | IntervalMethod::RbHc3 | IntervalMethod::Wb => {
            let draws = check_draws(method, draws)?;
            let c = critical_value_sym(draws, alpha)?;
            let se = fit.se(method.interval_se_kind());
            (beta - c * se, beta + c * se)
        }
        IntervalMethod::RbPerT | IntervalMethod::WbPerT => {
            let draws = check_draws(method, draws)?;
            let (q_lo, q_hi) = quantile_pair_equal_tail(draws, alpha)?;
            let se = fit.se(SeKind::Hc);
            (beta - q_hi * se, beta - q_lo * se)
        }
    };
    debug_assert!(lower <= upper);
    Ok(ConfidenceInterval {
        lower,
        upper,
        method,
        h: fit.h,
        level: 1.0 - alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::{bootstrap_roots, BootstrapSpec};
    use crate::dgp::{generate_shocks, simulate_ar1, RngStream, Series, ShockDesign};
    use crate::lp::fit_lp;

    fn random_series(n: usize, rho: f64, seed: u64) -> Series {
        let shocks = generate_shocks(
            &ShockDesign::gaussian_iid().with_burn_in(0),
            n,
            RngStream::new(seed, 0),
        );
        simulate_ar1(rho, &shocks)
    }

    fn synthetic_fit(beta: f64, se: f64) -> LpFit {
        LpFit {
            h: 1,
            beta_hat: beta,
            gamma_hat: 0.0,
            xi_resid: vec![],
            rho_hat_h: 0.0,
            u_resid_h: vec![],
            se_hc: se,
            se_hc2: se,
            se_hc3: se,
            leverage: vec![],
        }
    }

    fn synthetic_draws(
        roots: Vec<f64>,
        scheme: BootstrapScheme,
        se_kind: SeKind,
    ) -> BootstrapDraws {
        BootstrapDraws {
            roots,
            rho_hat: 0.5,
            beta_center: 0.5,
            scheme,
            se_kind,
            redraws: 0,
            failed_draws: 0,
        }
    }

    #[test]
    fn normal_theory_interval_example() {
        let fit = synthetic_fit(0.5, 0.1);
        let ci = build_interval(&fit, IntervalMethod::Aa, 0.10, None).unwrap();
        assert!((ci.lower - 0.33551).abs() < 5e-6, "lower {}", ci.lower);
        assert!((ci.upper - 0.66449).abs() < 5e-6, "upper {}", ci.upper);
        assert_eq!(ci.level, 0.9);
    }

    #[test]
    fn degenerate_bootstrap_roots_collapse_the_interval() {
        let fit = synthetic_fit(0.42, 0.1);
        let draws = synthetic_draws(vec![0.0; 16], BootstrapScheme::Residual, SeKind::Hc);
        let ci = build_interval(&fit, IntervalMethod::Rb, 0.10, Some(&draws)).unwrap();
        assert_eq!((ci.lower, ci.upper), (0.42, 0.42));
        assert!(covers(&ci, 0.42));
        assert!(!covers(&ci, 0.42 + 1e-12));
    }

    #[test]
    fn per_t_midpoint_approaches_beta_for_symmetric_roots() {
        // Symmetric grid +-(i/B): the infimum rule picks q_lo = -s[51],
        // q_hi = s[50] on the positive half (1-based order statistics).
        let b = 1000;
        let mut roots = Vec::with_capacity(b);
        for i in 1..=(b / 2) {
            roots.push(i as f64 / b as f64);
            roots.push(-(i as f64) / b as f64);
        }
        let draws = synthetic_draws(roots, BootstrapScheme::Residual, SeKind::Hc);
        let fit = synthetic_fit(0.7, 0.2);
        let ci = build_interval(&fit, IntervalMethod::RbPerT, 0.10, Some(&draws)).unwrap();
        // k_lo = ceil(1000*0.05) = 50 -> -451/1000; k_hi = ceil(950) -> 450/1000.
        assert!((ci.lower - (0.7 - 0.450 * 0.2)).abs() < 1e-12);
        assert!((ci.upper - (0.7 + 0.451 * 0.2)).abs() < 1e-12);
        let mid = 0.5 * (ci.lower + ci.upper);
        assert!((mid - 0.7).abs() <= 0.2 * (1.0 / b as f64));
    }

    #[test]
    fn covers_is_closed_on_both_ends() {
        let ci = ConfidenceInterval {
            lower: 0.0,
            upper: 1.0,
            method: IntervalMethod::Aa,
            h: 1,
            level: 0.9,
        };
        assert!(covers(&ci, 0.0));
        assert!(covers(&ci, 1.0));
        assert!(!covers(&ci, 1.0000001));
        assert!(!covers(&ci, -1e-9));
    }

    #[test]
    fn mismatched_draws_are_rejected() {
        let fit = synthetic_fit(0.5, 0.1);
        let wild = synthetic_draws(vec![1.0, -1.0], BootstrapScheme::Wild, SeKind::Hc);
        assert!(matches!(
            build_interval(&fit, IntervalMethod::Rb, 0.1, Some(&wild)),
            Err(Error::MismatchedDraws(_))
        ));
        let hc_draws = synthetic_draws(vec![1.0, -1.0], BootstrapScheme::Residual, SeKind::Hc);
        assert!(matches!(
            build_interval(&fit, IntervalMethod::RbHc3, 0.1, Some(&hc_draws)),
            Err(Error::MismatchedDraws(_))
        ));
        assert!(matches!(
            build_interval(&fit, IntervalMethod::Wb, 0.1, None),
            Err(Error::MismatchedDraws(_))
        ));
        assert!(build_interval(&fit, IntervalMethod::Aa, 0.1, None).is_ok());
    }

    #[test]
    fn normal_theory_family_is_nested_and_symmetric() {
        let fit = fit_lp(&random_series(80, 0.95, 60), 3).unwrap();
        let aa = build_interval(&fit, IntervalMethod::Aa, 0.10, None).unwrap();
        let hc2 = build_interval(&fit, IntervalMethod::AaHc2, 0.10, None).unwrap();
        let hc3 = build_interval(&fit, IntervalMethod::AaHc3, 0.10, None).unwrap();
        assert!(hc2.lower <= aa.lower && aa.upper <= hc2.upper);
        assert!(hc3.lower <= hc2.lower && hc2.upper <= hc3.upper);
        for ci in [aa, hc2, hc3] {
            assert!(((ci.upper - fit.beta_hat) - (fit.beta_hat - ci.lower)).abs() < 1e-12);
            assert!(ci.length() > 0.0);
        }
    }

    #[test]
    fn bootstrap_intervals_are_symmetric_and_positive_width() {
        let series = random_series(80, 1.0, 61);
        let fit = fit_lp(&series, 2).unwrap();
        for (method, scheme, se_kind) in [
            (IntervalMethod::Rb, BootstrapScheme::Residual, SeKind::Hc),
            (IntervalMethod::RbHc3, BootstrapScheme::Residual, SeKind::Hc3),
            (IntervalMethod::Wb, BootstrapScheme::Wild, SeKind::Hc),
        ] {
            let draws = bootstrap_roots(
                &series,
                2,
                &BootstrapSpec {
                    scheme,
                    b: 200,
                    se_kind,
                    rng: RngStream::new(4, 4),
                },
            )
            .unwrap();
            let ci = build_interval(&fit, method, 0.10, Some(&draws)).unwrap();
            assert!(((ci.upper - fit.beta_hat) - (fit.beta_hat - ci.lower)).abs() < 1e-12);
            assert!(ci.length() > 0.0);
        }
    }

    #[test]
    fn interval_endpoints_are_scale_invariant_with_matched_streams() {
        let series = random_series(70, 0.95, 62);
        let scaled =
            Series::from_values(series.values().iter().map(|v| 11.0 * v).collect()).unwrap();
        for h in [1, 4] {
            let fit = fit_lp(&series, h).unwrap();
            let fit_scaled = fit_lp(&scaled, h).unwrap();
            for method in ALL_METHODS {
                let draws = method.required_draws().map(|(scheme, se_kind)| {
                    let spec = BootstrapSpec {
                        scheme,
                        b: 128,
                        se_kind,
                        rng: RngStream::new(12, 1),
                    };
                    (
                        bootstrap_roots(&series, h, &spec).unwrap(),
                        bootstrap_roots(&scaled, h, &spec).unwrap(),
                    )
                });
                let (d1, d2) = match &draws {
                    Some((a, b)) => (Some(a), Some(b)),
                    None => (None, None),
                };
                let ci = build_interval(&fit, method, 0.10, d1).unwrap();
                let ci_scaled = build_interval(&fit_scaled, method, 0.10, d2).unwrap();
                assert!((ci.lower - ci_scaled.lower).abs() < 1e-10, "{method}");
                assert!((ci.upper - ci_scaled.upper).abs() < 1e-10, "{method}");
            }
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in ALL_METHODS {
            assert_eq!(m.name().parse::<IntervalMethod>().unwrap(), m);
        }
        assert!("XX".parse::<IntervalMethod>().is_err());
    }
}
