//! Residual and wild bootstrap for the local projection root: regenerate
//! AR(1) samples from the fitted slope and centered residuals, refit the LP
//! at the requested horizon, and collect the studentized roots from which
//! critical values and quantiles are read off.

use rand::prelude::*;

use crate::dgp::{RngStream, Series};
use crate::error::{Error, Result};
use crate::lp::{fit_lp, impulse_response, rho_hat_full, SeKind};
use crate::numerics::empirical_quantile_inf;

/// How bootstrap shocks are produced from the centered residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BootstrapScheme {
    /// I.i.d. resampling with replacement from the centered residuals.
    Residual,
    /// Each centered residual kept in place, multiplied by an independent
    /// standard normal.
    Wild,
}

/// Parameters of one bootstrap run.
#[derive(Debug, Clone)]
pub struct BootstrapSpec {
    pub scheme: BootstrapScheme,
    /// Number of bootstrap draws.
    pub b: usize,
    /// Standard error studentizing the bootstrap roots.
    pub se_kind: SeKind,
    /// Base stream; draw `b` uses the child stream `rng.derive(&[b, attempt])`.
    pub rng: RngStream,
}

/// The collected bootstrap roots for one (series, horizon, scheme).
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDraws {
    /// Root values, one per successful draw; all finite.
    pub roots: Vec<f64>,
    /// Full-sample AR slope the bootstrap recursion was built from.
    pub rho_hat: f64,
    /// Centering value `rho_hat^h`.
    pub beta_center: f64,
    pub scheme: BootstrapScheme,
    pub se_kind: SeKind,
    /// Draws that needed at least one redraw.
    pub redraws: usize,
    /// Draws still degenerate after the redraw cap; excluded from `roots`.
    pub failed_draws: usize,
}

/// Redraw cap per degenerate bootstrap draw.
const REDRAW_CAP: usize = 10;
/// Abort when more than this share of draws stays degenerate.
const MAX_FAILED_SHARE: f64 = 0.01;

/// Centered full-sample AR(1) residuals
/// `u_t - mean(u)` with `u_t = y_t - rho_hat * y_{t-1}`, `t = 1..n`.
pub fn centered_residuals(series: &Series) -> Vec<f64> {
    let rho_hat = rho_hat_full(series);
    let y = series.values();
    let n = series.sample_size();
    let mut resid: Vec<f64> = (1..=n).map(|t| y[t] - rho_hat * y[t - 1]).collect();
    let mean = resid.iter().sum::<f64>() / n as f64;
    for r in &mut resid {
        *r -= mean;
    }
    resid
}

/// Residual-scheme bootstrap sample: the AR(1) recursion under `rho_hat`
/// driven by i.i.d. draws with replacement from `centered`.
pub fn bootstrap_sample_residual(
    rho_hat: f64,
    centered: &[f64],
    stream: RngStream,
) -> Series {
    let mut rng = stream.rng();
    let indices: Vec<usize> = (0..centered.len())
        .map(|_| rng.random_range(0..centered.len()))
        .collect();
    bootstrap_sample_from_indices(rho_hat, centered, &indices)
}

/// Recursion core for the residual scheme with explicit resampling indices.
pub fn bootstrap_sample_from_indices(
    rho_hat: f64,
    centered: &[f64],
    indices: &[usize],
) -> Series {
    assert!(!centered.is_empty(), "need at least one centered residual");
    let mut y = Vec::with_capacity(indices.len() + 1);
    y.push(0.0);
    let mut prev = 0.0;
    for &i in indices {
        prev = rho_hat * prev + centered[i];
        y.push(prev);
    }
    Series::from_values(y).expect("bootstrap path is finite and long enough")
}

/// Wild-scheme bootstrap sample: shocks `centered[t] * z_t` in original
/// time order, `z_t` i.i.d. standard normal.
pub fn bootstrap_sample_wild(rho_hat: f64, centered: &[f64], stream: RngStream) -> Series {
    let mut rng = stream.rng();
    let multipliers: Vec<f64> = (0..centered.len())
        .map(|_| rng.sample(rand_distr::StandardNormal))
        .collect();
    bootstrap_sample_from_multipliers(rho_hat, centered, &multipliers)
}

/// Recursion core for the wild scheme with explicit multipliers.
pub fn bootstrap_sample_from_multipliers(
    rho_hat: f64,
    centered: &[f64],
    multipliers: &[f64],
) -> Series {
    assert!(!centered.is_empty(), "need at least one centered residual");
    assert_eq!(centered.len(), multipliers.len());
    let mut y = Vec::with_capacity(centered.len() + 1);
    y.push(0.0);
    let mut prev = 0.0;
    for (u, z) in centered.iter().zip(multipliers) {
        prev = rho_hat * prev + u * z;
        y.push(prev);
    }
    Series::from_values(y).expect("bootstrap path is finite and long enough")
}

/// Generate `spec.b` bootstrap roots for the series at horizon `h`.
///
/// Each root is `(beta*_b - rho_hat^h) / se*_b` from the LP refit of an
/// independent bootstrap sample. The per-draw stream depends only on the
/// base stream and the draw index, so draws for different horizons built
/// from the same base stream reuse the same underlying bootstrap samples.
/// Draws with a singular refit are redrawn up to ten times, then counted as
/// failed; more than 1% failures aborts.
pub fn bootstrap_roots(series: &Series, h: usize, spec: &BootstrapSpec) -> Result<BootstrapDraws> {
    if spec.b < 2 {
        return Err(Error::ConfigError(format!(
            "bootstrap_b: need at least 2 draws, got {}",
            spec.b
        )));
    }
    let rho_hat = rho_hat_full(series);
    let centered = centered_residuals(series);
    let beta_center = impulse_response(rho_hat, h);

    let mut roots = Vec::with_capacity(spec.b);
    let mut redraws = 0usize;
    let mut failed_draws = 0usize;

    for b in 0..spec.b {
        let mut accepted = None;
        for attempt in 0..=REDRAW_CAP {
            let stream = spec.rng.derive(&[b as u64, attempt as u64]);
            let sample = match spec.scheme {
                BootstrapScheme::Residual => {
                    bootstrap_sample_residual(rho_hat, &centered, stream)
                }
                BootstrapScheme::Wild => bootstrap_sample_wild(rho_hat, &centered, stream),
            };
            match fit_lp(&sample, h) {
                Ok(fit) => {
                    let se = fit.se(spec.se_kind);
                    if se > 0.0 {
                        let value = (fit.beta_hat - beta_center) / se;
                        if value.is_finite() {
                            accepted = Some(value);
                            break;
                        }
                    }
                }
                Err(
                    Error::SingularDesign(_)
                    | Error::DegenerateVariance(_)
                    | Error::HorizonTooLarge { .. },
                ) => {}
                Err(other) => return Err(other),
            }
            if attempt == 0 {
                redraws += 1;
            }
        }
        match accepted {
            Some(v) => roots.push(v),
            None => failed_draws += 1,
        }
    }

    if (failed_draws as f64) > MAX_FAILED_SHARE * (spec.b as f64) {
        return Err(Error::TooManyDegenerateDraws {
            failed: failed_draws,
            total: spec.b,
            cap: REDRAW_CAP,
        });
    }

    Ok(BootstrapDraws {
        roots,
        rho_hat,
        beta_center,
        scheme: spec.scheme,
        se_kind: spec.se_kind,
        redraws,
        failed_draws,
    })
}

/// Symmetric bootstrap critical value: the `1 - alpha` infimum quantile of
/// the absolute roots.
pub fn critical_value_sym(draws: &BootstrapDraws, alpha: f64) -> Result<f64> {
    let abs: Vec<f64> = draws.roots.iter().map(|r| r.abs()).collect();
    empirical_quantile_inf(&abs, 1.0 - alpha)
}

/// Equal-tailed quantile pair `(q(alpha/2), q(1 - alpha/2))` of the signed
/// roots.
pub fn quantile_pair_equal_tail(draws: &BootstrapDraws, alpha: f64) -> Result<(f64, f64)> {
    let lower = empirical_quantile_inf(&draws.roots, alpha / 2.0)?;
    let upper = empirical_quantile_inf(&draws.roots, 1.0 - alpha / 2.0)?;
    debug_assert!(lower <= upper);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgp::{generate_shocks, simulate_ar1, ShockDesign};
    use crate::numerics::{ks_distance, normal_cdf};

    fn random_series(n: usize, rho: f64, seed: u64) -> Series {
        let shocks = generate_shocks(
            &ShockDesign::gaussian_iid().with_burn_in(0),
            n,
            RngStream::new(seed, 0),
        );
        simulate_ar1(rho, &shocks)
    }

    #[test]
    fn centered_residuals_hand_example() {
        // y = (0,1,1,2): rho_hat = 1.5, raw residuals (1, -0.5, 0.5),
        // mean 1/3, centered (2/3, -5/6, 1/6).
        let s = Series::from_values(vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        let c = centered_residuals(&s);
        assert!((c[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((c[1] + 5.0 / 6.0).abs() < 1e-15);
        assert!((c[2] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn centered_residuals_sum_to_zero() {
        for seed in 0..30 {
            let s = random_series(120, 0.95, seed);
            let c = centered_residuals(&s);
            let scale: f64 = c.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
            let sum: f64 = c.iter().sum();
            assert!(sum.abs() <= 1e-12 * (c.len() as f64) * scale);
        }
    }

    #[test]
    fn pure_decay_path_has_zero_centered_residuals() {
        // y_t = 0.6 y_{t-1} exactly from a nonzero anchor: rho_hat recovers
        // 0.6 and every residual vanishes.
        let mut y = vec![2.0];
        for _ in 0..15 {
            y.push(0.6 * y.last().unwrap());
        }
        let s = Series::from_values(y).unwrap();
        assert!((rho_hat_full(&s) - 0.6).abs() < 1e-15);
        let c = centered_residuals(&s);
        assert!(c.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn single_shock_path_centers_the_shock() {
        let mut shocks = vec![0.0; 20];
        shocks[0] = 2.0;
        let s = simulate_ar1(0.6, &shocks);
        let c = centered_residuals(&s);
        // The only nonzero raw residual is the first shock; centering spreads
        // its mean.
        let rho = rho_hat_full(&s);
        assert!((rho - 0.6).abs() < 1e-12);
        let mean = 2.0 / 20.0;
        assert!((c[0] - (2.0 - mean)).abs() < 1e-12);
        for v in &c[1..] {
            assert!((v + mean).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_sampler_examples() {
        let zeros = vec![0.0; 6];
        let s = bootstrap_sample_residual(0.9, &zeros, RngStream::new(1, 1));
        assert!(s.values().iter().all(|&v| v == 0.0));

        // Singleton residual forces a deterministic path.
        let c = 0.7;
        let s = bootstrap_sample_residual(0.5, &[c], RngStream::new(1, 2));
        assert_eq!(s.values(), &[0.0, c]);
        // Forced resampling of one residual: y*_t = c * sum_{j<t} rho^j.
        let rho: f64 = 0.5;
        let s = bootstrap_sample_from_indices(rho, &[c], &[0, 0, 0]);
        for (t, &v) in s.values().iter().enumerate() {
            let want: f64 = (0..t).map(|j| c * rho.powi(j as i32)).sum();
            assert!((v - want).abs() < 1e-15);
        }

        let s = bootstrap_sample_from_indices(0.0, &[10.0, 20.0, 30.0], &[2, 0, 1]);
        assert_eq!(s.values(), &[0.0, 30.0, 10.0, 20.0]);
    }

    #[test]
    fn wild_sampler_examples() {
        let zeros = vec![0.0; 6];
        let s = bootstrap_sample_wild(0.9, &zeros, RngStream::new(2, 1));
        assert!(s.values().iter().all(|&v| v == 0.0));

        let centered = vec![1.0, -0.5, 0.25, 2.0];
        let ones = vec![1.0; 4];
        let s = bootstrap_sample_from_multipliers(0.5, &centered, &ones);
        let expect = simulate_ar1(0.5, &centered);
        assert_eq!(s.values(), expect.values());

        // Sign-flipped multipliers negate the path, leaving the LP slopes
        // unchanged.
        let neg = vec![-1.0; 4];
        let s_neg = bootstrap_sample_from_multipliers(0.5, &centered, &neg);
        for (a, b) in s_neg.values().iter().zip(expect.values()) {
            assert_eq!(*a, -b);
        }
        let base = random_series(40, 0.9, 3);
        let c = centered_residuals(&base);
        let rho = rho_hat_full(&base);
        let plus = bootstrap_sample_from_multipliers(rho, &c, &vec![1.0; c.len()]);
        let minus = bootstrap_sample_from_multipliers(rho, &c, &vec![-1.0; c.len()]);
        let f_plus = fit_lp(&plus, 1).unwrap();
        let f_minus = fit_lp(&minus, 1).unwrap();
        assert!((f_plus.beta_hat - f_minus.beta_hat).abs() < 1e-12);
    }

    #[test]
    fn roots_are_deterministic_per_spec() {
        let s = random_series(60, 0.95, 12);
        let spec = BootstrapSpec {
            scheme: BootstrapScheme::Residual,
            b: 2,
            se_kind: SeKind::Hc,
            rng: RngStream::new(5, 77),
        };
        let a = bootstrap_roots(&s, 1, &spec).unwrap();
        let b = bootstrap_roots(&s, 1, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.roots.len(), 2);
        assert_eq!(a.beta_center, a.rho_hat.powi(1));
    }

    #[test]
    fn all_zero_residuals_abort() {
        // A noiseless decay path has centered residuals that regenerate
        // near-collinear bootstrap samples.
        let mut shocks = vec![0.0; 30];
        shocks[0] = 1.0;
        let s = simulate_ar1(0.5, &shocks);
        let spec = BootstrapSpec {
            scheme: BootstrapScheme::Residual,
            b: 50,
            se_kind: SeKind::Hc,
            rng: RngStream::new(6, 0),
        };
        // Force exactly-zero residuals: a pure zero series via from_values.
        let zero_series = Series::from_values(vec![0.0; 31]).unwrap();
        let err = bootstrap_roots(&zero_series, 1, &spec).unwrap_err();
        assert!(matches!(err, Error::TooManyDegenerateDraws { .. }));
        drop(s);
    }

    #[test]
    fn unit_root_bootstrap_roots_are_near_normal() {
        // Pilot-calibrated smoke check, base seed 2718.
        let s = random_series(400, 1.0, 2718);
        let spec = BootstrapSpec {
            scheme: BootstrapScheme::Residual,
            b: 2000,
            se_kind: SeKind::Hc,
            rng: RngStream::new(2718, 1),
        };
        let draws = bootstrap_roots(&s, 1, &spec).unwrap();
        assert_eq!(draws.failed_draws, 0);
        let d = ks_distance(&draws.roots, normal_cdf).unwrap();
        assert!(d < 0.08, "KS distance {d}");
    }

    #[test]
    fn critical_value_examples() {
        let mk = |roots: Vec<f64>| BootstrapDraws {
            roots,
            rho_hat: 0.5,
            beta_center: 0.5,
            scheme: BootstrapScheme::Residual,
            se_kind: SeKind::Hc,
            redraws: 0,
            failed_draws: 0,
        };
        let draws = mk(vec![1.0, -1.0, 2.0, -2.0]);
        assert_eq!(critical_value_sym(&draws, 0.5).unwrap(), 1.0);
        // alpha -> 0 returns the maximum absolute root.
        assert_eq!(critical_value_sym(&draws, 1e-9).unwrap(), 2.0);

        // B = 1000 synthetic standard normal roots: close to 1.645.
        let mut rng = RngStream::new(8, 8).rng();
        let normal_roots: Vec<f64> = (0..1000)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let c = critical_value_sym(&mk(normal_roots), 0.10).unwrap();
        assert!((c - 1.645).abs() < 0.15, "c = {c}");
    }

    #[test]
    fn quantile_pair_examples() {
        let mk = |roots: Vec<f64>| BootstrapDraws {
            roots,
            rho_hat: 0.5,
            beta_center: 0.5,
            scheme: BootstrapScheme::Residual,
            se_kind: SeKind::Hc,
            redraws: 0,
            failed_draws: 0,
        };
        // Order statistics under the infimum rule: k_lo = 1 -> -2,
        // k_hi = 3 -> 1.
        let (lo, hi) = quantile_pair_equal_tail(&mk(vec![1.0, -1.0, 2.0, -2.0]), 0.5).unwrap();
        assert_eq!((lo, hi), (-2.0, 1.0));

        let (lo, hi) = quantile_pair_equal_tail(&mk(vec![3.25; 9]), 0.1).unwrap();
        assert_eq!((lo, hi), (3.25, 3.25));

        let mut rng = RngStream::new(9, 1).rng();
        for _ in 0..50 {
            let roots: Vec<f64> = (0..rng.random_range(2..200))
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect();
            let (lo, hi) = quantile_pair_equal_tail(&mk(roots), 0.1).unwrap();
            assert!(lo <= hi);
        }
    }

    #[test]
    fn critical_value_nonincreasing_in_alpha() {
        let s = random_series(80, 0.95, 44);
        let spec = BootstrapSpec {
            scheme: BootstrapScheme::Wild,
            b: 400,
            se_kind: SeKind::Hc,
            rng: RngStream::new(10, 2),
        };
        let draws = bootstrap_roots(&s, 2, &spec).unwrap();
        let mut prev = f64::INFINITY;
        for alpha in [0.01, 0.05, 0.1, 0.2, 0.5, 0.9] {
            let c = critical_value_sym(&draws, alpha).unwrap();
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn scale_equivariance_with_matched_streams() {
        let s = random_series(70, 0.95, 91);
        let scaled = Series::from_values(s.values().iter().map(|v| 3.5 * v).collect()).unwrap();
        let c = centered_residuals(&s);
        let c_scaled = centered_residuals(&scaled);
        for (a, b) in c.iter().zip(&c_scaled) {
            assert!((3.5 * a - b).abs() < 1e-10);
        }
        for scheme in [BootstrapScheme::Residual, BootstrapScheme::Wild] {
            let spec = |rng| BootstrapSpec {
                scheme,
                b: 64,
                se_kind: SeKind::Hc,
                rng,
            };
            let d1 = bootstrap_roots(&s, 2, &spec(RngStream::new(3, 3))).unwrap();
            let d2 = bootstrap_roots(&scaled, 2, &spec(RngStream::new(3, 3))).unwrap();
            for (a, b) in d1.roots.iter().zip(&d2.roots) {
                assert!((a - b).abs() < 1e-10, "{scheme:?}: {a} vs {b}");
            }
        }
    }
}
