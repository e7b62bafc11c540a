//! Single-series inference: fit the local projection at each requested
//! horizon, run the bootstrap draw sets the chosen methods need, and build
//! their intervals.

use lpboot_core::{
    bootstrap_roots, build_interval, fit_lp, rho_hat_full, BootstrapDraws, BootstrapScheme,
    BootstrapSpec, IntervalMethod, RngStream, SeKind, Series,
};

use crate::error::{CliError, Result};

/// Stream label separating infer-mode draws from study streams.
const STREAM_INFER: u64 = 100;

#[derive(Debug, Clone)]
pub struct InferRow {
    pub h: usize,
    pub method: IntervalMethod,
    pub level: f64,
    pub beta_hat: f64,
    /// Standard error scaling this method's interval.
    pub se: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone)]
pub struct InferReport {
    pub rows: Vec<InferRow>,
    pub n: usize,
    pub level: f64,
    pub rho_hat: f64,
}

pub struct InferParams {
    pub horizons: Vec<usize>,
    pub alpha: f64,
    pub methods: Vec<IntervalMethod>,
    pub bootstrap_b: usize,
    pub seed: u64,
}

impl InferParams {
    fn validate(&self, n: usize) -> Result<()> {
        if self.horizons.is_empty() {
            return Err(CliError::Config("horizons: must not be empty".into()));
        }
        for &h in &self.horizons {
            if h == 0 || n < h + 3 {
                return Err(CliError::Config(format!(
                    "horizons: need 1 <= h <= n - 3 = {}, got {h}",
                    n.saturating_sub(3)
                )));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CliError::Config(format!(
                "alpha: must lie in (0,1), got {}",
                self.alpha
            )));
        }
        if self.methods.is_empty() {
            return Err(CliError::Config("methods: must not be empty".into()));
        }
        if self.bootstrap_b < 2 {
            return Err(CliError::Config("b: must be at least 2".into()));
        }
        Ok(())
    }
}

pub fn run_infer(series: &Series, params: &InferParams) -> Result<InferReport> {
    let n = series.sample_size();
    params.validate(n)?;

    let draw_sets: Vec<(BootstrapScheme, SeKind)> = {
        let mut sets = Vec::new();
        for m in &params.methods {
            if let Some(set) = m.required_draws() {
                if !sets.contains(&set) {
                    sets.push(set);
                }
            }
        }
        sets
    };

    let base = RngStream::new(params.seed, 0).derive(&[STREAM_INFER]);
    let mut rows = Vec::new();
    for &h in &params.horizons {
        let fit = fit_lp(series, h)?;
        let mut draws: Vec<((BootstrapScheme, SeKind), BootstrapDraws)> = Vec::new();
        for (i, &(scheme, se_kind)) in draw_sets.iter().enumerate() {
            let spec = BootstrapSpec {
                scheme,
                b: params.bootstrap_b,
                se_kind,
                rng: base.derive(&[i as u64 + 1]),
            };
            draws.push(((scheme, se_kind), bootstrap_roots(series, h, &spec)?));
        }
        for &method in &params.methods {
            let set = method
                .required_draws()
                .map(|key| &draws.iter().find(|(k, _)| *k == key).expect("set computed").1);
            let ci = build_interval(&fit, method, params.alpha, set)?;
            rows.push(InferRow {
                h,
                method,
                level: ci.level,
                beta_hat: fit.beta_hat,
                se: fit.se(method.interval_se_kind()),
                lower: ci.lower,
                upper: ci.upper,
            });
        }
    }
    Ok(InferReport {
        rows,
        n,
        level: 1.0 - params.alpha,
        rho_hat: rho_hat_full(series),
    })
}
