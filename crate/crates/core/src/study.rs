//! Monte Carlo coverage study: replicate (simulate, fit, bootstrap, build
//! intervals, score coverage) over a grid of shock designs, AR coefficients,
//! horizons, and interval methods, in parallel and bit-reproducibly.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_roots, BootstrapDraws, BootstrapScheme, BootstrapSpec};
use crate::dgp::{generate_shocks, simulate_ar1, RngStream, ShockDesign, VarianceConvention};
use crate::error::{Error, Result};
use crate::intervals::{build_interval, covers, IntervalMethod, ALL_METHODS};
use crate::lp::{fit_lp, impulse_response, SeKind};

/// Stream label for the shock draws of one replication.
pub const STREAM_SERIES: u64 = 1;
/// Stream label for the residual-scheme draw set studentized by HC.
pub const STREAM_RESIDUAL_HC: u64 = 2;
/// Stream label for the residual-scheme draw set studentized by HC3.
pub const STREAM_RESIDUAL_HC3: u64 = 3;
/// Stream label for the wild-scheme draw set studentized by HC.
pub const STREAM_WILD_HC: u64 = 4;

/// The three bootstrap draw sets a replication can need, in stream order.
const DRAW_SETS: [(BootstrapScheme, SeKind, u64); 3] = [
    (BootstrapScheme::Residual, SeKind::Hc, STREAM_RESIDUAL_HC),
    (BootstrapScheme::Residual, SeKind::Hc3, STREAM_RESIDUAL_HC3),
    (BootstrapScheme::Wild, SeKind::Hc, STREAM_WILD_HC),
];

fn default_methods() -> Vec<IntervalMethod> {
    ALL_METHODS.to_vec()
}

/// Configuration of a coverage study.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    /// Shock design ids 1..=4.
    pub designs: Vec<u8>,
    /// AR coefficients, each in [-1, 1].
    pub rhos: Vec<f64>,
    /// Sample size of each simulated series.
    pub n: usize,
    /// Horizons, each with `n - h >= 3`.
    pub horizons: Vec<usize>,
    /// One minus the nominal level.
    pub alpha: f64,
    /// Number of Monte Carlo replications.
    #[serde(alias = "R")]
    pub replications: usize,
    /// Number of bootstrap draws per draw set.
    #[serde(alias = "B")]
    pub bootstrap_b: usize,
    /// Interval methods to evaluate; defaults to all eight.
    #[serde(default = "default_methods")]
    pub methods: Vec<IntervalMethod>,
    /// Base seed of the study's stream tree.
    #[serde(alias = "seed")]
    pub base_seed: u64,
    /// Worker thread hint; 0 uses the rayon default.
    #[serde(default)]
    pub threads: usize,
    /// Mixture normalization convention of shock design 4.
    #[serde(default)]
    pub variance_convention: VarianceConvention,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.designs.is_empty() {
            return Err(Error::ConfigError("designs: must not be empty".into()));
        }
        for &d in &self.designs {
            ShockDesign::from_id(d, self.variance_convention)?;
        }
        if self.rhos.is_empty() {
            return Err(Error::ConfigError("rhos: must not be empty".into()));
        }
        for &rho in &self.rhos {
            if !(rho.is_finite() && rho.abs() <= 1.0) {
                return Err(Error::ConfigError(format!(
                    "rhos: coefficient must lie in [-1, 1], got {rho}"
                )));
            }
        }
        if self.horizons.is_empty() {
            return Err(Error::ConfigError("horizons: must not be empty".into()));
        }
        for &h in &self.horizons {
            if h == 0 {
                return Err(Error::ConfigError("horizons: must be at least 1".into()));
            }
            if self.n < h + 3 {
                return Err(Error::ConfigError(format!(
                    "horizons: n - h must be at least 3, got n = {} and h = {h}",
                    self.n
                )));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::ConfigError(format!(
                "alpha: must lie in (0,1), got {}",
                self.alpha
            )));
        }
        if self.replications < 1 {
            return Err(Error::ConfigError("replications: must be at least 1".into()));
        }
        if self.bootstrap_b < 2 {
            return Err(Error::ConfigError("bootstrap_b: must be at least 2".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::ConfigError("methods: must not be empty".into()));
        }
        Ok(())
    }
}

/// One (design, rho) batch of the study grid.
#[derive(Debug, Clone)]
pub struct CellPlan {
    pub design_id: u8,
    pub design: ShockDesign,
    pub rho: f64,
    pub n: usize,
    pub horizons: Vec<usize>,
    pub alpha: f64,
    pub bootstrap_b: usize,
    pub methods: Vec<IntervalMethod>,
    /// Root stream of this batch; replication `r` derives its children from
    /// `stream.derive(&[r, label])`.
    pub stream: RngStream,
}

impl CellPlan {
    fn from_config(cfg: &StudyConfig, design_id: u8, rho: f64) -> Result<CellPlan> {
        Ok(CellPlan {
            design_id,
            design: ShockDesign::from_id(design_id, cfg.variance_convention)?,
            rho,
            n: cfg.n,
            horizons: cfg.horizons.clone(),
            alpha: cfg.alpha,
            bootstrap_b: cfg.bootstrap_b,
            methods: cfg.methods.clone(),
            stream: RngStream::new(cfg.base_seed, 0).derive(&[design_id as u64, rho.to_bits()]),
        })
    }

    /// Draw sets needed by the configured methods, in stream order.
    fn needed_draw_sets(&self) -> Vec<(BootstrapScheme, SeKind, u64)> {
        DRAW_SETS
            .into_iter()
            .filter(|&(scheme, se_kind, _)| {
                self.methods
                    .iter()
                    .any(|m| m.required_draws() == Some((scheme, se_kind)))
            })
            .collect()
    }
}

/// Coverage outcome of a single (horizon, method) pair in one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodOutcome {
    pub covered: bool,
    pub length: f64,
}

/// All outcomes of one replication, indexed `[horizon][method]` in plan
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub outcomes: Vec<Vec<MethodOutcome>>,
}

/// Run one replication: simulate a series, then for every horizon compute
/// the needed bootstrap draw sets and score every configured method against
/// the true impulse response.
///
/// The series is shared across horizons and methods. Per (horizon, scheme),
/// the draw set is shared among the methods that consume it, and the three
/// schemes use streams labelled by [`STREAM_RESIDUAL_HC`],
/// [`STREAM_RESIDUAL_HC3`], and [`STREAM_WILD_HC`].
pub fn run_replication(plan: &CellPlan, replication: u64) -> Result<ReplicationRecord> {
    let fail = |source: Error| Error::ReplicationFailed {
        replication,
        source: Box::new(source),
    };

    let shocks = generate_shocks(
        &plan.design,
        plan.n,
        plan.stream.derive(&[replication, STREAM_SERIES]),
    );
    let series = simulate_ar1(plan.rho, &shocks);
    let draw_sets = plan.needed_draw_sets();

    let mut outcomes = Vec::with_capacity(plan.horizons.len());
    for &h in &plan.horizons {
        let fit = fit_lp(&series, h).map_err(fail)?;
        let mut draws: Vec<((BootstrapScheme, SeKind), BootstrapDraws)> =
            Vec::with_capacity(draw_sets.len());
        for &(scheme, se_kind, label) in &draw_sets {
            let spec = BootstrapSpec {
                scheme,
                b: plan.bootstrap_b,
                se_kind,
                rng: plan.stream.derive(&[replication, label]),
            };
            draws.push(((scheme, se_kind), bootstrap_roots(&series, h, &spec).map_err(fail)?));
        }
        let beta_true = impulse_response(plan.rho, h);
        let mut per_method = Vec::with_capacity(plan.methods.len());
        for &method in &plan.methods {
            let set = method
                .required_draws()
                .map(|key| &draws.iter().find(|(k, _)| *k == key).expect("draw set computed").1);
            let ci = build_interval(&fit, method, plan.alpha, set).map_err(fail)?;
            per_method.push(MethodOutcome {
                covered: covers(&ci, beta_true),
                length: ci.length(),
            });
        }
        outcomes.push(per_method);
    }
    Ok(ReplicationRecord { outcomes })
}

/// Aggregated coverage and length statistics for one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub design: u8,
    pub rho: f64,
    pub n: usize,
    pub h: usize,
    pub method: IntervalMethod,
    /// Fraction of successful replications whose interval covered the truth.
    pub coverage_rate: f64,
    /// Binomial Monte Carlo standard error of `coverage_rate`.
    pub mc_se: f64,
    /// Median interval length over successful replications.
    pub median_length: f64,
    /// Replications excluded from the rates.
    pub failed_replications: usize,
    /// Wall-clock seconds of the (design, rho) batch that produced the cell.
    pub wall_time: f64,
}

/// All cells of a study, in (design, rho, horizon, method) config order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoverageReport {
    pub cells: Vec<CellRecord>,
}

impl CoverageReport {
    pub fn cell(
        &self,
        design: u8,
        rho: f64,
        h: usize,
        method: IntervalMethod,
    ) -> Option<&CellRecord> {
        self.cells
            .iter()
            .find(|c| c.design == design && c.rho == rho && c.h == h && c.method == method)
    }
}

fn median(sorted: &mut [f64]) -> f64 {
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Run the full study grid. Replications are distributed over a dedicated
/// thread pool sized by `cfg.threads`; results are identical for any thread
/// count because every replication owns a derived stream and results are
/// aggregated in replication order.
pub fn run_study(cfg: &StudyConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::ConfigError(format!("threads: {e}")))?;

    let mut report = CoverageReport::default();
    for &design_id in &cfg.designs {
        for &rho in &cfg.rhos {
            let plan = CellPlan::from_config(cfg, design_id, rho)?;
            let start = Instant::now();
            let results: Vec<Result<ReplicationRecord>> = pool.install(|| {
                (0..cfg.replications as u64)
                    .into_par_iter()
                    .map(|r| run_replication(&plan, r))
                    .collect()
            });
            let wall_time = start.elapsed().as_secs_f64();

            let failed = results.iter().filter(|r| r.is_err()).count();
            for (hi, &h) in plan.horizons.iter().enumerate() {
                for (mi, &method) in plan.methods.iter().enumerate() {
                    let mut covered = 0usize;
                    let mut lengths = Vec::with_capacity(results.len() - failed);
                    for rec in results.iter().flatten() {
                        let outcome = rec.outcomes[hi][mi];
                        covered += outcome.covered as usize;
                        lengths.push(outcome.length);
                    }
                    let ok = lengths.len();
                    let rate = if ok > 0 { covered as f64 / ok as f64 } else { f64::NAN };
                    let mc_se = if ok > 0 {
                        (rate * (1.0 - rate) / ok as f64).sqrt()
                    } else {
                        f64::NAN
                    };
                    report.cells.push(CellRecord {
                        design: design_id,
                        rho,
                        n: cfg.n,
                        h,
                        method,
                        coverage_rate: rate,
                        mc_se,
                        median_length: median(&mut lengths),
                        failed_replications: failed,
                        wall_time,
                    });
                }
            }
        }
    }
    Ok(report)
}
