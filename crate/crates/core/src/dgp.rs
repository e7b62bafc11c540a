//! Data-generating processes: the four GARCH(1,1) shock designs, the AR(1)
//! recursion, and counter-based reproducible RNG streams.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the printed component scales enter the mixture normalization
/// `sigma2^2 = p (m1^2 + s1) + (1-p) (m0^2 + s0)`.
///
/// `AsPrinted` feeds the component scales in linearly, which reproduces the
/// normalization formula verbatim. `Variance` squares them first, making the
/// scaled mixture variance exactly one. The two readings differ by about 2%
/// in the innovation variance of the mixture design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceConvention {
    #[default]
    AsPrinted,
    Variance,
}

/// Distribution of the GARCH innovation `v_t`. Every variant is normalized
/// to mean zero; see [`Innovation::variance`] for the exact second moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Innovation {
    /// Standard normal.
    Gaussian,
    /// Student t with 4 degrees of freedom scaled by 1/sqrt(2) so the
    /// variance is one.
    StudentT4Scaled,
    /// Two-component normal mixture scaled by `1/scale`. The component
    /// parameters are the raw (unscaled) values; `B = 1` selects the
    /// `(mean1, sd1)` component with probability `p`.
    MixtureNormal {
        p: f64,
        mean0: f64,
        mean1: f64,
        sd0: f64,
        sd1: f64,
        scale: f64,
    },
}

impl Innovation {
    /// Draw one innovation.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Innovation::Gaussian => rng.sample(StandardNormal),
            Innovation::StudentT4Scaled => {
                // t_4 via the ratio construction N(0,1) / sqrt(chi^2_4 / 4).
                let z: f64 = rng.sample(StandardNormal);
                let w: f64 = ChiSquared::new(4.0).unwrap().sample(rng);
                z / (w / 4.0).sqrt() / std::f64::consts::SQRT_2
            }
            Innovation::MixtureNormal {
                p,
                mean0,
                mean1,
                sd0,
                sd1,
                scale,
            } => {
                let pick_one: f64 = rng.random();
                let z: f64 = rng.sample(StandardNormal);
                let (m, s) = if pick_one < p { (mean1, sd1) } else { (mean0, sd0) };
                (m + s * z) / scale
            }
        }
    }

    /// Exact mean of one draw.
    pub fn mean(&self) -> f64 {
        match *self {
            Innovation::Gaussian | Innovation::StudentT4Scaled => 0.0,
            Innovation::MixtureNormal {
                p,
                mean0,
                mean1,
                scale,
                ..
            } => (p * mean1 + (1.0 - p) * mean0) / scale,
        }
    }

    /// Exact variance of one draw.
    pub fn variance(&self) -> f64 {
        match *self {
            Innovation::Gaussian | Innovation::StudentT4Scaled => 1.0,
            Innovation::MixtureNormal {
                p,
                mean0,
                mean1,
                sd0,
                sd1,
                scale,
            } => {
                let second = p * (mean1 * mean1 + sd1 * sd1)
                    + (1.0 - p) * (mean0 * mean0 + sd0 * sd0);
                second / (scale * scale) - self.mean().powi(2)
            }
        }
    }
}

/// A shock-generating process: GARCH(1,1) volatility driven by one of the
/// innovation distributions.
///
/// `u_t = tau_t v_t` with `tau_t^2 = omega0 + omega1 u_{t-1}^2
/// + omega2 tau_{t-1}^2`. The i.i.d. designs are the special case
/// `omega1 = omega2 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockDesign {
    pub innovation: Innovation,
    pub omega0: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Pre-sample periods discarded before the first returned shock.
    pub burn_in: usize,
}

/// Default number of discarded pre-sample periods.
pub const DEFAULT_BURN_IN: usize = 100;

/// Raw mixture parameters of the fourth shock design.
const MIX_P: f64 = 0.25;
const MIX_MEAN0: f64 = 2.0;
const MIX_MEAN1: f64 = -6.0;
const MIX_SD0: f64 = 0.5;
const MIX_SD1: f64 = 2.0;

impl ShockDesign {
    pub fn new(
        innovation: Innovation,
        omega0: f64,
        omega1: f64,
        omega2: f64,
        burn_in: usize,
    ) -> Result<Self> {
        if omega0.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::ConfigError(format!(
                "omega0: must be positive, got {omega0}"
            )));
        }
        if omega1 < 0.0 || omega2 < 0.0 {
            return Err(Error::ConfigError(
                "omega1/omega2: must be nonnegative".into(),
            ));
        }
        if omega1 + omega2 >= 1.0 {
            return Err(Error::ConfigError(format!(
                "omega1 + omega2: must be below 1 for covariance stationarity, got {}",
                omega1 + omega2
            )));
        }
        Ok(ShockDesign {
            innovation,
            omega0,
            omega1,
            omega2,
            burn_in,
        })
    }

    /// Design 1: i.i.d. standard normal shocks.
    pub fn gaussian_iid() -> Self {
        Self::new(Innovation::Gaussian, 1.0, 0.0, 0.0, DEFAULT_BURN_IN).unwrap()
    }

    /// Design 2: Gaussian GARCH(1,1) shocks with unit unconditional variance.
    pub fn gaussian_garch() -> Self {
        Self::new(Innovation::Gaussian, 0.05, 0.3, 0.65, DEFAULT_BURN_IN).unwrap()
    }

    /// Design 3: i.i.d. scaled Student-t(4) shocks.
    pub fn student_t_iid() -> Self {
        Self::new(Innovation::StudentT4Scaled, 1.0, 0.0, 0.0, DEFAULT_BURN_IN).unwrap()
    }

    /// Design 4: asymmetric mixture-normal GARCH(1,1) shocks.
    pub fn mixture_garch(convention: VarianceConvention) -> Self {
        let norm = match convention {
            VarianceConvention::AsPrinted => {
                MIX_P * (MIX_MEAN1 * MIX_MEAN1 + MIX_SD1)
                    + (1.0 - MIX_P) * (MIX_MEAN0 * MIX_MEAN0 + MIX_SD0)
            }
            VarianceConvention::Variance => {
                MIX_P * (MIX_MEAN1 * MIX_MEAN1 + MIX_SD1 * MIX_SD1)
                    + (1.0 - MIX_P) * (MIX_MEAN0 * MIX_MEAN0 + MIX_SD0 * MIX_SD0)
            }
        };
        let innovation = Innovation::MixtureNormal {
            p: MIX_P,
            mean0: MIX_MEAN0,
            mean1: MIX_MEAN1,
            sd0: MIX_SD0,
            sd1: MIX_SD1,
            scale: norm.sqrt(),
        };
        Self::new(innovation, 0.05, 0.3, 0.65, DEFAULT_BURN_IN).unwrap()
    }

    /// Shock design by its table number 1..=4.
    pub fn from_id(id: u8, convention: VarianceConvention) -> Result<Self> {
        match id {
            1 => Ok(Self::gaussian_iid()),
            2 => Ok(Self::gaussian_garch()),
            3 => Ok(Self::student_t_iid()),
            4 => Ok(Self::mixture_garch(convention)),
            other => Err(Error::ConfigError(format!(
                "designs: unknown shock design id {other}, expected 1..=4"
            ))),
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    /// Variance the GARCH recursion is initialized at: `omega0 / (1 - omega1
    /// - omega2)`, which reduces to `omega0` in the i.i.d. case.
    pub fn initial_variance(&self) -> f64 {
        self.omega0 / (1.0 - self.omega1 - self.omega2)
    }
}

/// Handle for one reproducible random stream. Distinct `(base_seed,
/// stream_id)` pairs give statistically independent streams; the same pair
/// gives a bit-identical sequence on every run and thread schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub base_seed: u64,
    pub stream_id: u64,
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(base_seed: u64, stream_id: u64) -> Self {
        RngStream {
            base_seed,
            stream_id,
        }
    }

    /// Child stream labelled by `parts`. The fold is order-sensitive, so
    /// `derive(&[a, b])` and `derive(&[b, a])` are distinct streams.
    pub fn derive(&self, parts: &[u64]) -> RngStream {
        let mut id = self.stream_id;
        for &p in parts {
            id = mix64(id ^ mix64(p.wrapping_add(0x9e37_79b9_7f4a_7c15)));
        }
        RngStream {
            base_seed: self.base_seed,
            stream_id: id,
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// A simulated or ingested AR(1) path `y_0..y_n`. `y[0]` is the lag anchor;
/// simulated series always start at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    y: Vec<f64>,
    rho_true: Option<f64>,
}

impl Series {
    /// Wrap an observed path. The first value is used as the lag anchor.
    pub fn from_values(y: Vec<f64>) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::DomainError(format!(
                "series needs at least 2 values, got {}",
                y.len()
            )));
        }
        if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
            return Err(Error::DomainError(format!(
                "series contains a non-finite value {bad}"
            )));
        }
        Ok(Series { y, rho_true: None })
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    /// Number of observations after the lag anchor.
    pub fn sample_size(&self) -> usize {
        self.y.len() - 1
    }

    /// AR coefficient used to generate the series, when simulated.
    pub fn rho_true(&self) -> Option<f64> {
        self.rho_true
    }
}

/// One innovation draw `v_t` from the design's distribution.
pub fn draw_innovation<R: Rng + ?Sized>(design: &ShockDesign, rng: &mut R) -> f64 {
    design.innovation.draw(rng)
}

/// Generate `n` shocks from the GARCH(1,1) recursion, after discarding
/// `design.burn_in` initial periods. The recursion starts at the
/// unconditional variance.
pub fn generate_shocks(design: &ShockDesign, n: usize, stream: RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    generate_shocks_with(design, n, || design.innovation.draw(&mut rng))
}

/// Recursion core with an injectable innovation source.
pub(crate) fn generate_shocks_with(
    design: &ShockDesign,
    n: usize,
    mut next_v: impl FnMut() -> f64,
) -> Vec<f64> {
    assert!(n >= 1, "need at least one shock");
    let mut tau2 = design.initial_variance();
    let mut out = Vec::with_capacity(n);
    for t in 0..design.burn_in + n {
        let u = tau2.sqrt() * next_v();
        if t >= design.burn_in {
            out.push(u);
        }
        tau2 = design.omega0 + design.omega1 * u * u + design.omega2 * tau2;
    }
    out
}

/// Run the AR(1) recursion `y_t = rho y_{t-1} + u_t` from `y_0 = 0`.
///
/// `rho` may overshoot the unit circle by at most 1e-12 and is clamped.
pub fn simulate_ar1(rho: f64, shocks: &[f64]) -> Series {
    assert!(!shocks.is_empty(), "need at least one shock");
    debug_assert!(rho.abs() <= 1.0 + 1e-12, "rho out of range: {rho}");
    let rho_eff = rho.clamp(-1.0, 1.0);
    let mut y = Vec::with_capacity(shocks.len() + 1);
    y.push(0.0);
    let mut prev = 0.0;
    for &u in shocks {
        prev = rho_eff * prev + u;
        y.push(prev);
    }
    Series {
        y,
        rho_true: Some(rho_eff),
    }
}
