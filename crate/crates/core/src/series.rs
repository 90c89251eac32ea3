//! Uniformly sampled series and the elementary transforms shared by every
//! other module: saturation, first-order lag filtering, block-mean
//! resampling, and lead-window slopes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evenly sampled real-valued series.
///
/// Values are finite and `dt` is strictly positive; both are checked on
/// construction. `t0` is the epoch time (seconds) of the first sample when
/// known.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSeries {
    values: Vec<f64>,
    dt: f64,
    t0: Option<f64>,
}

impl UniformSeries {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        Self::with_start(values, dt, None)
    }

    pub fn with_start(values: Vec<f64>, dt: f64, t0: Option<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidSampleInterval(dt));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        Ok(Self { values, dt, t0 })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> Option<f64> {
        self.t0
    }

    /// Start time, treating an unknown epoch as zero.
    pub fn start(&self) -> f64 {
        self.t0.unwrap_or(0.0)
    }

    /// Time stamp of sample `k`.
    pub fn time_at(&self, k: usize) -> f64 {
        self.start() + k as f64 * self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sub-series `[start, end)` with the start time shifted accordingly.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        let t0 = self.t0.map(|t| t + start as f64 * self.dt);
        Self {
            values: self.values[start..end].to_vec(),
            dt: self.dt,
            t0,
        }
    }

    /// Same sampling grid, new values. Values must be finite.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::with_start(self.values.iter().map(|&v| f(v)).collect(), self.dt, self.t0)
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        variance(&self.values)
    }

    pub fn std(&self) -> f64 {
        self.variance().sqrt()
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::TooShort {
                needed,
                got: self.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

pub(crate) fn variance(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    if x.iter().all(|&v| v == x[0]) {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64
}

/// Closed interval a signal is clamped to. Reg-D uses `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationBounds {
    pub lo: f64,
    pub hi: f64,
}

impl SaturationBounds {
    pub const REG_D: SaturationBounds = SaturationBounds { lo: -1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidBounds { lo, hi });
        }
        Ok(Self { lo, hi })
    }
}

impl Default for SaturationBounds {
    fn default() -> Self {
        Self::REG_D
    }
}

pub fn saturate(x: f64, b: SaturationBounds) -> f64 {
    x.max(b.lo).min(b.hi)
}

/// Discretized `1/(tau*s + 1)` with pole `exp(-dt/tau)` and unit DC gain,
/// started at the first input sample.
pub fn lag_filter(u: &UniformSeries, tau: f64) -> Result<UniformSeries> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::NonPositiveTau(tau));
    }
    u.require_len(1)?;
    let alpha = (-u.dt / tau).exp();
    let mut out = Vec::with_capacity(u.len());
    let mut y = u.values[0];
    out.push(y);
    for &x in &u.values[1..] {
        y += (1.0 - alpha) * (x - y);
        out.push(y);
    }
    UniformSeries::with_start(out, u.dt, u.t0)
}

/// Integer ratio `new_dt / dt` when it is one (to 1e-9 relative).
pub(crate) fn integer_ratio(dt: f64, new_dt: f64) -> Result<usize> {
    let r = new_dt / dt;
    let m = r.round();
    if !(m >= 1.0 && (r - m).abs() <= 1e-9 * m) {
        return Err(Error::NonIntegerRatio { dt, new_dt });
    }
    Ok(m as usize)
}

/// Block means over `m = new_dt / dt` consecutive samples; a trailing
/// partial block is dropped.
pub fn resample_mean(u: &UniformSeries, new_dt: f64) -> Result<UniformSeries> {
    if !(new_dt.is_finite() && new_dt > 0.0) {
        return Err(Error::InvalidSampleInterval(new_dt));
    }
    let m = integer_ratio(u.dt, new_dt)?;
    if m == 1 {
        return Ok(u.clone());
    }
    let values = u
        .values
        .chunks_exact(m)
        .map(|c| c.iter().sum::<f64>() / m as f64)
        .collect();
    UniformSeries::with_start(values, new_dt, u.t0)
}

/// Forward difference quotient over `lead` samples.
pub fn slope(u: &UniformSeries, lead: usize) -> Result<UniformSeries> {
    if lead == 0 || lead >= u.len() {
        return Err(Error::LeadOutOfRange {
            lead,
            len: u.len(),
        });
    }
    let span = lead as f64 * u.dt;
    let values = u
        .values
        .windows(lead + 1)
        .map(|w| (w[lead] - w[0]) / span)
        .collect();
    UniformSeries::with_start(values, u.dt, u.t0)
}
