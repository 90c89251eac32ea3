use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::UniformSeries;

/// Equal-width histogram with probability-density normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }
}

pub fn histogram(x: &UniformSeries, n_bins: usize) -> Result<Histogram> {
    if n_bins < 2 {
        return Err(Error::InvalidConfig(format!("n_bins must be >= 2, got {n_bins}")));
    }
    x.require_len(1)?;
    let v = x.values();
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(Error::DegenerateRange);
    }
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    for &s in v {
        let idx = (((s - lo) / width) as usize).min(n_bins - 1);
        counts[idx] += 1;
    }
    let bin_edges: Vec<f64> = (0..=n_bins)
        .map(|i| if i == n_bins { hi } else { lo + i as f64 * width })
        .collect();
    let n = v.len() as f64;
    let densities = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, w)| c as f64 / (n * (w[1] - w[0])))
        .collect();
    Ok(Histogram {
        bin_edges,
        densities,
        counts,
    })
}

/// Prefix mean and population variance.
#[derive(Debug, Clone, PartialEq)]
pub struct RunningMoments {
    pub running_mean: UniformSeries,
    pub running_var: UniformSeries,
}

/// One-pass (Welford) prefix moments.
pub fn running_moments(x: &UniformSeries) -> Result<RunningMoments> {
    x.require_len(1)?;
    let mut means = Vec::with_capacity(x.len());
    let mut vars = Vec::with_capacity(x.len());
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &v) in x.values().iter().enumerate() {
        let n = (i + 1) as f64;
        let delta = v - mean;
        mean += delta / n;
        m2 += delta * (v - mean);
        means.push(mean);
        vars.push((m2 / n).max(0.0));
    }
    Ok(RunningMoments {
        running_mean: UniformSeries::with_start(means, x.dt(), x.t0())?,
        running_var: UniformSeries::with_start(vars, x.dt(), x.t0())?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettlingReport {
    /// Seconds from the first sample; `None` when the statistic never settles.
    pub settling_time: Option<f64>,
    pub final_value: f64,
    /// Absolute half-width of the band around `final_value`.
    pub band: f64,
}

impl SettlingReport {
    pub fn is_settled(&self) -> bool {
        self.settling_time.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettlingTolerance {
    pub rel_tol: f64,
    pub abs_floor: f64,
}

impl Default for SettlingTolerance {
    fn default() -> Self {
        Self {
            rel_tol: 0.02,
            abs_floor: 0.005,
        }
    }
}

/// First time after which `stat` stays within `max(rel_tol·|final|, abs_floor)`
/// of its last value.
pub fn settling_time(stat: &UniformSeries, tol: SettlingTolerance) -> Result<SettlingReport> {
    stat.require_len(2)?;
    let v = stat.values();
    let final_value = *v.last().unwrap();
    let band = (tol.rel_tol * final_value.abs()).max(tol.abs_floor);
    let outside = v.iter().rposition(|&s| (s - final_value).abs() > band);
    let settling_time = match outside {
        None => Some(0.0),
        Some(i) if i + 2 == v.len() => None,
        Some(i) => Some((i + 1) as f64 * stat.dt()),
    };
    Ok(SettlingReport {
        settling_time,
        final_value,
        band,
    })
}
