use serde::{Deserialize, Serialize};

use super::fit::ArmaModel;
use crate::error::{Error, Result};
use crate::series::{saturate, SaturationBounds, UniformSeries};

pub const Z95: f64 = 1.96;

/// Point forecast and 95% band for leads `1..=L` from one origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastPath {
    /// Index of the last observed sample.
    pub origin_index: usize,
    pub lead: usize,
    pub point: Vec<f64>,
    pub ci95_lo: Vec<f64>,
    pub ci95_hi: Vec<f64>,
}

/// Builds a path from point forecasts and cumulative error variances,
/// clamping everything when `bounds` is given.
pub(crate) fn assemble_path(
    origin_index: usize,
    point: Vec<f64>,
    variances: &[f64],
    bounds: Option<SaturationBounds>,
) -> ForecastPath {
    let clamp = |v: f64| match bounds {
        Some(b) => saturate(v, b),
        None => v,
    };
    let half: Vec<f64> = variances.iter().map(|v| Z95 * v.sqrt()).collect();
    ForecastPath {
        origin_index,
        lead: point.len(),
        ci95_lo: point.iter().zip(&half).map(|(p, h)| clamp(p - h)).collect(),
        ci95_hi: point.iter().zip(&half).map(|(p, h)| clamp(p + h)).collect(),
        point,
    }
}

/// `ψ_0..ψ_{L−1}` of the MA(∞) representation.
pub fn psi_weights(model: &ArmaModel, lead: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(lead);
    for j in 0..lead {
        if j == 0 {
            psi.push(1.0);
            continue;
        }
        let mut v: f64 = (1..=j.min(model.g)).map(|i| model.phi[i - 1] * psi[j - i]).sum();
        if j <= model.h {
            v -= model.theta[j - 1];
        }
        psi.push(v);
    }
    psi
}

/// Forecast error variance at leads `1..=L`.
pub fn forecast_variances(model: &ArmaModel, lead: usize) -> Vec<f64> {
    let mut acc = 0.0;
    psi_weights(model, lead)
        .into_iter()
        .map(|p| {
            acc += p * p;
            model.sigma2_a * acc
        })
        .collect()
}

/// In-sample innovations `a[k]`, zero before index `g`.
pub fn innovations(model: &ArmaModel, x: &[f64]) -> Vec<f64> {
    let mut a = vec![0.0; x.len()];
    for k in model.g..x.len() {
        let mut e = x[k] - model.mu;
        for i in 1..=model.g {
            e -= model.phi[i - 1] * x[k - i];
        }
        for j in 1..=model.h.min(k) {
            e += model.theta[j - 1] * a[k - j];
        }
        a[k] = e;
    }
    a
}

/// Point forecasts from `origin` given the observed prefix and its
/// innovations. Future innovations are zero.
pub(crate) fn point_forecast(
    model: &ArmaModel,
    x: &[f64],
    innov: &[f64],
    origin: usize,
    lead: usize,
    saturated: bool,
) -> Vec<f64> {
    let g = model.g;
    let mut hist: Vec<f64> = Vec::with_capacity(g + lead);
    let lo = (origin + 1).saturating_sub(g);
    hist.extend_from_slice(&x[lo..=origin]);
    let base = hist.len();
    let mut out = Vec::with_capacity(lead);
    for step in 1..=lead {
        let pos = base - 1 + step;
        let mut v = model.mu;
        for i in 1..=g {
            if pos >= i {
                v += model.phi[i - 1] * hist[pos - i];
            }
        }
        for j in step..=model.h {
            let k = origin + step;
            if k >= j {
                v -= model.theta[j - 1] * innov[k - j];
            }
        }
        if saturated {
            v = saturate(v, model.bounds);
        }
        hist.push(v);
        out.push(v);
    }
    out
}

/// Forecasts `lead` steps past the end of `history`. With `saturated`, each
/// iterate is clamped before it feeds later steps.
pub fn forecast(model: &ArmaModel, history: &UniformSeries, lead: usize, saturated: bool) -> Result<ForecastPath> {
    let need = model.g.max(1);
    if history.len() < need {
        return Err(Error::HistoryTooShort {
            needed: need,
            got: history.len(),
        });
    }
    if lead == 0 {
        return Err(Error::LeadOutOfRange {
            lead,
            len: history.len(),
        });
    }
    let x = history.values();
    let innov = innovations(model, x);
    let origin = x.len() - 1;
    let point = point_forecast(model, x, &innov, origin, lead, saturated);
    let vars = forecast_variances(model, lead);
    Ok(assemble_path(origin, point, &vars, saturated.then_some(model.bounds)))
}
