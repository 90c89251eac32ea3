use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{companion_radius, ols};
use crate::series::{SaturationBounds, UniformSeries};

/// Saturated ARMA(g, h):
/// `r[k] = μ + Σ φ_i r[k−i] + a[k] − Σ θ_j a[k−j]`, clamped to `bounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmaModel {
    pub g: usize,
    pub h: usize,
    /// Intercept ("main level") of the recursion.
    pub mu: f64,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    /// Innovation variance.
    pub sigma2_a: f64,
    pub bounds: SaturationBounds,
}

impl ArmaModel {
    pub fn ar(mu: f64, phi: Vec<f64>, sigma2_a: f64) -> Self {
        Self {
            g: phi.len(),
            h: 0,
            mu,
            phi,
            theta: Vec::new(),
            sigma2_a,
            bounds: SaturationBounds::REG_D,
        }
    }

    pub fn arma(mu: f64, phi: Vec<f64>, theta: Vec<f64>, sigma2_a: f64) -> Self {
        Self {
            g: phi.len(),
            h: theta.len(),
            mu,
            phi,
            theta,
            sigma2_a,
            bounds: SaturationBounds::REG_D,
        }
    }

    /// Spectral radius of the AR companion matrix; < 1 means stationary.
    pub fn ar_radius(&self) -> f64 {
        companion_radius(&self.phi)
    }

    /// Spectral radius of the MA companion matrix; < 1 means invertible.
    pub fn ma_radius(&self) -> f64 {
        companion_radius(&self.theta)
    }

    pub fn is_stationary(&self) -> bool {
        self.ar_radius() < 1.0
    }

    /// Mean of the unsaturated stationary process.
    pub fn process_mean(&self) -> f64 {
        self.mu / (1.0 - self.phi.iter().sum::<f64>())
    }
}

/// Non-fatal findings from a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitWarning {
    NonStationaryFit { radius: f64 },
    NonInvertibleMa { radius: f64 },
    UnstableFit { radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fitted<M> {
    pub model: M,
    pub warnings: Vec<FitWarning>,
}

fn check_train(train: &UniformSeries, order: usize) -> Result<()> {
    train.require_len(50 * order.max(1))?;
    let v = train.values();
    if v.iter().all(|&x| x == v[0]) {
        return Err(Error::SingularRegression);
    }
    Ok(())
}

/// OLS of centered `x[k]` on an intercept and `g` centered lags, `k ≥ start`.
/// Returns `(mu, phi, residuals)` with `mu` restated for the raw series.
fn ar_ols(x: &[f64], g: usize, start: usize) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    let c: Vec<f64> = x.iter().map(|v| v - m).collect();
    let start = start.max(g);
    let rows = x.len() - start;
    let fit = ols(
        rows,
        g + 1,
        |i, r| {
            let k = start + i;
            r[0] = 1.0;
            for j in 1..=g {
                r[j] = c[k - j];
            }
        },
        |i| c[start + i],
    )?;
    let phi = fit.coef[1..].to_vec();
    let mu = fit.coef[0] + m * (1.0 - phi.iter().sum::<f64>());
    Ok((mu, phi, fit.residuals))
}

fn residual_variance(res: &[f64], n_params: usize) -> f64 {
    res.iter().map(|e| e * e).sum::<f64>() / (res.len() - n_params) as f64
}

fn stationarity_warnings(model: &ArmaModel) -> Vec<FitWarning> {
    let mut w = Vec::new();
    let r = model.ar_radius();
    if r >= 1.0 {
        w.push(FitWarning::NonStationaryFit { radius: r });
    }
    let r = model.ma_radius();
    if r >= 1.0 {
        w.push(FitWarning::NonInvertibleMa { radius: r });
    }
    w
}

/// Least-squares AR(g) fit of `r[k]` on `(1, r[k−1], …, r[k−g])`.
pub fn fit_ar(train: &UniformSeries, g: usize) -> Result<Fitted<ArmaModel>> {
    check_train(train, g)?;
    let (mu, phi, res) = ar_ols(train.values(), g, g)?;
    let model = ArmaModel::ar(mu, phi, residual_variance(&res, g + 1));
    let warnings = stationarity_warnings(&model);
    Ok(Fitted { model, warnings })
}

/// Hannan–Rissanen ARMA(g, h) fit: a long AR supplies innovation estimates,
/// then `r[k]` is regressed on its own lags and the lagged innovations.
pub fn fit_arma(train: &UniformSeries, g: usize, h: usize) -> Result<Fitted<ArmaModel>> {
    if h == 0 {
        return fit_ar(train, g);
    }
    check_train(train, g + h)?;
    let x = train.values();
    let long = 20.max(2 * (g + h));
    if x.len() <= 2 * long + g + h {
        return Err(Error::TooShort {
            needed: 2 * long + g + h + 1,
            got: x.len(),
        });
    }
    let (_, _, long_res) = ar_ols(x, long, long)?;
    let mut innov = vec![0.0; x.len()];
    innov[long..].copy_from_slice(&long_res);

    let m = x.iter().sum::<f64>() / x.len() as f64;
    let c: Vec<f64> = x.iter().map(|v| v - m).collect();
    let start = long + g.max(h);
    let fit = ols(
        x.len() - start,
        1 + g + h,
        |i, r| {
            let k = start + i;
            r[0] = 1.0;
            for j in 1..=g {
                r[j] = c[k - j];
            }
            for j in 1..=h {
                r[g + j] = innov[k - j];
            }
        },
        |i| c[start + i],
    )?;
    let phi = fit.coef[1..=g].to_vec();
    let theta: Vec<f64> = fit.coef[g + 1..].iter().map(|b| -b).collect();
    let mu = fit.coef[0] + m * (1.0 - phi.iter().sum::<f64>());
    let model = ArmaModel::arma(mu, phi, theta, residual_variance(&fit.residuals, 1 + g + h));
    let warnings = stationarity_warnings(&model);
    Ok(Fitted { model, warnings })
}

/// AR(g) coefficients refitted on several training sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityTable {
    /// `per_set[s][i]` is `φ_{i+1}` fitted on set `s`.
    pub per_set: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// `max − min` across sets, per coefficient.
    pub spread: Vec<f64>,
}

pub fn sensitivity(train_sets: &[UniformSeries], g: usize) -> Result<SensitivityTable> {
    if train_sets.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: train_sets.len(),
        });
    }
    let per_set = train_sets
        .iter()
        .map(|s| fit_ar(s, g).map(|f| f.model.phi))
        .collect::<Result<Vec<_>>>()?;
    let n = per_set.len() as f64;
    let mean = (0..g).map(|i| per_set.iter().map(|p| p[i]).sum::<f64>() / n).collect();
    let spread = (0..g)
        .map(|i| {
            let (lo, hi) = per_set
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[i]), hi.max(p[i])));
            hi - lo
        })
        .collect();
    Ok(SensitivityTable { per_set, mean, spread })
}
