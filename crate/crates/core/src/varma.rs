//! Bivariate VAR(g) on (Reg-D, lag-filtered frequency).
//!
//! The frequency channel enters in native units and is never clamped; only
//! the Reg-D channel saturates. [`scan_tau`] picks the frequency filter time
//! constant by lag-0 correlation, [`fit_var`] estimates each equation by
//! least squares, and [`compare`] backtests an AR model and a VAR model over
//! identical origins.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arma::{
    assemble_path, check_leads, check_origins, evaluate_at, evaluate_with, slope_pairs_with, classify_slope_pairs,
    ArmaModel, ConfusionMatrix3, EvalOptions, FitWarning, Fitted, ForecastEval, ForecastPath, Origins,
};
use crate::error::{Error, Result};
use crate::ingest::{build_joint, JointSeries};
use crate::linalg::{ols, pearson, spectral_radius};
use crate::series::{saturate, SaturationBounds, UniformSeries};

pub type Mat2 = [[f64; 2]; 2];

pub const DEFAULT_TAU_GRID: [f64; 7] = [60.0, 120.0, 300.0, 600.0, 900.0, 1200.0, 1800.0];

/// `y[k] = mu + Σ Phi_i y[k−i] + e[k]`, `y = (regd, freq)`, with channel 0
/// clamped to `bounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarModel {
    pub g: usize,
    pub mu: [f64; 2],
    /// `phi[i][row][col]` multiplies channel `col` at lag `i + 1` in equation `row`.
    pub phi: Vec<Mat2>,
    pub sigma: Mat2,
    pub bounds: SaturationBounds,
}

impl VarModel {
    /// Spectral radius of the 2g × 2g companion matrix.
    pub fn companion_radius(&self) -> f64 {
        let n = 2 * self.g;
        if n == 0 {
            return 0.0;
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (i, p) in self.phi.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    m[(r, 2 * i + c)] = p[r][c];
                }
            }
        }
        for k in 2..n {
            m[(k, k - 2)] = 1.0;
        }
        spectral_radius(&m)
    }

    pub fn is_stable(&self) -> bool {
        self.companion_radius() < 1.0
    }

    /// The AR model embedded in the Reg-D equation's own lags.
    pub fn own_lag_ar(&self) -> ArmaModel {
        let mut m = ArmaModel::ar(self.mu[0], self.phi.iter().map(|p| p[0][0]).collect(), self.sigma[0][0]);
        m.bounds = self.bounds;
        m
    }

    /// VAR whose Reg-D equation is `ar` and whose frequency channel is
    /// independent white noise around `freq_mean`.
    pub fn from_ar(ar: &ArmaModel, freq_mean: f64, freq_var: f64) -> Result<Self> {
        if ar.h > 0 {
            return Err(Error::Model("an ARMA model with MA terms has no VAR embedding".into()));
        }
        Ok(Self {
            g: ar.g,
            mu: [ar.mu, freq_mean],
            phi: ar.phi.iter().map(|&p| [[p, 0.0], [0.0, 0.0]]).collect(),
            sigma: [[ar.sigma2_a, 0.0], [0.0, freq_var]],
            bounds: ar.bounds,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauScanResult {
    pub taus: Vec<f64>,
    pub xcorr0: Vec<f64>,
    pub tau_star: f64,
}

impl TauScanResult {
    pub fn best_xcorr(&self) -> f64 {
        let i = self.taus.iter().position(|&t| t == self.tau_star).unwrap();
        self.xcorr0[i]
    }
}

/// Lag-0 correlation between Reg-D and the frequency filtered at each τ.
/// Ties in `|xcorr0|` go to the smaller τ.
pub fn scan_tau(regd: &UniformSeries, freq_raw: &UniformSeries, taus: &[f64]) -> Result<TauScanResult> {
    if taus.is_empty() {
        return Err(Error::InvalidConfig("tau grid is empty".into()));
    }
    if let Some(&t) = taus.iter().find(|&&t| !(t > 0.0)) {
        return Err(Error::NonPositiveTau(t));
    }
    let xcorr0 = taus
        .par_iter()
        .map(|&tau| {
            let joint = build_joint(regd, freq_raw, tau)?;
            pearson(joint.regd().values(), joint.freq().values()).ok_or(Error::ZeroVariance)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for i in 1..taus.len() {
        let (a, b) = (xcorr0[i].abs(), xcorr0[best].abs());
        if a > b || (a == b && taus[i] < taus[best]) {
            best = i;
        }
    }
    Ok(TauScanResult {
        taus: taus.to_vec(),
        xcorr0,
        tau_star: taus[best],
    })
}

/// Fitted model and the residuals of both equations.
fn fit_var_full(joint: &JointSeries, g: usize) -> Result<(VarModel, [Vec<f64>; 2])> {
    let n = joint.len();
    let needed = 100 * g.max(1);
    if n < needed {
        return Err(Error::TooShort { needed, got: n });
    }
    let raw = [joint.regd().values(), joint.freq().values()];
    let means = [raw[0].iter().sum::<f64>() / n as f64, raw[1].iter().sum::<f64>() / n as f64];
    let c: Vec<Vec<f64>> = (0..2).map(|ch| raw[ch].iter().map(|v| v - means[ch]).collect()).collect();

    let mut phi = vec![[[0.0; 2]; 2]; g];
    let mut intercept = [0.0; 2];
    let mut residuals: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for eq in 0..2 {
        let fit = ols(
            n - g,
            1 + 2 * g,
            |i, r| {
                let k = g + i;
                r[0] = 1.0;
                for l in 1..=g {
                    r[2 * l - 1] = c[0][k - l];
                    r[2 * l] = c[1][k - l];
                }
            },
            |i| c[eq][g + i],
        )?;
        intercept[eq] = fit.coef[0];
        for l in 0..g {
            phi[l][eq] = [fit.coef[1 + 2 * l], fit.coef[2 + 2 * l]];
        }
        residuals[eq] = fit.residuals;
    }

    // intercept for raw units: mu = c + (I − Σ Phi) m
    let mut mu = [0.0; 2];
    for r in 0..2 {
        let mut v = intercept[r] + means[r];
        for p in &phi {
            v -= p[r][0] * means[0] + p[r][1] * means[1];
        }
        mu[r] = v;
    }

    let dof = (n - g - (1 + 2 * g)) as f64;
    let mut sigma = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            sigma[a][b] = residuals[a].iter().zip(&residuals[b]).map(|(x, y)| x * y).sum::<f64>() / dof;
        }
    }
    let model = VarModel {
        g,
        mu,
        phi,
        sigma,
        bounds: SaturationBounds::REG_D,
    };
    Ok((model, residuals))
}

/// Per-equation least squares of each channel on an intercept and `g` lags
/// of both channels.
pub fn fit_var(joint: &JointSeries, g: usize) -> Result<Fitted<VarModel>> {
    let (model, _) = fit_var_full(joint, g)?;
    let r = model.companion_radius();
    let warnings = if r >= 1.0 {
        vec![FitWarning::UnstableFit { radius: r }]
    } else {
        Vec::new()
    };
    Ok(Fitted { model, warnings })
}

/// Point paths of both channels for leads `1..=lead` from `origin`.
fn var_point(model: &VarModel, y: [&[f64]; 2], origin: usize, lead: usize, saturated: bool) -> Vec<[f64; 2]> {
    let g = model.g;
    let lo = (origin + 1).saturating_sub(g);
    let mut hist: Vec<[f64; 2]> = (lo..=origin).map(|k| [y[0][k], y[1][k]]).collect();
    let base = hist.len();
    for step in 1..=lead {
        let pos = base - 1 + step;
        let mut v = model.mu;
        for i in 1..=g.min(pos) {
            let p = &model.phi[i - 1];
            let h = hist[pos - i];
            for r in 0..2 {
                v[r] += p[r][0] * h[0] + p[r][1] * h[1];
            }
        }
        if saturated {
            v[0] = saturate(v[0], model.bounds);
        }
        hist.push(v);
    }
    hist.split_off(base)
}

/// Cumulative Reg-D forecast error variance at leads `1..=lead`.
pub fn var_forecast_variances(model: &VarModel, lead: usize) -> Vec<f64> {
    let mul = |a: &Mat2, b: &Mat2| -> Mat2 {
        let mut m = [[0.0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        m
    };
    let mut psi: Vec<Mat2> = Vec::with_capacity(lead);
    let mut out = Vec::with_capacity(lead);
    let mut acc = 0.0;
    for j in 0..lead {
        let pj = if j == 0 {
            [[1.0, 0.0], [0.0, 1.0]]
        } else {
            let mut s = [[0.0; 2]; 2];
            for i in 1..=j.min(model.g) {
                let t = mul(&model.phi[i - 1], &psi[j - i]);
                for r in 0..2 {
                    for c in 0..2 {
                        s[r][c] += t[r][c];
                    }
                }
            }
            s
        };
        let row = pj[0];
        acc += (0..2)
            .map(|a| (0..2).map(|b| row[a] * model.sigma[a][b] * row[b]).sum::<f64>())
            .sum::<f64>();
        out.push(acc);
        psi.push(pj);
    }
    out
}

/// Reg-D forecast from the end of `history`, clamping channel 0 inside the
/// recursion when `saturated`.
pub fn forecast_var(model: &VarModel, history: &JointSeries, lead: usize, saturated: bool) -> Result<ForecastPath> {
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
    let y = [history.regd().values(), history.freq().values()];
    let origin = history.len() - 1;
    let point = var_point(model, y, origin, lead, saturated).iter().map(|v| v[0]).collect();
    let vars = var_forecast_variances(model, lead);
    Ok(assemble_path(origin, point, &vars, saturated.then_some(model.bounds)))
}

fn var_forecaster<'a>(
    model: &'a VarModel,
    joint: &'a JointSeries,
    lead: usize,
    saturated: bool,
) -> impl Fn(usize) -> Vec<f64> + Sync + 'a {
    let y = [joint.regd().values(), joint.freq().values()];
    move |o| var_point(model, y, o, lead, saturated).iter().map(|v| v[0]).collect()
}

/// Rolling-origin backtest of the Reg-D channel over `origins`.
pub fn evaluate_var_at(
    model: &VarModel,
    test: &JointSeries,
    origins: Origins,
    leads: &[usize],
    opts: EvalOptions,
) -> Result<Vec<ForecastEval>> {
    check_leads(leads, test.len())?;
    check_origins(origins, model.g, leads, test.len())?;
    evaluate_with(
        test.regd(),
        origins,
        leads,
        opts.peg_tol,
        var_forecaster(model, test, origins.max_lead, opts.saturated),
    )
}

pub fn evaluate_var(model: &VarModel, test: &JointSeries, leads: &[usize], opts: EvalOptions) -> Result<Vec<ForecastEval>> {
    check_leads(leads, test.len())?;
    let origins = Origins::new(test.len(), model.g, leads)?;
    evaluate_var_at(model, test, origins, leads, opts)
}

pub fn slope_pairs_var(
    model: &VarModel,
    test: &JointSeries,
    leads: &[usize],
    lead: usize,
    opts: EvalOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_leads(leads, test.len())?;
    if !leads.contains(&lead) {
        return Err(Error::LeadOutOfRange {
            lead,
            len: test.len(),
        });
    }
    let origins = Origins::new(test.len(), model.g, leads)?;
    Ok(slope_pairs_with(test.regd(), origins, lead, var_forecaster(model, test, lead, opts.saturated)))
}

pub fn confusion_var(
    model: &VarModel,
    test: &JointSeries,
    leads: &[usize],
    lead: usize,
    threshold_pct: f64,
    opts: EvalOptions,
) -> Result<ConfusionMatrix3> {
    let (a, p) = slope_pairs_var(model, test, leads, lead, opts)?;
    classify_slope_pairs(&a, &p, threshold_pct)
}

/// AR and VAR metrics at one lead, with deltas `AR − VAR` (positive means
/// the VAR is more accurate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub lead: usize,
    pub ar: ForecastEval,
    pub var: ForecastEval,
    pub delta_te: f64,
    pub delta_se: Option<f64>,
    pub delta_use: Option<f64>,
    pub delta_sle: f64,
}

/// Backtests both models on the Reg-D channel of `test` at identical origins.
pub fn compare(
    ar: &ArmaModel,
    var: &VarModel,
    test: &JointSeries,
    leads: &[usize],
    opts: EvalOptions,
) -> Result<Vec<CompareRow>> {
    check_leads(leads, test.len())?;
    let origins = Origins::new(test.len(), ar.g.max(var.g), leads)?;
    let a = evaluate_at(ar, test.regd(), origins, leads, opts)?;
    let v = evaluate_var_at(var, test, origins, leads, opts)?;
    let diff = |x: Option<f64>, y: Option<f64>| x.zip(y).map(|(x, y)| x - y);
    Ok(a
        .into_iter()
        .zip(v)
        .map(|(a, v)| CompareRow {
            lead: a.lead,
            delta_te: a.te - v.te,
            delta_se: diff(a.se, v.se),
            delta_use: diff(a.use_, v.use_),
            delta_sle: a.sle - v.sle,
            ar: a,
            var: v,
        })
        .collect())
}

/// Samples the VAR with Gaussian innovations of covariance `sigma`, after a
/// burn-in of 1000 samples.
pub fn simulate_var(model: &VarModel, n: usize, dt: f64, seed: u64, saturated: bool) -> Result<JointSeries> {
    const BURN: usize = 1000;
    let s = model.sigma;
    let l00 = s[0][0].max(0.0).sqrt();
    let l10 = if l00 > 0.0 { s[1][0] / l00 } else { 0.0 };
    let l11 = (s[1][1] - l10 * l10).max(0.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = n + BURN;
    let mut y = vec![[0.0; 2]; total];
    for k in 0..total {
        let z0: f64 = StandardNormal.sample(&mut rng);
        let z1: f64 = StandardNormal.sample(&mut rng);
        let mut v = [model.mu[0] + l00 * z0, model.mu[1] + l10 * z0 + l11 * z1];
        for i in 1..=model.g.min(k) {
            let p = &model.phi[i - 1];
            for r in 0..2 {
                v[r] += p[r][0] * y[k - i][0] + p[r][1] * y[k - i][1];
            }
        }
        if saturated {
            v[0] = saturate(v[0], model.bounds);
        }
        y[k] = v;
    }
    let tail = &y[BURN..];
    JointSeries::new(
        UniformSeries::new(tail.iter().map(|v| v[0]).collect(), dt)?,
        UniformSeries::new(tail.iter().map(|v| v[1]).collect(), dt)?,
    )
}
