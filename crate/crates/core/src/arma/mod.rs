//! Saturated ARMA(g, h) models of the regulation signal.
//!
//! [`fit_ar`] and [`fit_arma`] estimate by least squares (Hannan–Rissanen
//! for the MA part), [`forecast`] iterates the clamped recursion with a
//! linear 95% band, and [`evaluate`] runs a rolling-origin backtest producing
//! TE/SE/USE/SLE and slope correlation per lead.

mod evaluate;
mod fit;
mod forecast;

pub use evaluate::{
    classify_slope_pairs, classify_slopes, confusion, evaluate, evaluate_at, evaluate_with, slope_pairs, slope_pairs_with, ConfusionMatrix3,
    EvalOptions, ForecastEval, Origins, SlopeClass,
};
pub use fit::{fit_ar, fit_arma, sensitivity, ArmaModel, FitWarning, Fitted, SensitivityTable};
pub use forecast::{forecast, forecast_variances, innovations, psi_weights, ForecastPath, Z95};

pub(crate) use evaluate::{check_leads, check_origins};
pub(crate) use forecast::assemble_path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::series::{saturate, UniformSeries};

/// Samples `n` values of the model driven by Gaussian innovations, after a
/// burn-in of 1000 samples. With `saturated`, each output is clamped before
/// it enters later lags.
pub fn simulate(model: &ArmaModel, n: usize, dt: f64, seed: u64, saturated: bool) -> Result<UniformSeries> {
    const BURN: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = model.sigma2_a.sqrt();
    let total = n + BURN;
    let mut r = vec![0.0; total];
    let mut a = vec![0.0; total];
    for k in 0..total {
        let z: f64 = StandardNormal.sample(&mut rng);
        a[k] = sd * z;
        let mut v = model.mu + a[k];
        for i in 1..=model.g.min(k) {
            v += model.phi[i - 1] * r[k - i];
        }
        for j in 1..=model.h.min(k) {
            v -= model.theta[j - 1] * a[k - j];
        }
        r[k] = if saturated { saturate(v, model.bounds) } else { v };
    }
    UniformSeries::new(r.split_off(BURN), dt)
}
