use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::ArmaModel;
use super::forecast::{innovations, point_forecast};
use crate::error::{Error, Result};
use crate::series::{slope, UniformSeries};

const CHUNK: usize = 4096;

/// Rolling-origin metrics at one lead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastEval {
    pub lead: usize,
    /// Number of evaluated origins.
    pub n: usize,
    /// Targets with `|actual| ≥ 1 − peg_tol`.
    pub n_sat: usize,
    pub n_unsat: usize,
    pub te: f64,
    /// `None` when no target is saturated.
    pub se: Option<f64>,
    #[serde(rename = "use")]
    pub use_: Option<f64>,
    pub sle: f64,
    /// `None` when either slope sequence is constant.
    pub slope_corr: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub peg_tol: f64,
    pub saturated: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            peg_tol: crate::stats::DEFAULT_PEG_TOL,
            saturated: true,
        }
    }
}

/// Forecast origins `first..first + count`, shared by every lead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Origins {
    pub first: usize,
    pub count: usize,
    pub max_lead: usize,
}

impl Origins {
    /// Every origin with `g` samples of history and `max_lead` samples of
    /// future in a series of length `n`.
    pub fn new(n: usize, g: usize, leads: &[usize]) -> Result<Self> {
        let max_lead = match leads.iter().copied().max() {
            Some(m) if !leads.contains(&0) => m,
            _ => {
                return Err(Error::LeadOutOfRange { lead: 0, len: n });
            }
        };
        let first = g.max(1) - 1;
        if n < max_lead + g.max(1) {
            return Err(Error::TooShort {
                needed: max_lead + g.max(1),
                got: n,
            });
        }
        Ok(Self {
            first,
            count: n - max_lead - first,
            max_lead,
        })
    }

    pub fn iter(&self) -> std::ops::Range<usize> {
        self.first..self.first + self.count
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    n: usize,
    n_sat: usize,
    abs_sat: f64,
    abs_unsat: f64,
    abs_slope: f64,
    sx: f64,
    sy: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

impl Acc {
    fn merge(&mut self, o: &Acc) {
        self.n += o.n;
        self.n_sat += o.n_sat;
        self.abs_sat += o.abs_sat;
        self.abs_unsat += o.abs_unsat;
        self.abs_slope += o.abs_slope;
        self.sx += o.sx;
        self.sy += o.sy;
        self.sxx += o.sxx;
        self.syy += o.syy;
        self.sxy += o.sxy;
    }

    fn finish(&self, lead: usize) -> ForecastEval {
        let n = self.n as f64;
        let n_unsat = self.n - self.n_sat;
        let cxx = self.sxx - self.sx * self.sx / n;
        let cyy = self.syy - self.sy * self.sy / n;
        let cxy = self.sxy - self.sx * self.sy / n;
        let slope_corr = (cxx > 0.0 && cyy > 0.0).then(|| (cxy / (cxx * cyy).sqrt()).clamp(-1.0, 1.0));
        ForecastEval {
            lead,
            n: self.n,
            n_sat: self.n_sat,
            n_unsat,
            te: (self.abs_sat + self.abs_unsat) / n,
            se: (self.n_sat > 0).then(|| self.abs_sat / self.n_sat as f64),
            use_: (n_unsat > 0).then(|| self.abs_unsat / n_unsat as f64),
            sle: self.abs_slope / n,
            slope_corr,
        }
    }
}

/// Rolling-origin evaluation with an arbitrary forecaster.
///
/// `forecaster(o)` returns the point path for leads `1..=origins.max_lead`
/// from origin `o`. Slopes are anchored at the observed origin value. Sums
/// are formed per fixed-size chunk and merged in origin order, so results do
/// not depend on the thread count.
pub fn evaluate_with<F>(
    test: &UniformSeries,
    origins: Origins,
    leads: &[usize],
    peg_tol: f64,
    forecaster: F,
) -> Result<Vec<ForecastEval>>
where
    F: Fn(usize) -> Vec<f64> + Sync,
{
    let x = test.values();
    let dt = test.dt();
    let starts: Vec<usize> = origins.iter().step_by(CHUNK).collect();
    let end = origins.first + origins.count;
    let partial: Vec<Vec<Acc>> = starts
        .par_iter()
        .map(|&s| {
            let mut accs = vec![Acc::default(); leads.len()];
            for o in s..(s + CHUNK).min(end) {
                let path = forecaster(o);
                for (acc, &l) in accs.iter_mut().zip(leads) {
                    let actual = x[o + l];
                    let err = (path[l - 1] - actual).abs();
                    acc.n += 1;
                    if actual.abs() >= 1.0 - peg_tol {
                        acc.n_sat += 1;
                        acc.abs_sat += err;
                    } else {
                        acc.abs_unsat += err;
                    }
                    let span = l as f64 * dt;
                    let sa = (actual - x[o]) / span;
                    let sp = (path[l - 1] - x[o]) / span;
                    acc.abs_slope += (sp - sa).abs();
                    acc.sx += sa;
                    acc.sy += sp;
                    acc.sxx += sa * sa;
                    acc.syy += sp * sp;
                    acc.sxy += sa * sp;
                }
            }
            accs
        })
        .collect();
    let mut total = vec![Acc::default(); leads.len()];
    for p in &partial {
        for (t, a) in total.iter_mut().zip(p) {
            t.merge(a);
        }
    }
    Ok(total.iter().zip(leads).map(|(a, &l)| a.finish(l)).collect())
}

/// Actual and anchored predicted slopes at `lead` for every origin.
pub fn slope_pairs_with<F>(test: &UniformSeries, origins: Origins, lead: usize, forecaster: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(usize) -> Vec<f64> + Sync,
{
    let x = test.values();
    let span = lead as f64 * test.dt();
    origins
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&o| {
            let path = forecaster(o);
            ((x[o + lead] - x[o]) / span, (path[lead - 1] - x[o]) / span)
        })
        .unzip()
}

pub(crate) fn check_leads(leads: &[usize], n: usize) -> Result<()> {
    if leads.is_empty() {
        return Err(Error::LeadOutOfRange { lead: 0, len: n });
    }
    if let Some(&l) = leads.iter().find(|&&l| l == 0) {
        return Err(Error::LeadOutOfRange { lead: l, len: n });
    }
    Ok(())
}

fn arma_forecaster<'a>(
    model: &'a ArmaModel,
    x: &'a [f64],
    innov: &'a [f64],
    max_lead: usize,
    saturated: bool,
) -> impl Fn(usize) -> Vec<f64> + Sync + 'a {
    move |o| point_forecast(model, x, innov, o, max_lead, saturated)
}

/// Rolling-origin backtest of a fixed model over `test`.
pub fn evaluate(model: &ArmaModel, test: &UniformSeries, leads: &[usize], opts: EvalOptions) -> Result<Vec<ForecastEval>> {
    check_leads(leads, test.len())?;
    let origins = Origins::new(test.len(), model.g, leads)?;
    evaluate_at(model, test, origins, leads, opts)
}

/// [`evaluate`] over explicitly chosen origins, which must leave `g` samples
/// of history and `origins.max_lead` of future.
pub fn evaluate_at(
    model: &ArmaModel,
    test: &UniformSeries,
    origins: Origins,
    leads: &[usize],
    opts: EvalOptions,
) -> Result<Vec<ForecastEval>> {
    check_leads(leads, test.len())?;
    check_origins(origins, model.g, leads, test.len())?;
    let x = test.values();
    let innov = innovations(model, x);
    evaluate_with(
        test,
        origins,
        leads,
        opts.peg_tol,
        arma_forecaster(model, x, &innov, origins.max_lead, opts.saturated),
    )
}

pub(crate) fn check_origins(origins: Origins, g: usize, leads: &[usize], n: usize) -> Result<()> {
    if origins.count == 0 || origins.first + 1 < g.max(1) || origins.first + origins.count + origins.max_lead > n {
        return Err(Error::TooShort {
            needed: origins.max_lead + g.max(1),
            got: n,
        });
    }
    if let Some(&l) = leads.iter().find(|&&l| l > origins.max_lead) {
        return Err(Error::LeadOutOfRange { lead: l, len: n });
    }
    Ok(())
}

/// Actual and anchored predicted slopes at `lead` over the origins
/// [`evaluate`] uses for `leads`.
pub fn slope_pairs(
    model: &ArmaModel,
    test: &UniformSeries,
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
    let x = test.values();
    let innov = innovations(model, x);
    Ok(slope_pairs_with(test, origins, lead, arma_forecaster(model, x, &innov, lead, opts.saturated)))
}

/// Slope classification of a fixed model's forecasts at `lead`.
pub fn confusion(
    model: &ArmaModel,
    test: &UniformSeries,
    leads: &[usize],
    lead: usize,
    threshold_pct: f64,
    opts: EvalOptions,
) -> Result<ConfusionMatrix3> {
    let (a, p) = slope_pairs(model, test, leads, lead, opts)?;
    classify_slope_pairs(&a, &p, threshold_pct)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlopeClass {
    Up,
    Down,
    Flat,
}

impl SlopeClass {
    pub const ALL: [SlopeClass; 3] = [SlopeClass::Up, SlopeClass::Down, SlopeClass::Flat];

    pub fn of(s: f64, threshold: f64) -> Self {
        if s > threshold {
            SlopeClass::Up
        } else if s < -threshold {
            SlopeClass::Down
        } else {
            SlopeClass::Flat
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            SlopeClass::Up => "Up",
            SlopeClass::Down => "Down",
            SlopeClass::Flat => "Flat",
        }
    }
}

/// Counts indexed `[actual][predicted]` in `Up, Down, Flat` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix3 {
    pub counts: [[u64; 3]; 3],
    pub threshold_pct: f64,
    /// Absolute slope threshold.
    pub threshold: f64,
}

impl ConfusionMatrix3 {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    pub fn misclassified(&self) -> u64 {
        self.total() - self.correct()
    }

    pub fn actual_count(&self, c: SlopeClass) -> u64 {
        self.counts[c.index()].iter().sum()
    }

    pub fn predicted_count(&self, c: SlopeClass) -> u64 {
        self.counts.iter().map(|r| r[c.index()]).sum()
    }
}

/// Classifies paired slopes against `threshold_pct` percent of the range of
/// the actual slopes.
pub fn classify_slope_pairs(actual: &[f64], predicted: &[f64], threshold_pct: f64) -> Result<ConfusionMatrix3> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch(actual.len(), predicted.len()));
    }
    if !(threshold_pct >= 0.0) {
        return Err(Error::InvalidConfig(format!("threshold_pct must be >= 0, got {threshold_pct}")));
    }
    let lo = actual.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = actual.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(Error::DegenerateSlopeRange);
    }
    let threshold = threshold_pct / 100.0 * (hi - lo);
    let mut counts = [[0u64; 3]; 3];
    for (&a, &p) in actual.iter().zip(predicted) {
        counts[SlopeClass::of(a, threshold).index()][SlopeClass::of(p, threshold).index()] += 1;
    }
    Ok(ConfusionMatrix3 {
        counts,
        threshold_pct,
        threshold,
    })
}

/// Slopes of both series at `lead`, then [`classify_slope_pairs`].
pub fn classify_slopes(
    actual: &UniformSeries,
    predicted: &UniformSeries,
    lead: usize,
    threshold_pct: f64,
) -> Result<ConfusionMatrix3> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch(actual.len(), predicted.len()));
    }
    let a = slope(actual, lead)?;
    let p = slope(predicted, lead)?;
    classify_slope_pairs(a.values(), p.values(), threshold_pct)
}
