//! Analysis battery: distribution, running moments and settling, pegging
//! amount and duration, Welch PSD, and auto/partial/cross correlation.

mod correlation;
mod distribution;
mod pegging;
mod psd;

pub use correlation::{
    acf, correlation, cross_correlation, durbin_levinson, pacf, yule_walker, CrossCorrelation, Levinson,
};
pub use distribution::{
    histogram, running_moments, settling_time, Histogram, RunningMoments, SettlingReport, SettlingTolerance,
};
pub use pegging::{
    pegging_amount, pegging_durations, GroupBy, PegOptions, PeggingAmount, PeggingDurations, DEFAULT_PEG_TOL,
};
pub use psd::{hann, welch_psd, PsdEstimate, WelchConfig, HALF_POWER};

/// Fraction (in percent) of samples at either rail.
pub fn peg_percent(values: &[f64], tol: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let pegged = values.iter().filter(|v| v.abs() >= 1.0 - tol).count();
    100.0 * pegged as f64 / values.len() as f64
}
