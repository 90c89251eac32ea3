//! Analysis, stochastic modeling, and forecasting of normalized automatic
//! generation control (AGC) regulation signals such as PJM Reg-D.
//!
//! The crate is organized as:
//!
//! - [`series`]: the uniform time-series container and elementary transforms
//! - [`ingest`]: CSV readers, gap filling, and Reg-D/frequency alignment
//! - [`stats`]: distribution, running moments, pegging, Welch PSD, correlations
//! - [`synth`]: Butterworth-colored, saturated stochastic signal model
//! - [`arma`]: saturated ARMA fitting, forecasting, and the error metric suite
//! - [`varma`]: bivariate VAR with the frequency channel, τ scan, comparison
//! - [`cli`]: batch commands writing CSV/JSON reports
//!
//! Runnable walkthroughs live in `examples/`.

pub mod arma;
pub mod cli;
pub mod error;
pub mod ingest;
pub mod linalg;
pub mod report;
pub mod series;
pub mod stats;
pub mod synth;
pub mod varma;

pub use error::{Error, ErrorClass, Result};
pub use series::{lag_filter, resample_mean, saturate, slope, SaturationBounds, UniformSeries};
