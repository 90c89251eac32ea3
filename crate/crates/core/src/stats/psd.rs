//! Welch power spectral density with Hann windows.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::UniformSeries;

/// Power ratio of a 3 dB drop.
pub const HALF_POWER: f64 = 0.501_187_233_627_272_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchConfig {
    /// Samples per segment; a power of two.
    pub segment_len: usize,
    /// Fractional overlap between consecutive segments, in `[0, 1)`.
    pub overlap: f64,
}

impl Default for WelchConfig {
    fn default() -> Self {
        Self {
            segment_len: 1 << 13,
            overlap: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdEstimate {
    /// Hz, from 0 to Nyquist.
    pub freqs: Vec<f64>,
    /// One-sided density, signal² / Hz.
    pub psd: Vec<f64>,
    pub peak_freq: f64,
    /// Highest frequency whose density is within 3 dB of the peak.
    pub bandwidth_3db: f64,
    pub n_segments: usize,
}

impl PsdEstimate {
    pub fn resolution(&self) -> f64 {
        self.freqs[1] - self.freqs[0]
    }

    /// `Σ psd · Δf`, the variance captured by the estimate.
    pub fn total_power(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.resolution()
    }
}

/// Periodic Hann window.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// Averages mean-removed, Hann-windowed periodograms of overlapping segments.
pub fn welch_psd(x: &UniformSeries, cfg: WelchConfig) -> Result<PsdEstimate> {
    let l = cfg.segment_len;
    if l < 4 || !l.is_power_of_two() {
        return Err(Error::InvalidWelch(format!("segment_len {l} is not a power of two >= 4")));
    }
    if !(0.0..1.0).contains(&cfg.overlap) {
        return Err(Error::InvalidWelch(format!("overlap {} not in [0, 1)", cfg.overlap)));
    }
    if l > x.len() {
        return Err(Error::SegmentTooLong {
            segment_len: l,
            len: x.len(),
        });
    }
    let hop = ((l as f64 * (1.0 - cfg.overlap)).round() as usize).max(1);
    let window = hann(l);
    let win_power: f64 = window.iter().map(|w| w * w).sum();
    let fs = 1.0 / x.dt();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(l);

    let half = l / 2;
    let mut acc = vec![0.0; half + 1];
    let mut buf = vec![Complex::new(0.0, 0.0); l];
    let mut n_segments = 0;
    let v = x.values();
    let mut start = 0;
    while start + l <= v.len() {
        let seg = &v[start..start + l];
        let m = seg.iter().sum::<f64>() / l as f64;
        for ((b, &s), &w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex::new((s - m) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
        n_segments += 1;
        start += hop;
    }

    let norm = 1.0 / (fs * win_power * n_segments as f64);
    let psd: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let one_sided = if k == 0 || k == half { 1.0 } else { 2.0 };
            p * norm * one_sided
        })
        .collect();
    let freqs: Vec<f64> = (0..=half).map(|k| k as f64 * fs / l as f64).collect();

    let peak_idx = (1..psd.len())
        .max_by(|&a, &b| psd[a].total_cmp(&psd[b]).then(b.cmp(&a)))
        .unwrap();
    let cutoff = psd[peak_idx] * HALF_POWER;
    let bw_idx = (1..psd.len()).rev().find(|&k| psd[k] >= cutoff).unwrap_or(peak_idx);

    Ok(PsdEstimate {
        peak_freq: freqs[peak_idx],
        bandwidth_3db: freqs[bw_idx],
        freqs,
        psd,
        n_segments,
    })
}
