#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use agc_signal::ingest::write_series_csv;
use agc_signal::synth::{synth_regd, SynthConfig};
use agc_signal::UniformSeries;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// 2019-06-20 13:05:00 UTC.
pub const T0: f64 = 1_561_035_900.0;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_agcsig")
}

pub fn agcsig(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).current_dir(dir).args(args).output().expect("spawn agcsig")
}

pub fn regd_fixture(n: usize, seed: u64) -> UniformSeries {
    let cfg = SynthConfig {
        n_samples: n,
        seed,
        ..SynthConfig::default()
    };
    let x = synth_regd(&cfg).unwrap();
    UniformSeries::with_start(x.into_values(), 2.0, Some(T0)).unwrap()
}

/// 0.1 s frequency that moves opposite to Reg-D one sample ahead of it.
pub fn freq_fixture(regd: &UniformSeries, seed: u64) -> UniformSeries {
    let r = regd.values();
    let noise = Normal::new(0.0, 0.002).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<f64> = (0..r.len() * 20)
        .map(|k| {
            let i = ((k + 20) / 20).min(r.len() - 1);
            let hz = 60.0 - 0.03 * r[i] + noise.sample(&mut rng);
            (hz * 1e6).round() / 1e6
        })
        .collect();
    UniformSeries::with_start(v, 0.1, regd.t0()).unwrap()
}

/// Writes `regd.csv` and `freq.csv` into `dir`.
pub fn write_fixtures(dir: &Path, n: usize) {
    let regd = regd_fixture(n, 7);
    write_series_csv(&regd, dir.join("regd.csv")).unwrap();
    write_series_csv(&freq_fixture(&regd, 8), dir.join("freq.csv")).unwrap();
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn sorted_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .collect();
    v.sort();
    v
}
