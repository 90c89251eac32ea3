//! Generates synthetic Reg-D, writes it as CSV, and checks it against a
//! second realization with the same settings.

use agc_signal::ingest::write_series_csv;
use agc_signal::stats::peg_percent;
use agc_signal::synth::{synth_regd, validate_model, SynthConfig};

fn main() -> agc_signal::Result<()> {
    let cfg = SynthConfig {
        n_samples: 100_000,
        seed: 11,
        ..SynthConfig::default()
    };
    let x = synth_regd(&cfg)?;
    println!("sigma_r {:.4}: variance {:.4}, pegged {:.2}%", cfg.sigma_r, x.variance(), peg_percent(x.values(), 1e-6));

    let raw = synth_regd(&SynthConfig { saturate: false, ..cfg.clone() })?;
    println!("before saturation: std {:.4}", raw.std());

    let reference = synth_regd(&SynthConfig { seed: 12, ..cfg.clone() })?;
    let v = validate_model(&x, &reference)?;
    println!(
        "vs independent realization: std err {:.2}%, mean err {:.4}, pegging err {:.2} pts",
        v.std_err_pct, v.mean_abs_err, v.peg_err_pct
    );

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("synth.csv");
    write_series_csv(&x.slice(0, 1000), &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
