//! Picks the frequency filter time constant, fits VAR(3) on the joint series,
//! and compares it with AR(3) on held-out data.

use agc_signal::arma::{fit_ar, EvalOptions};
use agc_signal::ingest::{build_joint, JointSeries};
use agc_signal::synth::{synth_regd, SynthConfig};
use agc_signal::varma::{compare, fit_var, scan_tau};
use agc_signal::UniformSeries;

fn main() -> agc_signal::Result<()> {
    let regd = synth_regd(&SynthConfig {
        n_samples: 20_000,
        seed: 21,
        ..SynthConfig::default()
    })?;
    // 10 Hz frequency that leads Reg-D by about two minutes
    let freq: Vec<f64> = (0..20_000 * 20)
        .map(|k| {
            let i = ((k + 1200) / 20).min(19_999);
            60.0 - 0.03 * regd.values()[i] + 1e-3 * ((k as f64) * 0.37).sin()
        })
        .collect();
    let freq = UniformSeries::with_start(freq, 0.1, Some(0.0))?;

    let taus = [10.0, 30.0, 60.0, 120.0, 300.0, 600.0];
    let scan = scan_tau(&regd, &freq, &taus)?;
    for (t, c) in scan.taus.iter().zip(&scan.xcorr0) {
        println!("tau {t:>5} s  xcorr0 {c:+.4}");
    }
    println!("selected tau {} s", scan.tau_star);

    let joint = build_joint(&regd, &freq, scan.tau_star)?;
    let split = joint.len() * 3 / 4;
    let train: JointSeries = joint.slice(0, split);
    let test = joint.slice(split, joint.len());
    let ar = fit_ar(train.regd(), 3)?.model;
    let var = fit_var(&train, 3)?;
    println!("VAR(3) companion radius {:.4}", var.model.companion_radius());

    let leads: Vec<usize> = (1..=30).collect();
    for r in compare(&ar, &var.model, &test, &leads, EvalOptions::default())?.iter().step_by(10) {
        println!("lead {:>2}: TE ar {:.5} var {:.5} (delta {:+.5})", r.lead, r.ar.te, r.var.te, r.delta_te);
    }
    Ok(())
}
