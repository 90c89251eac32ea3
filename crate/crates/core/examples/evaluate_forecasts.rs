//! Rolling-origin backtest of an AR(3) forecaster with slope confusion matrices.

use agc_signal::arma::{confusion, evaluate, fit_ar, EvalOptions, SlopeClass};
use agc_signal::synth::{synth_regd, SynthConfig};

fn main() -> agc_signal::Result<()> {
    let x = synth_regd(&SynthConfig {
        n_samples: 60_000,
        seed: 8,
        ..SynthConfig::default()
    })?;
    let model = fit_ar(&x.slice(0, 30_000), 3)?.model;
    let test = x.slice(30_000, 60_000);
    let leads: Vec<usize> = (1..=30).collect();

    println!("lead        TE        SE       USE       SLE  slope_corr");
    for e in evaluate(&model, &test, &leads, EvalOptions::default())?.iter().step_by(5) {
        println!(
            "{:>4} {:>9.5} {:>9.5} {:>9.5} {:>9.2e} {:>11.4}",
            e.lead,
            e.te,
            e.se.unwrap_or(f64::NAN),
            e.use_.unwrap_or(f64::NAN),
            e.sle,
            e.slope_corr.unwrap_or(f64::NAN)
        );
    }

    let m = confusion(&model, &test, &leads, 15, 10.0, EvalOptions::default())?;
    println!("lead 15, flat band ±{:.2e}/s: {} of {} correct", m.threshold, m.correct(), m.total());
    for a in SlopeClass::ALL {
        println!("  actual {:<5} -> {:?}", a.label(), m.counts[a.index()]);
    }
    Ok(())
}
