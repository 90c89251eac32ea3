//! Fits AR(3) and ARMA(3,1) to synthetic Reg-D and forecasts one minute ahead.

use agc_signal::arma::{fit_ar, fit_arma, forecast, sensitivity};
use agc_signal::synth::{synth_regd, SynthConfig};

fn main() -> agc_signal::Result<()> {
    let x = synth_regd(&SynthConfig {
        n_samples: 50_000,
        seed: 3,
        ..SynthConfig::default()
    })?;
    let train = x.slice(0, 40_000);

    let ar = fit_ar(&train, 3)?;
    println!("AR(3) phi {:.4?}, sigma2 {:.3e}", ar.model.phi, ar.model.sigma2_a);
    let arma = fit_arma(&train, 3, 1)?;
    println!("ARMA(3,1) phi {:.4?}, theta {:.4?}", arma.model.phi, arma.model.theta);
    for w in &arma.warnings {
        println!("warning: {w:?}");
    }

    let path = forecast(&ar.model, &x.slice(0, 40_000), 30, true)?;
    for k in [0, 4, 14, 29] {
        println!(
            "+{:>2} s  point {:+.4}  band [{:+.4}, {:+.4}]  actual {:+.4}",
            2 * (k + 1),
            path.point[k],
            path.ci95_lo[k],
            path.ci95_hi[k],
            x.values()[40_000 + k]
        );
    }

    let sets: Vec<_> = (0..4).map(|i| train.slice(i * 10_000, (i + 1) * 10_000)).collect();
    let table = sensitivity(&sets, 3)?;
    println!("AR(3) over four 10k-sample sets: mean {:.4?}, spread {:.4?}", table.mean, table.spread);
    Ok(())
}
