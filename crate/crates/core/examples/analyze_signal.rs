//! Statistics battery on a synthetic Reg-D day: distribution, settling,
//! pegging by hour, spectrum and autocorrelation.

use agc_signal::stats::{
    acf, histogram, pegging_amount, pegging_durations, running_moments, settling_time, welch_psd, GroupBy, PegOptions,
    SettlingTolerance, WelchConfig,
};
use agc_signal::synth::{synth_regd, SynthConfig};

fn main() -> agc_signal::Result<()> {
    let x = synth_regd(&SynthConfig {
        n_samples: 43_200,
        ..SynthConfig::default()
    })?;

    let h = histogram(&x, 20)?;
    let edge_share = (h.counts[0] + h.counts[19]) as f64 / x.len() as f64;
    println!("mean {:.4}, variance {:.4}, edge bins hold {:.1}%", x.mean(), x.variance(), 100.0 * edge_share);

    let rm = running_moments(&x)?;
    let s = settling_time(&rm.running_var, SettlingTolerance::default())?;
    println!("running variance settles to {:.4} after {:?} s", s.final_value, s.settling_time);

    let opts = PegOptions::default();
    for a in pegging_amount(&x, GroupBy::Hour, &opts).iter().take(4) {
        println!("hour {}: pegged {:.1}%", a.group_key, a.amount_pct);
    }
    let d = &pegging_durations(&x, GroupBy::All, &opts)[0];
    println!("{} pegging runs, mean {:.0} s, p95 {:.0} s, max {:.0} s", d.n_runs, d.mean, d.p95, d.max);

    let psd = welch_psd(&x, WelchConfig::default())?;
    println!(
        "PSD peak {:.2} mHz, 3-dB bandwidth {:.2} mHz over {} segments",
        psd.peak_freq * 1e3,
        psd.bandwidth_3db * 1e3,
        psd.n_segments
    );

    let r = acf(&x, 30)?;
    println!("acf at 2 s, 20 s, 60 s: {:.3} {:.3} {:.3}", r[1], r[10], r[30]);
    Ok(())
}
