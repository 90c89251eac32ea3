//! Designs the third-order shaping filter and inspects its norms and response.

use agc_signal::synth::{design_butter3, DEFAULT_OMEGA_N};

fn main() -> agc_signal::Result<()> {
    let f = design_butter3(DEFAULT_OMEGA_N, 2.0)?;
    println!("cutoff {:.2} mHz, gain {:.4}", f.omega_n / (2.0 * std::f64::consts::PI) * 1e3, f.gain);
    println!("continuous H2 {:.6}, discrete H2 {:.6}", f.continuous_h2, f.discrete_h2);
    println!("b = {:?}", f.b);
    println!("a = {:?}", f.a);
    println!("pole radius {:.6}, warm-up {} samples", f.discrete_poles_radius(), f.warmup_samples());
    for mhz in [0.5, 2.0, 5.0, 10.0, 20.0, 50.0] {
        let g = f.frequency_response(mhz * 1e-3).norm();
        println!("{mhz:>5} mHz  {:>7.2} dB", 20.0 * g.log10());
    }
    Ok(())
}
