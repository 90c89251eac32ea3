//! Reads a Reg-D recording with a missing stretch and prints the gap report.

use std::fs;

use agc_signal::ingest::read_regd_csv;

fn main() -> agc_signal::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("regd.csv");
    let mut text = String::from("timestamp,value\n");
    for k in 0..60 {
        if (20..25).contains(&k) {
            continue;
        }
        let v = (k as f64 / 9.0).sin() * 0.97;
        text.push_str(&format!("2019-06-20T12:{:02}:{:02},{v:.4}\n", k * 2 / 60, k * 2 % 60));
    }
    fs::write(&path, text)?;

    let (series, gaps) = read_regd_csv(&path, 2.0)?;
    println!("{} samples at {} s, starting {}", series.len(), series.dt(), series.start());
    println!("filled {} samples", gaps.filled_samples());
    println!("{}", gaps.to_json()?);
    let range = series.values().iter().fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    println!("value range: [{:.3}, {:.3}]", range.0, range.1);
    Ok(())
}
