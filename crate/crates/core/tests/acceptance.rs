//! Acceptance suite. Criteria 1–8 are self-contained; 9–12 run when the
//! corresponding public datasets are supplied:
//!
//! - `AGC_REGD_CSV`: a year (or more) of 2 s Reg-D, `timestamp,value`
//! - `AGC_FREQ_CSV`: one day of 100 ms grid frequency in Hz
//! - `AGC_REGD_DAY_CSV`: Reg-D covering the frequency day (defaults to
//!   `AGC_REGD_CSV`)
//!
//! Prints one line per criterion and exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use agc_signal::arma::{
    classify_slope_pairs, evaluate, evaluate_with, fit_ar, fit_arma, forecast, simulate, slope_pairs, ArmaModel,
    EvalOptions, Origins,
};
use agc_signal::ingest::{build_joint, read_freq_csv, read_regd_csv};
use agc_signal::linalg::solve_continuous_lyapunov;
use agc_signal::stats::{peg_percent, running_moments, settling_time, welch_psd, yule_walker, SettlingTolerance, WelchConfig};
use agc_signal::synth::{design_butter3, synth_regd, validate_model, SynthConfig, DEFAULT_OMEGA_N, REFERENCE_VARIANCE, SIGMA_FACTOR};
use agc_signal::varma::{compare, fit_var, forecast_var, scan_tau, simulate_var, VarModel, DEFAULT_TAU_GRID};
use agc_signal::{SaturationBounds, UniformSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn skip(detail: &str) -> Outcome {
    Outcome {
        status: Status::Skip,
        detail: detail.to_string(),
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn gaussian(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn c1_butterworth_h2() -> Outcome {
    let f = design_butter3(DEFAULT_OMEGA_N, 2.0).unwrap();
    let (a, b, c) = f.continuous_state_space();
    let p = solve_continuous_lyapunov(&a, &(&b * b.transpose())).unwrap();
    let h2 = (&c * p * c.transpose())[(0, 0)].sqrt();
    // closed form for a third-order Butterworth: ‖F‖² = k²·ω/3
    let k = (3.0 / DEFAULT_OMEGA_N).sqrt();
    let closed = (k * k * DEFAULT_OMEGA_N / 3.0).sqrt();
    verdict(
        (h2 - 1.0).abs() < 1e-3 && (closed - 1.0).abs() < 1e-12,
        format!("Lyapunov H2 = {h2:.9}, closed form = {closed:.9}, tol 1e-3"),
    )
}

/// Fraction of |y| ≥ 1 for the unclipped synthesis, computed with a
/// test-side direct-form recursion on the designed coefficients.
fn unclipped_tail_oracle(sigma_r: f64) -> f64 {
    let f = design_butter3(DEFAULT_OMEGA_N, 2.0).unwrap();
    let (b, a) = (f.b, f.a);
    let mut h = vec![0.0; 20_000];
    for k in 0..h.len() {
        let mut v = if k == 0 { b[0] } else { 0.0 };
        for i in 1..4 {
            if k >= i {
                v -= a[i] * h[k - i];
                if k == i {
                    v += b[i];
                }
            }
        }
        h[k] = v;
    }
    let energy = h.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut hits = 0usize;
    let mut total = 0usize;
    for seed in 0..4u64 {
        let u = gaussian(2_000_000, 900 + seed);
        let (mut x1, mut x2, mut x3, mut y1, mut y2, mut y3) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for (k, &x0) in u.iter().enumerate() {
            let y0 = b[0] * x0 + b[1] * x1 + b[2] * x2 + b[3] * x3 - a[1] * y1 - a[2] * y2 - a[3] * y3;
            (x3, x2, x1) = (x2, x1, x0);
            (y3, y2, y1) = (y2, y1, y0);
            if k >= 5000 {
                total += 1;
                if (sigma_r * y0 / energy).abs() >= 1.0 {
                    hits += 1;
                }
            }
        }
    }
    100.0 * hits as f64 / total as f64
}

fn c2_synthesis_moments() -> Outcome {
    let sigma = SIGMA_FACTOR * REFERENCE_VARIANCE.sqrt();
    let mut stds = Vec::new();
    let mut vars = Vec::new();
    let mut pegs = Vec::new();
    for seed in 0..10 {
        let mut cfg = SynthConfig {
            seed,
            n_samples: 100_000,
            saturate: false,
            ..SynthConfig::default()
        };
        stds.push(synth_regd(&cfg).unwrap().std() / sigma);
        cfg.saturate = true;
        let x = synth_regd(&cfg).unwrap();
        vars.push(x.variance());
        pegs.push(peg_percent(x.values(), 1e-6));
    }
    let std_err = (mean(&stds) - 1.0).abs() * 100.0;
    let var_err = (mean(&vars) / REFERENCE_VARIANCE - 1.0).abs() * 100.0;
    let oracle = unclipped_tail_oracle(sigma);
    let peg_err = (mean(&pegs) - oracle).abs();
    let worst_seed = stds.iter().map(|s| (s - 1.0).abs() * 100.0).fold(0.0, f64::max);
    verdict(
        worst_seed < 2.0 && var_err < 3.5 && peg_err < 2.5,
        format!(
            "unsaturated std err worst seed {worst_seed:.2}% (mean {std_err:.2}%), saturated variance {:.4} ({var_err:.2}%), pegging {:.2}% vs oracle {oracle:.2}% ({peg_err:.2} pts)",
            mean(&vars),
            mean(&pegs)
        ),
    )
}

fn c3_estimator_recovery() -> Outcome {
    let truth = [0.6, 0.2, 0.1];
    let ar = ArmaModel::ar(0.0, truth.to_vec(), 0.01);
    let x = simulate(&ar, 1_000_000, 2.0, 31, false).unwrap();
    let phi = fit_ar(&x, 3).unwrap().model.phi;
    let ar_err = phi.iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let v = VarModel {
        g: 1,
        mu: [0.01, 18.0],
        phi: vec![[[0.5, -0.2], [0.1, 0.7]]],
        sigma: [[0.01, 0.002], [0.002, 0.02]],
        bounds: SaturationBounds::REG_D,
    };
    let j = simulate_var(&v, 1_000_000, 2.0, 32, false).unwrap();
    let fv = fit_var(&j, 1).unwrap().model;
    let mut var_err: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            var_err = var_err.max((fv.phi[0][r][c] - v.phi[0][r][c]).abs());
        }
    }

    let y = simulate(&ar, 100_000, 2.0, 33, false).unwrap();
    let ols = fit_ar(&y, 3).unwrap().model.phi;
    let yw = yule_walker(&y, 3).unwrap();
    let yw_err = ols.iter().zip(&yw).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    verdict(
        ar_err < 0.01 && var_err < 0.01 && yw_err < 0.02,
        format!("AR(3) max err {ar_err:.4}, VAR(1) max err {var_err:.4}, YW vs OLS {yw_err:.4}"),
    )
}

fn c4_psd() -> Outcome {
    let cfg = WelchConfig {
        segment_len: 4096,
        overlap: 0.5,
    };
    let w = UniformSeries::new(gaussian(1 << 18, 41).iter().map(|z| 0.7 * z).collect(), 2.0).unwrap();
    let est = welch_psd(&w, cfg).unwrap();
    let parseval = (est.total_power() / w.variance() - 1.0).abs() * 100.0;

    let f0 = 0.0123;
    let s = UniformSeries::new((0..1 << 16).map(|k| (2.0 * PI * f0 * k as f64 * 2.0).sin()).collect(), 2.0).unwrap();
    let est_s = welch_psd(&s, cfg).unwrap();
    let bins_off = (est_s.peak_freq - f0).abs() / est_s.resolution();

    let w2 = w.map_values(|v| 2.0 * v).unwrap();
    let est2 = welch_psd(&w2, cfg).unwrap();
    let exact = est2.psd.iter().zip(&est.psd).all(|(a, b)| *a == 4.0 * b);

    let x = synth_regd(&SynthConfig {
        n_samples: 1 << 20,
        saturate: false,
        seed: 42,
        ..SynthConfig::default()
    })
    .unwrap();
    let p = welch_psd(&x, WelchConfig::default()).unwrap();
    let pts: Vec<(f64, f64)> = p
        .freqs
        .iter()
        .zip(&p.psd)
        .filter(|(f, _)| **f >= 0.02 && **f <= 0.08)
        .map(|(f, v)| (f.log10(), 10.0 * v.log10()))
        .collect();
    let (mx, my) = (mean(&pts.iter().map(|p| p.0).collect::<Vec<_>>()), mean(&pts.iter().map(|p| p.1).collect::<Vec<_>>()));
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / pts.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    verdict(
        parseval < 5.0 && bins_off <= 1.0 && exact && (slope + 60.0).abs() <= 10.0,
        format!(
            "Parseval err {parseval:.2}%, sinusoid peak {bins_off:.2} bins off, 2x scaling exact {exact}, roll-off {slope:.1} dB/decade"
        ),
    )
}

fn c5_reductions() -> Outcome {
    let mut var_dev: f64 = 0.0;
    let mut arma_dev: f64 = 0.0;
    let mut sat_dev: f64 = 0.0;
    let mut interior_cases = 0;
    for seed in 0..5u64 {
        let ar = ArmaModel::ar(0.01 * seed as f64, vec![1.1, -0.2, 0.05 * seed as f64 - 0.1], 0.002);
        let x = simulate(&ar, 20_000, 2.0, 50 + seed, true).unwrap();
        let f = UniformSeries::new(gaussian(20_000, 60 + seed), 2.0).unwrap();
        let j = agc_signal::ingest::JointSeries::new(x.clone(), f).unwrap();
        let v = VarModel::from_ar(&ar, 0.0, 1.0).unwrap();
        for end in [3, 500, 9_000, 20_000] {
            let a = forecast(&ar, &x.slice(0, end), 30, true).unwrap();
            let b = forecast_var(&v, &j.slice(0, end), 30, true).unwrap();
            for i in 0..30 {
                var_dev = var_dev.max((a.point[i] - b.point[i]).abs());
            }
        }
        let f1 = fit_ar(&x, 3).unwrap().model;
        let f2 = fit_arma(&x, 3, 0).unwrap().model;
        arma_dev = arma_dev.max((f1.mu - f2.mu).abs());
        for (p, q) in f1.phi.iter().zip(&f2.phi) {
            arma_dev = arma_dev.max((p - q).abs());
        }
        for end in (100..20_000).step_by(997) {
            let h = x.slice(0, end);
            let u = forecast(&f1, &h, 30, false).unwrap();
            if u.point.iter().all(|v| v.abs() < 1.0) {
                interior_cases += 1;
                let s = forecast(&f1, &h, 30, true).unwrap();
                for i in 0..30 {
                    sat_dev = sat_dev.max((u.point[i] - s.point[i]).abs());
                }
            }
        }
    }
    verdict(
        var_dev < 1e-9 && arma_dev < 1e-9 && sat_dev == 0.0 && interior_cases > 0,
        format!(
            "VAR vs AR max dev {var_dev:.1e}, ARMA(h=0) vs AR {arma_dev:.1e}, saturated vs unsaturated on {interior_cases} interior paths {sat_dev:.1e}"
        ),
    )
}

fn c6_metric_algebra() -> Outcome {
    let mut worst_decomp: f64 = 0.0;
    let mut runs = 0;
    let mut conserved = true;
    for seed in 0..3u64 {
        let x = synth_regd(&SynthConfig {
            n_samples: 30_000,
            seed: 70 + seed,
            ..SynthConfig::default()
        })
        .unwrap();
        let m = fit_ar(&x.slice(0, 15_000), 3).unwrap().model;
        let test = x.slice(15_000, 30_000);
        for opts in [EvalOptions::default(), EvalOptions { saturated: false, ..EvalOptions::default() }] {
            let leads: Vec<usize> = (1..=30).collect();
            for e in evaluate(&m, &test, &leads, opts).unwrap() {
                runs += 1;
                let lhs = e.te * e.n as f64;
                let rhs = e.se.unwrap_or(0.0) * e.n_sat as f64 + e.use_.unwrap_or(0.0) * e.n_unsat as f64;
                worst_decomp = worst_decomp.max((lhs - rhs).abs() / lhs);
            }
            let origins = Origins::new(test.len(), 3, &leads).unwrap();
            for lead in [1, 15, 30] {
                let (a, p) = slope_pairs(&m, &test, &leads, lead, opts).unwrap();
                for t in [0.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
                    let c = classify_slope_pairs(&a, &p, t).unwrap();
                    conserved &= c.total() == origins.count as u64;
                }
            }
        }
    }
    let x = synth_regd(&SynthConfig {
        n_samples: 5_000,
        seed: 80,
        ..SynthConfig::default()
    })
    .unwrap();
    let v = x.values().to_vec();
    let leads = [1, 10, 30];
    let origins = Origins::new(v.len(), 3, &leads).unwrap();
    let oracle = evaluate_with(&x, origins, &leads, 1e-6, |o| v[o + 1..=o + 30].to_vec()).unwrap();
    let perfect = oracle
        .iter()
        .all(|e| e.te == 0.0 && e.sle == 0.0 && e.se == Some(0.0) && e.use_ == Some(0.0) && e.slope_corr == Some(1.0));
    verdict(
        worst_decomp < 1e-12 && conserved && perfect,
        format!("{runs} runs, worst relative TE decomposition gap {worst_decomp:.1e}, confusion conserved {conserved}, perfect foresight exact {perfect}"),
    )
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let mut bytes = fs::read(&p).unwrap();
                if p.file_name().is_some_and(|n| n == "config.resolved.toml") {
                    let text = String::from_utf8(bytes).unwrap();
                    bytes = text.lines().filter(|l| !l.starts_with("out = ")).collect::<Vec<_>>().join("\n").into_bytes();
                }
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), bytes));
            }
        }
    }
    out.sort();
    out
}

fn c7_determinism() -> Outcome {
    let w = tempfile::tempdir().unwrap();
    common::write_fixtures(w.path(), 3000);
    let runs: [&[&str]; 7] = [
        &["synth", "--n-samples", "5000"],
        &["analyze", "regd.csv"],
        &["fit", "regd.csv"],
        &["forecast", "fit/model.json", "regd.csv"],
        &["eval", "fit/model.json", "regd.csv"],
        &["scan-tau", "regd.csv", "freq.csv", "--taus", "1,60,600"],
        &["fit", "regd.csv", "--kind", "var", "--freq", "freq.csv", "--tau", "1"],
    ];
    let mut identical = true;
    let mut files = 0;
    for rep in ["a", "b"] {
        for args in runs {
            let name = if args[0] == "fit" && args.len() > 2 { "fitvar" } else { args[0] };
            let out = format!("{rep}/{name}");
            let mut full = vec!["--out", out.as_str(), "--seed", "5"];
            full.extend_from_slice(args);
            let o = common::agcsig(w.path(), &full);
            if !o.status.success() {
                return verdict(false, format!("agcsig {full:?} failed: {}", String::from_utf8_lossy(&o.stderr)));
            }
            if args[0] == "fit" && args.len() == 2 {
                fs::create_dir_all(w.path().join("fit")).unwrap();
                fs::copy(w.path().join(&out).join("model.json"), w.path().join("fit/model.json")).unwrap();
            }
        }
    }
    let a = snapshot(&w.path().join("a"));
    let b = snapshot(&w.path().join("b"));
    files += a.len();
    identical &= a == b;
    verdict(identical && files > 20, format!("{files} output files compared across two runs, byte-identical apart from the recorded output path {identical}"))
}

fn non_decreasing(v: &[f64], allowance: f64) -> bool {
    v.windows(2).all(|w| w[1] >= w[0] * (1.0 - allowance))
}

fn c8_forecastability_shape() -> Outcome {
    let x = synth_regd(&SynthConfig {
        n_samples: 400_000,
        seed: 90,
        ..SynthConfig::default()
    })
    .unwrap();
    let m = fit_ar(&x.slice(0, 200_000), 3).unwrap().model;
    let test = x.slice(200_000, 400_000);
    let leads: Vec<usize> = (1..=30).collect();
    let ev = evaluate(&m, &test, &leads, EvalOptions::default()).unwrap();
    let te: Vec<f64> = ev.iter().map(|e| e.te).collect();
    let se: Vec<f64> = ev.iter().map(|e| e.se.unwrap()).collect();
    let us: Vec<f64> = ev.iter().map(|e| e.use_.unwrap()).collect();
    let sle: Vec<f64> = ev.iter().map(|e| e.sle).collect();
    let sc: Vec<f64> = ev.iter().map(|e| e.slope_corr.unwrap()).collect();
    let checks = [
        ("TE", non_decreasing(&te, 0.02)),
        ("SE", non_decreasing(&se, 0.02)),
        ("USE", non_decreasing(&us, 0.02)),
        ("SLE", non_decreasing(&sle, 0.02)),
        ("slope_corr", sc.windows(2).all(|w| w[1] < w[0])),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    verdict(
        failed.is_empty(),
        format!(
            "TE {:.4}->{:.4}, SE {:.4}->{:.4}, USE {:.4}->{:.4}, SLE {:.2e}->{:.2e}, slope_corr {:.3}->{:.3}{}",
            te[0],
            te[29],
            se[0],
            se[29],
            us[0],
            us[29],
            sle[0],
            sle[29],
            sc[0],
            sc[29],
            if failed.is_empty() { String::new() } else { format!("; not monotone: {failed:?}") }
        ),
    )
}

fn env_path(key: &str) -> Option<String> {
    std::env::var(key).ok().filter(|s| !s.is_empty())
}

fn c9_year_statistics(regd: Option<&UniformSeries>) -> Outcome {
    let Some(x) = regd else { return skip("set AGC_REGD_CSV") };
    let rm = running_moments(x).unwrap();
    let settle = settling_time(&rm.running_var, SettlingTolerance::default()).unwrap();
    let var = *rm.running_var.values().last().unwrap();
    let peg = peg_percent(x.values(), 1e-6);
    let psd = welch_psd(x, WelchConfig::default()).unwrap();
    let (peak_mhz, bw_mhz) = (psd.peak_freq * 1e3, psd.bandwidth_3db * 1e3);
    verdict(
        settle.is_settled() && (var - 0.42).abs() <= 0.05 && (peg - 25.0).abs() <= 5.0 && (peak_mhz - 0.7).abs() <= 0.3 && (bw_mhz - 12.0).abs() <= 4.0,
        format!(
            "running variance {var:.4} (settled {}), pegging {peg:.2}%, PSD peak {peak_mhz:.3} mHz, 3-dB bandwidth {bw_mhz:.2} mHz",
            settle.is_settled()
        ),
    )
}

fn c10_model_validation(regd: Option<&UniformSeries>) -> Outcome {
    let Some(x) = regd else { return skip("set AGC_REGD_CSV") };
    let n = 100_000;
    if x.len() < 10 * n {
        return verdict(false, format!("need 10 snippets of {n} samples, series has {}", x.len()));
    }
    let stride = x.len() / 10;
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..10 {
        let snip = x.slice(i * stride, i * stride + n);
        let cfg = SynthConfig {
            n_samples: n,
            seed: i as u64,
            ..SynthConfig::default()
        }
        .matched_to(&snip);
        let v = validate_model(&synth_regd(&cfg).unwrap(), &snip).unwrap();
        worst = (worst.0.max(v.std_err_pct), worst.1.max(v.mean_abs_err), worst.2.max(v.peg_err_pct));
    }
    verdict(
        worst.0 < 3.5 && worst.1 < 0.05 && worst.2 < 2.5,
        format!("worst of 10 snippets: std err {:.2}%, mean err {:.4}, pegging err {:.2} pts", worst.0, worst.1, worst.2),
    )
}

fn c11_hourly_ar(regd: Option<&UniformSeries>) -> Outcome {
    let Some(x) = regd else { return skip("set AGC_REGD_CSV") };
    let train_len = 7 * 43_200;
    let hour = 1800;
    if x.len() < train_len + 24 * hour {
        return verdict(false, "series shorter than 7 training days plus 24 test hours".into());
    }
    let m = fit_ar(&x.slice(0, train_len), 3).unwrap().model;
    let leads: Vec<usize> = (1..=15).collect();
    let mut te = [0.0; 15];
    let mut sc = [0.0; 15];
    let mut hours = 0.0;
    for h in 0..24 {
        let start = train_len + h * hour;
        let ev = evaluate(&m, &x.slice(start, start + hour), &leads, EvalOptions::default()).unwrap();
        for (i, e) in ev.iter().enumerate() {
            te[i] += e.te;
            sc[i] += e.slope_corr.unwrap_or(0.0);
        }
        hours += 1.0;
    }
    let worst_te = te.iter().map(|v| v / hours).fold(0.0, f64::max);
    let worst_sc = sc.iter().map(|v| v / hours).fold(1.0, f64::min);
    verdict(
        worst_te < 0.15 && worst_sc > 0.5,
        format!("24 hourly test sets, leads 1..15: max mean TE {worst_te:.4}, min mean slope_corr {worst_sc:.3}"),
    )
}

fn c12_frequency_day(regd_day: Option<&UniformSeries>, freq: Option<&UniformSeries>) -> Outcome {
    let (Some(r), Some(f)) = (regd_day, freq) else {
        return skip("set AGC_FREQ_CSV and AGC_REGD_DAY_CSV (or AGC_REGD_CSV)");
    };
    let scan = match scan_tau(r, f, &DEFAULT_TAU_GRID) {
        Ok(s) => s,
        Err(e) => return verdict(false, format!("scan failed: {e}")),
    };
    let j = build_joint(r, f, scan.tau_star).unwrap();
    let test_len = 4 * 1800;
    if j.len() < 2 * test_len {
        return verdict(false, format!("joint span too short: {} samples", j.len()));
    }
    let split = j.len() - test_len;
    let train = j.slice(0, split);
    let test = j.slice(split, j.len());
    let ar = fit_ar(train.regd(), 3).unwrap().model;
    let var = fit_var(&train, 3).unwrap().model;
    let leads: Vec<usize> = (1..=30).collect();
    let rows = compare(&ar, &var, &test, &leads, EvalOptions::default()).unwrap();
    let rel = 100.0 * mean(&rows.iter().map(|r| r.delta_te).collect::<Vec<_>>()) / mean(&rows.iter().map(|r| r.ar.te).collect::<Vec<_>>());
    let tau_ok = (300.0..=1200.0).contains(&scan.tau_star) && scan.best_xcorr() < 0.0;
    verdict(
        tau_ok && (2.0..=5.0).contains(&rel),
        format!(
            "tau* = {} s with xcorr0 {:.3}; VAR(3) TE lower than AR(3) by {rel:.2}% over leads 1..30",
            scan.tau_star,
            scan.best_xcorr()
        ),
    )
}

fn main() {
    let regd = env_path("AGC_REGD_CSV").map(|p| read_regd_csv(p, 2.0).expect("AGC_REGD_CSV").0);
    let regd_day = env_path("AGC_REGD_DAY_CSV").map(|p| read_regd_csv(p, 2.0).expect("AGC_REGD_DAY_CSV").0);
    let freq = env_path("AGC_FREQ_CSV").map(|p| read_freq_csv(p, 0.1).expect("AGC_FREQ_CSV").0);

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Butterworth H2 contract", Box::new(c1_butterworth_h2)),
        ("synthesis second moments", Box::new(c2_synthesis_moments)),
        ("estimator recovery", Box::new(c3_estimator_recovery)),
        ("PSD correctness", Box::new(c4_psd)),
        ("reduction properties", Box::new(c5_reductions)),
        ("metric algebra", Box::new(c6_metric_algebra)),
        ("determinism", Box::new(c7_determinism)),
        ("synthetic forecastability shape", Box::new(c8_forecastability_shape)),
        ("year-long Reg-D statistics", Box::new(|| c9_year_statistics(regd.as_ref()))),
        ("model validation on snippets", Box::new(|| c10_model_validation(regd.as_ref()))),
        ("AR(3) on hourly test sets", Box::new(|| c11_hourly_ar(regd.as_ref()))),
        ("tau scan and VAR(3) vs AR(3)", Box::new(|| c12_frequency_day(regd_day.as_ref().or(regd.as_ref()), freq.as_ref()))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Skip => "SKIP",
        };
        println!("[{tag}] criterion {:>2} {name}: {} ({:.1} s)", i + 1, o.detail, t.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
