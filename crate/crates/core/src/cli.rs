//! The `agcsig` command line.
//!
//! Every command resolves a flat [`RunConfig`] (built-in defaults, then the
//! `--config` TOML file, then flags), writes its outputs into the run
//! directory together with `config.resolved.toml` and `version.txt`, and on
//! failure prints an error JSON and exits with 2 (usage), 3 (data) or 4
//! (numeric/model).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arma::{self, classify_slope_pairs, EvalOptions};
use crate::error::{Error, Result};
use crate::ingest::{build_joint, read_freq_csv, read_series_csv, write_series_csv, JointSeries, ReadOptions};
use crate::report::{self, fmt9, ModelDocument, ModelSpec, TrainingMeta};
use crate::series::UniformSeries;
use crate::stats::{self, GroupBy, PegOptions, SettlingTolerance, WelchConfig};
use crate::synth::{self, SynthConfig};
use crate::varma::{self, DEFAULT_TAU_GRID};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ar,
    Arma,
    Var,
}

/// Flat run configuration. Every key has a default; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub out: PathBuf,
    pub seed: u64,
    pub utc_offset_minutes: i32,

    /// Reg-D (or generic) input series.
    pub input: Option<PathBuf>,
    /// Raw frequency series.
    pub freq_input: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub ar_model: Option<PathBuf>,
    pub var_model: Option<PathBuf>,
    /// Series whose standard deviation sets `synth_sigma_r`.
    pub reference: Option<PathBuf>,

    pub regd_dt: f64,
    pub freq_dt: f64,
    pub max_gap: usize,

    pub peg_tol: f64,
    pub hist_bins: usize,
    pub moments_stride: usize,
    pub settle_rel_tol: f64,
    pub settle_abs_floor: f64,
    pub group_by: Vec<GroupBy>,
    pub welch_segment_len: usize,
    pub welch_overlap: f64,
    pub acf_max_lag: usize,

    pub synth_n_samples: usize,
    pub synth_omega_n: f64,
    pub synth_sigma_r: f64,
    pub synth_saturate: bool,
    pub synth_stream: u64,
    pub synth_t0: f64,

    pub model_kind: ModelKind,
    pub ar_order: usize,
    pub ma_order: usize,
    pub tau: f64,
    pub tau_grid: Vec<f64>,

    pub forecast_lead: usize,
    pub leads: Vec<usize>,
    pub threshold_pct: Vec<f64>,
    pub saturated: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let synth = SynthConfig::default();
        Self {
            out: PathBuf::from("agcsig-out"),
            seed: 0,
            utc_offset_minutes: 0,
            input: None,
            freq_input: None,
            model: None,
            ar_model: None,
            var_model: None,
            reference: None,
            regd_dt: crate::ingest::REGD_DT,
            freq_dt: crate::ingest::FREQ_DT,
            max_gap: crate::ingest::DEFAULT_MAX_GAP,
            peg_tol: stats::DEFAULT_PEG_TOL,
            hist_bins: 100,
            moments_stride: 1,
            settle_rel_tol: SettlingTolerance::default().rel_tol,
            settle_abs_floor: SettlingTolerance::default().abs_floor,
            group_by: GroupBy::ALL_KINDS.to_vec(),
            welch_segment_len: WelchConfig::default().segment_len,
            welch_overlap: WelchConfig::default().overlap,
            acf_max_lag: 60,
            synth_n_samples: synth.n_samples,
            synth_omega_n: synth.omega_n,
            synth_sigma_r: synth.sigma_r,
            synth_saturate: true,
            synth_stream: 0,
            synth_t0: 0.0,
            model_kind: ModelKind::Ar,
            ar_order: 3,
            ma_order: 0,
            tau: 600.0,
            tau_grid: DEFAULT_TAU_GRID.to_vec(),
            forecast_lead: 30,
            leads: (1..=30).collect(),
            threshold_pct: vec![10.0, 20.0],
            saturated: true,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.leads.is_empty() || self.leads.contains(&0) {
            return bad("leads must be a nonempty list of positive integers");
        }
        if self.forecast_lead == 0 {
            return bad("forecast_lead must be >= 1");
        }
        if self.moments_stride == 0 {
            return bad("moments_stride must be >= 1");
        }
        if self.threshold_pct.iter().any(|t| !(*t >= 0.0)) {
            return bad("threshold_pct values must be >= 0");
        }
        if !(self.peg_tol >= 0.0 && self.peg_tol < 1.0) {
            return bad("peg_tol must lie in [0, 1)");
        }
        if self.group_by.is_empty() {
            return bad("group_by must not be empty");
        }
        Ok(())
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            peg_tol: self.peg_tol,
            saturated: self.saturated,
        }
    }

    fn peg_options(&self) -> PegOptions {
        PegOptions {
            tol: self.peg_tol,
            utc_offset_minutes: self.utc_offset_minutes,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "agcsig", version, about = "AGC regulation signal analysis, synthesis and forecasting")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Offset from UTC in minutes for calendar grouping.
    #[arg(long = "utc-offset", global = true, allow_negative_numbers = true)]
    pub utc_offset: Option<i32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distribution, moments, settling, pegging, PSD and correlation reports.
    Analyze(AnalyzeArgs),
    /// Synthesize a saturated Butterworth-colored signal.
    Synth(SynthArgs),
    /// Fit an AR, ARMA or VAR model.
    Fit(FitArgs),
    /// Forecast from the end of a history.
    Forecast(ForecastArgs),
    /// Rolling-origin backtest with error metrics and slope confusion.
    Eval(EvalArgs),
    /// Lag-0 correlation of Reg-D with the frequency over a τ grid.
    ScanTau(ScanTauArgs),
    /// Backtest an AR and a VAR model at identical origins.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub sigma_r: Option<f64>,
    #[arg(long)]
    pub omega_n: Option<f64>,
    /// Set sigma_r from this series' standard deviation.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Skip the ±1 clamp.
    #[arg(long)]
    pub no_saturate: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<ModelKind>,
    /// AR (or VAR lag) order g.
    #[arg(long)]
    pub order: Option<usize>,
    /// MA order h.
    #[arg(long)]
    pub ma_order: Option<usize>,
    #[arg(long)]
    pub freq: Option<PathBuf>,
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    pub model: Option<PathBuf>,
    pub history: Option<PathBuf>,
    #[arg(long)]
    pub lead: Option<usize>,
    #[arg(long)]
    pub freq: Option<PathBuf>,
    #[arg(long)]
    pub unsaturated: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub model: Option<PathBuf>,
    pub test: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub leads: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub threshold_pct: Option<Vec<f64>>,
    #[arg(long)]
    pub freq: Option<PathBuf>,
    #[arg(long)]
    pub unsaturated: bool,
}

#[derive(Debug, Args)]
pub struct ScanTauArgs {
    pub regd: Option<PathBuf>,
    pub freq: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub taus: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub ar_model: Option<PathBuf>,
    pub var_model: Option<PathBuf>,
    pub regd: Option<PathBuf>,
    pub freq: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub leads: Option<Vec<usize>>,
    #[arg(long)]
    pub tau: Option<f64>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

/// Defaults, then the config file, then flags.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    set(&mut c.out, cli.out.clone());
    set(&mut c.seed, cli.seed);
    set(&mut c.utc_offset_minutes, cli.utc_offset);
    match &cli.command {
        Command::Analyze(a) => {
            set_opt(&mut c.input, a.input.clone());
            set(&mut c.regd_dt, a.dt);
        }
        Command::Synth(a) => {
            set(&mut c.synth_n_samples, a.n_samples);
            set(&mut c.synth_sigma_r, a.sigma_r);
            set(&mut c.synth_omega_n, a.omega_n);
            set_opt(&mut c.reference, a.reference.clone());
            if a.no_saturate {
                c.synth_saturate = false;
            }
        }
        Command::Fit(a) => {
            set_opt(&mut c.input, a.input.clone());
            set(&mut c.model_kind, a.kind);
            set(&mut c.ar_order, a.order);
            set(&mut c.ma_order, a.ma_order);
            set_opt(&mut c.freq_input, a.freq.clone());
            set(&mut c.tau, a.tau);
        }
        Command::Forecast(a) => {
            set_opt(&mut c.model, a.model.clone());
            set_opt(&mut c.input, a.history.clone());
            set(&mut c.forecast_lead, a.lead);
            set_opt(&mut c.freq_input, a.freq.clone());
            if a.unsaturated {
                c.saturated = false;
            }
        }
        Command::Eval(a) => {
            set_opt(&mut c.model, a.model.clone());
            set_opt(&mut c.input, a.test.clone());
            set(&mut c.leads, a.leads.clone());
            set(&mut c.threshold_pct, a.threshold_pct.clone());
            set_opt(&mut c.freq_input, a.freq.clone());
            if a.unsaturated {
                c.saturated = false;
            }
        }
        Command::ScanTau(a) => {
            set_opt(&mut c.input, a.regd.clone());
            set_opt(&mut c.freq_input, a.freq.clone());
            set(&mut c.tau_grid, a.taus.clone());
        }
        Command::Compare(a) => {
            set_opt(&mut c.ar_model, a.ar_model.clone());
            set_opt(&mut c.var_model, a.var_model.clone());
            set_opt(&mut c.input, a.regd.clone());
            set_opt(&mut c.freq_input, a.freq.clone());
            set(&mut c.leads, a.leads.clone());
            set(&mut c.tau, a.tau);
        }
    }
    c.validate()?;
    Ok(c)
}

fn required<'a>(p: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Usage(format!("missing input: pass it on the command line or set `{key}`")))
}

fn read_regd(c: &RunConfig) -> Result<UniformSeries> {
    let opts = ReadOptions::regd(c.regd_dt).with_max_gap(c.max_gap);
    Ok(read_series_csv(required(&c.input, "input")?, &opts)?.0)
}

fn read_joint(c: &RunConfig, tau: f64) -> Result<JointSeries> {
    let regd = read_regd(c)?;
    let opts = ReadOptions::freq(c.freq_dt).with_max_gap(c.max_gap);
    let (freq, _) = read_series_csv(required(&c.freq_input, "freq_input")?, &opts)?;
    build_joint(&regd, &freq, tau)
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn prepare_out(c: &RunConfig) -> Result<()> {
    fs::create_dir_all(&c.out)?;
    fs::write(c.out.join("config.resolved.toml"), c.to_toml()?)?;
    fs::write(c.out.join("version.txt"), format!("agcsig {VERSION}\n"))?;
    Ok(())
}

fn cmd_analyze(c: &RunConfig) -> Result<()> {
    let opts = ReadOptions::regd(c.regd_dt).with_max_gap(c.max_gap);
    let (x, gaps) = read_series_csv(required(&c.input, "input")?, &opts)?;
    let out = &c.out;

    let h = stats::histogram(&x, c.hist_bins)?;
    let rows = h.bin_edges.windows(2).zip(&h.counts).zip(&h.densities).map(|((e, n), d)| {
        vec![fmt9(e[0]), fmt9(e[1]), n.to_string(), fmt9(*d)]
    });
    report::write_table(out.join("histogram.csv"), &["bin_lo", "bin_hi", "count", "density"], rows)?;

    let m = stats::running_moments(&x)?;
    let rows = (0..x.len()).step_by(c.moments_stride).map(|k| {
        vec![
            format!("{}", x.time_at(k)),
            fmt9(m.running_mean.values()[k]),
            fmt9(m.running_var.values()[k]),
        ]
    });
    report::write_table(out.join("running_moments.csv"), &["time", "running_mean", "running_var"], rows)?;

    let tol = SettlingTolerance {
        rel_tol: c.settle_rel_tol,
        abs_floor: c.settle_abs_floor,
    };
    let settle_mean = stats::settling_time(&m.running_mean, tol)?;
    let settle_var = stats::settling_time(&m.running_var, tol)?;
    report::write_json(out.join("settling.json"), &json!({ "mean": settle_mean, "variance": settle_var }))?;

    let peg = c.peg_options();
    let mut amount_rows = Vec::new();
    let mut duration_rows = Vec::new();
    for &g in &c.group_by {
        for a in stats::pegging_amount(&x, g, &peg) {
            amount_rows.push(vec![
                g.to_string(),
                a.group_key,
                a.n_samples.to_string(),
                a.n_pegged.to_string(),
                fmt9(a.amount_pct),
            ]);
        }
        for d in stats::pegging_durations(&x, g, &peg) {
            duration_rows.push(vec![
                g.to_string(),
                d.group_key,
                d.n_runs.to_string(),
                d.pegged_samples.to_string(),
                fmt9(d.max),
                fmt9(d.mean),
                fmt9(d.p95),
            ]);
        }
    }
    report::write_table(
        out.join("pegging_amount.csv"),
        &["group_by", "group_key", "n_samples", "n_pegged", "amount_pct"],
        amount_rows,
    )?;
    report::write_table(
        out.join("pegging_duration.csv"),
        &["group_by", "group_key", "n_runs", "pegged_samples", "max_s", "mean_s", "p95_s"],
        duration_rows,
    )?;

    // short inputs fall back to the largest power-of-two segment that fits
    let mut seg = c.welch_segment_len;
    if seg > x.len() {
        seg = 1usize << (usize::BITS - 1 - x.len().leading_zeros());
    }
    let psd = stats::welch_psd(
        &x,
        WelchConfig {
            segment_len: seg,
            overlap: c.welch_overlap,
        },
    )?;
    let rows = psd.freqs.iter().zip(&psd.psd).map(|(f, p)| vec![fmt9(*f), fmt9(*p)]);
    report::write_table(out.join("psd.csv"), &["freq_hz", "psd"], rows)?;

    let max_lag = c.acf_max_lag.min((x.len() - 1) / 2);
    let mut acf_written = false;
    if max_lag >= 1 {
        if let (Ok(r), Ok(p)) = (stats::acf(&x, max_lag), stats::pacf(&x, max_lag)) {
            let rows = (0..=max_lag).map(|k| {
                vec![
                    k.to_string(),
                    fmt9(r[k]),
                    if k == 0 { String::new() } else { fmt9(p[k - 1]) },
                ]
            });
            report::write_table(out.join("acf.csv"), &["lag", "acf", "pacf"], rows)?;
            acf_written = true;
        }
    }

    let summary = json!({
        "n_samples": x.len(),
        "dt": x.dt(),
        "t0": x.t0(),
        "mean": x.mean(),
        "variance": x.variance(),
        "std": x.std(),
        "peg_pct": stats::peg_percent(x.values(), c.peg_tol),
        "psd_peak_hz": psd.peak_freq,
        "psd_bandwidth_3db_hz": psd.bandwidth_3db,
        "psd_segment_len": seg,
        "psd_n_segments": psd.n_segments,
        "mean_settling_s": settle_mean.settling_time,
        "variance_settling_s": settle_var.settling_time,
        "gap_filled_samples": gaps.filled_samples(),
        "gaps": gaps,
        "acf_written": acf_written,
    });
    report::write_json(out.join("summary.json"), &summary)
}

fn cmd_synth(c: &RunConfig) -> Result<()> {
    let mut cfg = SynthConfig {
        omega_n: c.synth_omega_n,
        sigma_r: c.synth_sigma_r,
        n_samples: c.synth_n_samples,
        dt: c.regd_dt,
        seed: c.seed,
        stream: c.synth_stream,
        saturate: c.synth_saturate,
        ..SynthConfig::default()
    };
    if let Some(p) = &c.reference {
        let opts = ReadOptions::regd(c.regd_dt).with_max_gap(c.max_gap);
        let (r, _) = read_series_csv(p, &opts)?;
        cfg = cfg.matched_to(&r);
    }
    let filt = synth::design_butter3(cfg.omega_n, cfg.dt)?;
    let x = synth::synth_regd(&cfg)?;
    let x = UniformSeries::with_start(x.into_values(), cfg.dt, Some(c.synth_t0))?;
    write_series_csv(&x, c.out.join("synth.csv"))?;
    let meta = json!({
        "config": cfg,
        "filter": {
            "gain": filt.gain,
            "continuous_h2": filt.continuous_h2,
            "discrete_h2": filt.discrete_h2,
            "output_gain": filt.output_gain,
            "b": filt.b,
            "a": filt.a,
            "warmup_samples": filt.warmup_samples(),
        },
        "mean": x.mean(),
        "variance": x.variance(),
        "std": x.std(),
        "peg_pct": stats::peg_percent(x.values(), stats::DEFAULT_PEG_TOL),
    });
    report::write_json(c.out.join("synth_meta.json"), &meta)
}

fn cmd_fit(c: &RunConfig) -> Result<ModelDocument> {
    let (spec, meta, warnings) = match c.model_kind {
        ModelKind::Ar | ModelKind::Arma => {
            let x = read_regd(c)?;
            let f = if c.model_kind == ModelKind::Ar {
                arma::fit_ar(&x, c.ar_order)?
            } else {
                arma::fit_arma(&x, c.ar_order, c.ma_order)?
            };
            let meta = TrainingMeta {
                source: path_string(&c.input),
                freq_source: None,
                n_samples: x.len(),
                dt: x.dt(),
                t0: x.t0(),
                tau: None,
            };
            let spec = if c.model_kind == ModelKind::Ar {
                ModelSpec::Ar(f.model)
            } else {
                ModelSpec::Arma(f.model)
            };
            (spec, meta, f.warnings)
        }
        ModelKind::Var => {
            let j = read_joint(c, c.tau)?;
            let f = varma::fit_var(&j, c.ar_order)?;
            let meta = TrainingMeta {
                source: path_string(&c.input),
                freq_source: path_string(&c.freq_input),
                n_samples: j.len(),
                dt: j.dt(),
                t0: j.regd().t0(),
                tau: Some(c.tau),
            };
            (ModelSpec::Var(f.model), meta, f.warnings)
        }
    };
    for w in &warnings {
        eprintln!("warning: {}", serde_json::to_string(w)?);
    }
    let doc = ModelDocument::new(spec, meta, warnings);
    doc.write(c.out.join("model.json"))?;
    Ok(doc)
}

fn load_model(p: &Option<PathBuf>, key: &str) -> Result<ModelDocument> {
    ModelDocument::read(required(p, key)?)
}

fn var_tau(doc: &ModelDocument, c: &RunConfig) -> f64 {
    doc.training.tau.unwrap_or(c.tau)
}

fn cmd_forecast(c: &RunConfig) -> Result<()> {
    let doc = load_model(&c.model, "model")?;
    let (path, origin_time, dt) = match &doc.spec {
        ModelSpec::Ar(m) | ModelSpec::Arma(m) => {
            let x = read_regd(c)?;
            let p = arma::forecast(m, &x, c.forecast_lead, c.saturated)?;
            (p, x.time_at(x.len() - 1), x.dt())
        }
        ModelSpec::Var(m) => {
            let j = read_joint(c, var_tau(&doc, c))?;
            let p = varma::forecast_var(m, &j, c.forecast_lead, c.saturated)?;
            (p, j.regd().time_at(j.len() - 1), j.dt())
        }
    };
    report::write_forecast(c.out.join("forecast.csv"), &path, origin_time, dt)
}

fn cmd_eval(c: &RunConfig) -> Result<()> {
    let doc = load_model(&c.model, "model")?;
    let opts = c.eval_options();
    let leads = &c.leads;
    let (evals, pairs) = match &doc.spec {
        ModelSpec::Ar(m) | ModelSpec::Arma(m) => {
            let x = read_regd(c)?;
            let e = arma::evaluate(m, &x, leads, opts)?;
            let p = leads
                .iter()
                .map(|&l| arma::slope_pairs(m, &x, leads, l, opts).map(|p| (l, p)))
                .collect::<Result<Vec<_>>>()?;
            (e, p)
        }
        ModelSpec::Var(m) => {
            let j = read_joint(c, var_tau(&doc, c))?;
            let e = varma::evaluate_var(m, &j, leads, opts)?;
            let p = leads
                .iter()
                .map(|&l| varma::slope_pairs_var(m, &j, leads, l, opts).map(|p| (l, p)))
                .collect::<Result<Vec<_>>>()?;
            (e, p)
        }
    };
    report::write_eval(c.out.join("metrics.csv"), &evals)?;
    let mut mats = Vec::new();
    for (l, (a, p)) in &pairs {
        for &t in &c.threshold_pct {
            mats.push((*l, classify_slope_pairs(a, p, t)?));
        }
    }
    report::write_confusion(c.out.join("confusion.csv"), &mats)
}

fn cmd_scan_tau(c: &RunConfig) -> Result<()> {
    let regd = read_regd(c)?;
    let (freq, _) = read_freq_csv(required(&c.freq_input, "freq_input")?, c.freq_dt)?;
    let r = varma::scan_tau(&regd, &freq, &c.tau_grid)?;
    report::write_scan(c.out.join("scan.csv"), &r)?;
    report::write_json(
        c.out.join("scan.json"),
        &json!({ "tau_star": r.tau_star, "xcorr0_at_tau_star": r.best_xcorr() }),
    )
}

fn cmd_compare(c: &RunConfig) -> Result<()> {
    let ar_doc = load_model(&c.ar_model, "ar_model")?;
    let var_doc = load_model(&c.var_model, "var_model")?;
    let ar = match &ar_doc.spec {
        ModelSpec::Ar(m) | ModelSpec::Arma(m) => m,
        ModelSpec::Var(_) => return Err(Error::Usage("ar_model holds a VAR model".into())),
    };
    let var = match &var_doc.spec {
        ModelSpec::Var(m) => m,
        _ => return Err(Error::Usage("var_model does not hold a VAR model".into())),
    };
    let j = read_joint(c, var_tau(&var_doc, c))?;
    let rows = varma::compare(ar, var, &j, &c.leads, c.eval_options())?;
    report::write_compare(c.out.join("compare.csv"), &rows)?;
    let mean = |f: &dyn Fn(&varma::CompareRow) -> Option<f64>| {
        let v: Vec<f64> = rows.iter().filter_map(f).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    };
    report::write_json(
        c.out.join("compare_summary.json"),
        &json!({
            "mean_delta_te": mean(&|r| Some(r.delta_te)),
            "mean_delta_se": mean(&|r| r.delta_se),
            "mean_delta_use": mean(&|r| r.delta_use),
            "mean_delta_sle": mean(&|r| Some(r.delta_sle)),
        }),
    )
}

fn dispatch(cli: &Cli, c: &RunConfig) -> Result<()> {
    match &cli.command {
        Command::Analyze(_) => cmd_analyze(c),
        Command::Synth(_) => cmd_synth(c),
        Command::Fit(_) => cmd_fit(c).map(|_| ()),
        Command::Forecast(_) => cmd_forecast(c),
        Command::Eval(_) => cmd_eval(c),
        Command::ScanTau(_) => cmd_scan_tau(c),
        Command::Compare(_) => cmd_compare(c),
    }
}

fn error_json(e: &Error) -> String {
    json!({ "kind": e.kind(), "class": format!("{:?}", e.class()).to_lowercase(), "message": e.to_string() })
        .to_string()
}

/// Parses `args`, runs the command, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (result, out) = match resolve(&cli) {
        Ok(c) => (prepare_out(&c).and_then(|_| dispatch(&cli, &c)), Some(c.out)),
        Err(e) => (Err(e), None),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let text = error_json(&e);
            eprintln!("{text}");
            if let Some(out) = out.filter(|o| o.is_dir()) {
                let _ = fs::write(out.join("error.json"), format!("{text}\n"));
            }
            e.class().exit_code()
        }
    }
}
