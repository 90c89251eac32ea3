//! Stable CSV/JSON output: fixed float formatting, table writers, and the
//! versioned model document shared by AR, ARMA and VAR models.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arma::{ArmaModel, ConfusionMatrix3, FitWarning, ForecastEval, ForecastPath, SlopeClass};
use crate::error::{Error, Result};
use crate::varma::{CompareRow, TauScanResult, VarModel};

pub const MODEL_FORMAT: &str = "agc-signal-model";
pub const MODEL_VERSION: u32 = 1;

/// Nine significant digits in scientific notation.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn fmt9_opt(x: Option<f64>) -> String {
    x.map(fmt9).unwrap_or_default()
}

/// Writes a header and rows of preformatted cells.
pub fn write_table<I>(path: impl AsRef<Path>, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Ar(ArmaModel),
    Arma(ArmaModel),
    Var(VarModel),
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Ar(_) => "ar",
            ModelSpec::Arma(_) => "arma",
            ModelSpec::Var(_) => "var",
        }
    }

    pub fn order(&self) -> usize {
        match self {
            ModelSpec::Ar(m) | ModelSpec::Arma(m) => m.g,
            ModelSpec::Var(m) => m.g,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub source: Option<String>,
    pub freq_source: Option<String>,
    pub n_samples: usize,
    pub dt: f64,
    pub t0: Option<f64>,
    /// Frequency filter time constant, VAR only.
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub spec: ModelSpec,
    pub training: TrainingMeta,
    pub warnings: Vec<FitWarning>,
}

impl ModelDocument {
    pub fn new(spec: ModelSpec, training: TrainingMeta, warnings: Vec<FitWarning>) -> Self {
        Self {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            spec,
            training,
            warnings,
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::Model(format!("unknown model format {:?}", doc.format)));
        }
        if doc.version != MODEL_VERSION {
            return Err(Error::Model(format!("unsupported model version {}", doc.version)));
        }
        Ok(doc)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }
}

pub const EVAL_HEADER: [&str; 9] = ["lead", "n", "n_sat", "n_unsat", "te", "se", "use", "sle", "slope_corr"];

pub fn eval_row(e: &ForecastEval) -> Vec<String> {
    vec![
        e.lead.to_string(),
        e.n.to_string(),
        e.n_sat.to_string(),
        e.n_unsat.to_string(),
        fmt9(e.te),
        fmt9_opt(e.se),
        fmt9_opt(e.use_),
        fmt9(e.sle),
        fmt9_opt(e.slope_corr),
    ]
}

pub fn write_eval(path: impl AsRef<Path>, evals: &[ForecastEval]) -> Result<()> {
    write_table(path, &EVAL_HEADER, evals.iter().map(eval_row))
}

pub const CONFUSION_HEADER: [&str; 7] = ["lead", "threshold_pct", "threshold", "actual", "pred_up", "pred_down", "pred_flat"];

/// One row per actual class for each `(lead, matrix)`.
pub fn write_confusion(path: impl AsRef<Path>, mats: &[(usize, ConfusionMatrix3)]) -> Result<()> {
    let rows = mats.iter().flat_map(|(lead, m)| {
        SlopeClass::ALL.iter().map(move |&c| {
            let r = m.counts[c.index()];
            vec![
                lead.to_string(),
                fmt9(m.threshold_pct),
                fmt9(m.threshold),
                c.label().to_string(),
                r[0].to_string(),
                r[1].to_string(),
                r[2].to_string(),
            ]
        })
    });
    write_table(path, &CONFUSION_HEADER, rows)
}

pub const FORECAST_HEADER: [&str; 5] = ["lead", "time", "point", "ci95_lo", "ci95_hi"];

pub fn write_forecast(path: impl AsRef<Path>, p: &ForecastPath, origin_time: f64, dt: f64) -> Result<()> {
    let rows = (0..p.lead).map(|i| {
        vec![
            (i + 1).to_string(),
            format!("{}", origin_time + (i + 1) as f64 * dt),
            fmt9(p.point[i]),
            fmt9(p.ci95_lo[i]),
            fmt9(p.ci95_hi[i]),
        ]
    });
    write_table(path, &FORECAST_HEADER, rows)
}

pub fn write_scan(path: impl AsRef<Path>, r: &TauScanResult) -> Result<()> {
    let rows = r
        .taus
        .iter()
        .zip(&r.xcorr0)
        .map(|(t, c)| vec![format!("{t}"), fmt9(*c), (*t == r.tau_star).to_string()]);
    write_table(path, &["tau", "xcorr0", "selected"], rows)
}

pub const COMPARE_HEADER: [&str; 15] = [
    "lead",
    "te_ar",
    "te_var",
    "se_ar",
    "se_var",
    "use_ar",
    "use_var",
    "sle_ar",
    "sle_var",
    "slope_corr_ar",
    "slope_corr_var",
    "delta_te",
    "delta_se",
    "delta_use",
    "delta_sle",
];

pub fn write_compare(path: impl AsRef<Path>, rows: &[CompareRow]) -> Result<()> {
    let rows = rows.iter().map(|r| {
        vec![
            r.lead.to_string(),
            fmt9(r.ar.te),
            fmt9(r.var.te),
            fmt9_opt(r.ar.se),
            fmt9_opt(r.var.se),
            fmt9_opt(r.ar.use_),
            fmt9_opt(r.var.use_),
            fmt9(r.ar.sle),
            fmt9(r.var.sle),
            fmt9_opt(r.ar.slope_corr),
            fmt9_opt(r.var.slope_corr),
            fmt9(r.delta_te),
            fmt9_opt(r.delta_se),
            fmt9_opt(r.delta_use),
            fmt9(r.delta_sle),
        ]
    });
    write_table(path, &COMPARE_HEADER, rows)
}
