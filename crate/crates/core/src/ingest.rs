//! CSV ingestion of Reg-D and grid-frequency recordings, gap filling, and
//! alignment of the two channels on a common grid.
//!
//! Rows are `timestamp,value`. Timestamps are epoch seconds or ISO-8601
//! (offset-less stamps are read as UTC). A single header line is tolerated.
//! Missing samples are filled by zero-order hold up to [`DEFAULT_MAX_GAP`]
//! consecutive samples; longer gaps are an error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{integer_ratio, lag_filter, resample_mean, UniformSeries};

pub const DEFAULT_MAX_GAP: usize = 30;
pub const REGD_DT: f64 = 2.0;
pub const FREQ_DT: f64 = 0.1;
pub const CLAMP_EPS: f64 = 1e-6;
pub const FREQ_RANGE_HZ: (f64, f64) = (55.0, 65.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    /// Index in the output series of the first filled sample.
    pub start_index: usize,
    /// Epoch seconds of the first filled sample.
    pub start_time: f64,
    pub length: usize,
    pub policy: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GapReport {
    pub gaps: Vec<Gap>,
}

impl GapReport {
    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn filled_samples(&self) -> usize {
        self.gaps.iter().map(|g| g.length).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// What a reader accepts and how it repairs the input.
#[derive(Debug, Clone)]
pub struct ReadOptions {
    pub expected_dt: f64,
    pub max_gap: usize,
    /// Accepted physical range; values outside are rejected.
    pub range: Option<(f64, f64)>,
    /// Clamp to this interval after the range check.
    pub clamp: Option<(f64, f64)>,
}

impl ReadOptions {
    pub fn regd(expected_dt: f64) -> Self {
        Self {
            expected_dt,
            max_gap: DEFAULT_MAX_GAP,
            range: Some((-1.0 - CLAMP_EPS, 1.0 + CLAMP_EPS)),
            clamp: Some((-1.0, 1.0)),
        }
    }

    pub fn freq(expected_dt: f64) -> Self {
        Self {
            expected_dt,
            max_gap: DEFAULT_MAX_GAP,
            range: Some(FREQ_RANGE_HZ),
            clamp: None,
        }
    }

    pub fn plain(expected_dt: f64) -> Self {
        Self {
            expected_dt,
            max_gap: DEFAULT_MAX_GAP,
            range: None,
            clamp: None,
        }
    }

    pub fn with_max_gap(mut self, max_gap: usize) -> Self {
        self.max_gap = max_gap;
        self
    }
}

pub fn read_regd_csv(path: impl AsRef<Path>, expected_dt: f64) -> Result<(UniformSeries, GapReport)> {
    read_series_csv(path, &ReadOptions::regd(expected_dt))
}

pub fn read_freq_csv(path: impl AsRef<Path>, expected_dt: f64) -> Result<(UniformSeries, GapReport)> {
    read_series_csv(path, &ReadOptions::freq(expected_dt))
}

pub fn read_series_csv(path: impl AsRef<Path>, opts: &ReadOptions) -> Result<(UniformSeries, GapReport)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Unreadable {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    parse_series(file, opts).map_err(|e| match e {
        Error::Io(io) => Error::Unreadable {
            path: path.to_path_buf(),
            reason: io.to_string(),
        },
        other => other,
    })
}

/// Parses `timestamp,value` rows from any reader.
pub fn parse_series(reader: impl std::io::Read, opts: &ReadOptions) -> Result<(UniformSeries, GapReport)> {
    if !(opts.expected_dt.is_finite() && opts.expected_dt > 0.0) {
        return Err(Error::InvalidSampleInterval(opts.expected_dt));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);

    let dt = opts.expected_dt;
    let mut values: Vec<f64> = Vec::new();
    let mut t0: Option<f64> = None;
    let mut last_t: Option<f64> = None;
    let mut gaps = Vec::new();

    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::MalformedRow {
                line: i + 1,
                reason: format!("{other:?}"),
            },
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 1);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed = parse_row(&rec);
        let (t, v) = match parsed {
            Ok(row) => row,
            Err(_) if values.is_empty() && t0.is_none() && line == 1 => continue,
            Err(reason) => return Err(Error::MalformedRow { line, reason }),
        };
        if let Some((lo, hi)) = opts.range {
            if !(lo..=hi).contains(&v) {
                return Err(Error::ValueOutOfPhysicalRange { line, value: v, lo, hi });
            }
        }
        let v = match opts.clamp {
            Some((lo, hi)) => v.clamp(lo, hi),
            None => v,
        };

        match last_t {
            None => t0 = Some(t),
            Some(prev) => {
                if t <= prev {
                    return Err(Error::NonMonotonicTimestamp { line });
                }
                let steps = ((t - prev) / dt).round();
                if steps < 1.0 {
                    return Err(Error::MalformedRow {
                        line,
                        reason: format!("timestamp {t} is off the {dt} s grid"),
                    });
                }
                let missing = steps as usize - 1;
                if missing > 0 {
                    let start = values.len();
                    if missing > opts.max_gap {
                        return Err(Error::GapTooLarge { start, length: missing });
                    }
                    let hold = *values.last().expect("gap follows a sample");
                    values.extend(std::iter::repeat_n(hold, missing));
                    gaps.push(Gap {
                        start_index: start,
                        start_time: prev + dt,
                        length: missing,
                        policy: "zero_order_hold".into(),
                    });
                }
            }
        }
        values.push(v);
        last_t = Some(t);
    }

    if values.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    Ok((UniformSeries::with_start(values, dt, t0)?, GapReport { gaps }))
}

fn parse_row(rec: &csv::StringRecord) -> std::result::Result<(f64, f64), String> {
    if rec.len() < 2 {
        return Err(format!("expected 2 fields, found {}", rec.len()));
    }
    let t = parse_timestamp(&rec[0]).ok_or_else(|| format!("bad timestamp {:?}", &rec[0]))?;
    let v: f64 = rec[1].parse().map_err(|_| format!("bad value {:?}", &rec[1]))?;
    if !v.is_finite() {
        return Err(format!("non-finite value {:?}", &rec[1]));
    }
    Ok((t, v))
}

/// Epoch seconds from a decimal number or an ISO-8601 stamp.
pub fn parse_timestamp(s: &str) -> Option<f64> {
    if let Ok(x) = s.parse::<f64>() {
        return x.is_finite().then_some(x);
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(epoch_seconds(dt.timestamp(), dt.timestamp_subsec_nanos()));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(n) = NaiveDateTime::parse_from_str(s, fmt) {
            let u = n.and_utc();
            return Some(epoch_seconds(u.timestamp(), u.timestamp_subsec_nanos()));
        }
    }
    None
}

fn epoch_seconds(secs: i64, nanos: u32) -> f64 {
    secs as f64 + nanos as f64 * 1e-9
}

/// Writes `timestamp,value` rows with shortest round-trip float formatting,
/// so reading the file back reproduces the values bit for bit.
pub fn write_series_csv(series: &UniformSeries, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_series(series, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_series(series: &UniformSeries, w: &mut impl Write) -> Result<()> {
    writeln!(w, "timestamp,value")?;
    for (k, v) in series.values().iter().enumerate() {
        writeln!(w, "{},{}", series.time_at(k), v)?;
    }
    Ok(())
}

/// Reg-D and the lag-filtered frequency on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSeries {
    regd: UniformSeries,
    freq: UniformSeries,
}

impl JointSeries {
    pub fn new(regd: UniformSeries, freq: UniformSeries) -> Result<Self> {
        if regd.len() != freq.len() {
            return Err(Error::LengthMismatch(regd.len(), freq.len()));
        }
        if regd.dt() != freq.dt() || regd.t0() != freq.t0() {
            return Err(Error::Usage("joint channels must share dt and t0".into()));
        }
        Ok(Self { regd, freq })
    }

    pub fn regd(&self) -> &UniformSeries {
        &self.regd
    }

    pub fn freq(&self) -> &UniformSeries {
        &self.freq
    }

    pub fn len(&self) -> usize {
        self.regd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regd.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.regd.dt()
    }

    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            regd: self.regd.slice(start, end),
            freq: self.freq.slice(start, end),
        }
    }
}

/// Lag-filters the raw frequency at its native rate, block-averages it onto
/// the Reg-D grid, and trims both channels to their common span.
pub fn build_joint(regd: &UniformSeries, freq_raw: &UniformSeries, tau: f64) -> Result<JointSeries> {
    let dt = regd.dt();
    integer_ratio(freq_raw.dt(), dt)?;
    let filtered = lag_filter(freq_raw, tau)?;
    let freq = resample_mean(&filtered, dt)?;

    let offset = ((regd.start() - freq.start()) / dt).round() as i64;
    let first = (-offset).max(0);
    let last = (regd.len() as i64).min(freq.len() as i64 - offset);
    if last <= first {
        return Err(Error::NoOverlap);
    }
    let (a, b) = (first as usize, last as usize);
    let regd = regd.slice(a, b);
    let fa = (first + offset) as usize;
    let freq = UniformSeries::with_start(
        freq.values()[fa..fa + (b - a)].to_vec(),
        dt,
        regd.t0(),
    )?;
    JointSeries::new(regd, freq)
}
