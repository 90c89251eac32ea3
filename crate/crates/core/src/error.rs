use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the analysis, modeling, and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sample interval {0} (must be finite and > 0)")]
    InvalidSampleInterval(f64),
    #[error("non-finite value at index {0}")]
    NonFiniteValue(usize),
    #[error("invalid saturation bounds [{lo}, {hi}]")]
    InvalidBounds { lo: f64, hi: f64 },
    #[error("series too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("lag filter time constant must be > 0, got {0}")]
    NonPositiveTau(f64),
    #[error("target interval {new_dt} is not an integer multiple of {dt}")]
    NonIntegerRatio { dt: f64, new_dt: f64 },
    #[error("lead {lead} out of range for series of length {len}")]
    LeadOutOfRange { lead: usize, len: usize },

    #[error("cannot read {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("value {value} at line {line} outside physical range [{lo}, {hi}]")]
    ValueOutOfPhysicalRange { line: usize, value: f64, lo: f64, hi: f64 },
    #[error("timestamp at line {line} does not advance")]
    NonMonotonicTimestamp { line: usize },
    #[error("gap of {length} samples starting at index {start} exceeds the fill limit")]
    GapTooLarge { start: usize, length: usize },
    #[error("series spans do not overlap")]
    NoOverlap,

    #[error("degenerate value range (max == min)")]
    DegenerateRange,
    #[error("segment length {segment_len} invalid for series of length {len}")]
    SegmentTooLong { segment_len: usize, len: usize },
    #[error("invalid Welch parameters: {0}")]
    InvalidWelch(String),
    #[error("lag {max_lag} too large for series of length {len}")]
    LagTooLarge { max_lag: usize, len: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("zero variance in correlation window")]
    ZeroVariance,

    #[error("cutoff {omega_n} rad/s is not below Nyquist {nyquist} rad/s")]
    CutoffAboveNyquist { omega_n: f64, nyquist: f64 },
    #[error("invalid synthesis configuration: {0}")]
    InvalidConfig(String),
    #[error("reference series has zero standard deviation")]
    ZeroReferenceStd,

    #[error("singular regression")]
    SingularRegression,
    #[error("history too short: need {needed} samples, got {got}")]
    HistoryTooShort { needed: usize, got: usize },
    #[error("actual slopes have zero range")]
    DegenerateSlopeRange,
    #[error("model error: {0}")]
    Model(String),

    #[error("usage: {0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

/// Coarse error classes, mapped onto process exit codes by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numeric,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numeric => 4,
        }
    }
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            InvalidSampleInterval(_) => "InvalidSampleInterval",
            NonFiniteValue(_) => "NonFiniteValue",
            InvalidBounds { .. } => "InvalidBounds",
            TooShort { .. } => "TooShort",
            NonPositiveTau(_) => "NonPositiveTau",
            NonIntegerRatio { .. } => "NonIntegerRatio",
            LeadOutOfRange { .. } => "LeadOutOfRange",
            Unreadable { .. } => "Unreadable",
            MalformedRow { .. } => "MalformedRow",
            ValueOutOfPhysicalRange { .. } => "ValueOutOfPhysicalRange",
            NonMonotonicTimestamp { .. } => "NonMonotonicTimestamp",
            GapTooLarge { .. } => "GapTooLarge",
            NoOverlap => "NoOverlap",
            DegenerateRange => "DegenerateRange",
            SegmentTooLong { .. } => "SegmentTooLong",
            InvalidWelch(_) => "InvalidWelch",
            LagTooLarge { .. } => "LagTooLarge",
            LengthMismatch(..) => "LengthMismatch",
            ZeroVariance => "ZeroVariance",
            CutoffAboveNyquist { .. } => "CutoffAboveNyquist",
            InvalidConfig(_) => "InvalidConfig",
            ZeroReferenceStd => "ZeroReferenceStd",
            SingularRegression => "SingularRegression",
            HistoryTooShort { .. } => "HistoryTooShort",
            DegenerateSlopeRange => "DegenerateSlopeRange",
            Model(_) => "Model",
            Usage(_) => "Usage",
            Io(_) => "Io",
            Json(_) => "Json",
            Csv(_) => "Csv",
        }
    }

    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Usage(_) | InvalidConfig(_) => ErrorClass::Usage,
            Unreadable { .. }
            | MalformedRow { .. }
            | ValueOutOfPhysicalRange { .. }
            | NonMonotonicTimestamp { .. }
            | GapTooLarge { .. }
            | NoOverlap
            | NonFiniteValue(_)
            | TooShort { .. }
            | LengthMismatch(..)
            | Io(_)
            | Json(_)
            | Csv(_) => ErrorClass::Data,
            _ => ErrorClass::Numeric,
        }
    }
}
