//! Pegging (saturation at the ±1 rails) statistics grouped by calendar bucket.
//!
//! Buckets are cyclic: minute of the hour, hour of the day, day of the week,
//! and month of the year, evaluated in UTC shifted by an optional offset.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::series::UniformSeries;

pub const DEFAULT_PEG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupBy {
    Minute,
    Hour,
    Day,
    Month,
    All,
}

impl GroupBy {
    pub const ALL_KINDS: [GroupBy; 5] = [
        GroupBy::Minute,
        GroupBy::Hour,
        GroupBy::Day,
        GroupBy::Month,
        GroupBy::All,
    ];

    fn bucket(self, epoch_secs: f64) -> u32 {
        if self == GroupBy::All {
            return 0;
        }
        let t = DateTime::from_timestamp(epoch_secs.floor() as i64, 0)
            .expect("timestamp within chrono range");
        match self {
            GroupBy::Minute => t.minute(),
            GroupBy::Hour => t.hour(),
            GroupBy::Day => t.weekday().num_days_from_monday(),
            GroupBy::Month => t.month0(),
            GroupBy::All => 0,
        }
    }

    fn label(self, bucket: u32) -> String {
        const DAYS: [&str; 7] = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"];
        const MONTHS: [&str; 12] = [
            "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
        ];
        match self {
            GroupBy::Minute | GroupBy::Hour => format!("{bucket:02}"),
            GroupBy::Day => DAYS[bucket as usize].to_string(),
            GroupBy::Month => MONTHS[bucket as usize].to_string(),
            GroupBy::All => "all".to_string(),
        }
    }
}

impl fmt::Display for GroupBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupBy::Minute => "minute",
            GroupBy::Hour => "hour",
            GroupBy::Day => "day",
            GroupBy::Month => "month",
            GroupBy::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "minute" => Ok(GroupBy::Minute),
            "hour" => Ok(GroupBy::Hour),
            "day" => Ok(GroupBy::Day),
            "month" => Ok(GroupBy::Month),
            "all" => Ok(GroupBy::All),
            other => Err(Error::Usage(format!("unknown group_by {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PegOptions {
    /// Samples with `|x| >= 1 - tol` count as pegged.
    pub tol: f64,
    pub utc_offset_minutes: i32,
}

impl Default for PegOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_PEG_TOL,
            utc_offset_minutes: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeggingAmount {
    pub group_key: String,
    pub n_samples: u64,
    pub n_pegged: u64,
    pub amount_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeggingDurations {
    pub group_key: String,
    pub n_runs: u64,
    pub pegged_samples: u64,
    /// Seconds.
    pub max: f64,
    pub mean: f64,
    pub p95: f64,
}

/// +1 for the upper rail, -1 for the lower, 0 otherwise.
fn rail(v: f64, tol: f64) -> i8 {
    if v >= 1.0 - tol {
        1
    } else if v <= -1.0 + tol {
        -1
    } else {
        0
    }
}

fn bucket_of(x: &UniformSeries, k: usize, group_by: GroupBy, opts: &PegOptions) -> u32 {
    group_by.bucket(x.time_at(k) + opts.utc_offset_minutes as f64 * 60.0)
}

pub fn pegging_amount(x: &UniformSeries, group_by: GroupBy, opts: &PegOptions) -> Vec<PeggingAmount> {
    let mut acc: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    for (k, &v) in x.values().iter().enumerate() {
        let e = acc.entry(bucket_of(x, k, group_by, opts)).or_default();
        e.0 += 1;
        if rail(v, opts.tol) != 0 {
            e.1 += 1;
        }
    }
    acc.into_iter()
        .map(|(b, (n, p))| PeggingAmount {
            group_key: group_by.label(b),
            n_samples: n,
            n_pegged: p,
            amount_pct: 100.0 * p as f64 / n as f64,
        })
        .collect()
}

/// Run lengths of pegged stretches. A run stays on one rail and is credited
/// whole to the bucket of its first sample.
pub fn pegging_durations(x: &UniformSeries, group_by: GroupBy, opts: &PegOptions) -> Vec<PeggingDurations> {
    let mut runs: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
    let v = x.values();
    let mut k = 0;
    while k < v.len() {
        let r = rail(v[k], opts.tol);
        if r == 0 {
            runs.entry(bucket_of(x, k, group_by, opts)).or_default();
            k += 1;
            continue;
        }
        let start = k;
        while k < v.len() && rail(v[k], opts.tol) == r {
            k += 1;
        }
        runs.entry(bucket_of(x, start, group_by, opts))
            .or_default()
            .push((k - start) as u64);
    }
    let dt = x.dt();
    runs.into_iter()
        .map(|(b, mut lens)| {
            lens.sort_unstable();
            let pegged: u64 = lens.iter().sum();
            let (max, mean, p95) = if lens.is_empty() {
                (0.0, 0.0, 0.0)
            } else {
                let secs: Vec<f64> = lens.iter().map(|&l| l as f64 * dt).collect();
                (
                    *secs.last().unwrap(),
                    pegged as f64 * dt / lens.len() as f64,
                    percentile_sorted(&secs, 95.0),
                )
            };
            PeggingDurations {
                group_key: group_by.label(b),
                n_runs: lens.len() as u64,
                pegged_samples: pegged,
                max,
                mean,
                p95,
            }
        })
        .collect()
}

/// Linear-interpolation percentile of an ascending slice.
fn percentile_sorted(v: &[f64], pct: f64) -> f64 {
    let pos = pct / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[f64], dt: f64, t0: f64) -> UniformSeries {
        UniformSeries::with_start(v.to_vec(), dt, Some(t0)).unwrap()
    }

    #[test]
    fn amount_extremes() {
        let o = PegOptions::default();
        let a = pegging_amount(&s(&[1.0, -1.0, 1.0], 2.0, 0.0), GroupBy::All, &o);
        assert_eq!(a[0].amount_pct, 100.0);
        let a = pegging_amount(&s(&[0.5, -0.99, 0.0], 2.0, 0.0), GroupBy::All, &o);
        assert_eq!(a[0].amount_pct, 0.0);
        let a = pegging_amount(&s(&[0.9999995, 0.2], 2.0, 0.0), GroupBy::All, &o);
        assert_eq!(a[0].n_pegged, 1);
    }

    #[test]
    fn duration_example() {
        let d = pegging_durations(
            &s(&[1.0, 1.0, 1.0, 0.0, -1.0, -1.0], 2.0, 0.0),
            GroupBy::All,
            &PegOptions::default(),
        );
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].n_runs, 2);
        assert_eq!(d[0].max, 6.0);
        assert_eq!(d[0].mean, 5.0);
        assert!(d[0].p95 <= d[0].max && d[0].p95 >= 4.0);
    }

    #[test]
    fn no_pegging_reports_zeros() {
        let d = pegging_durations(&s(&[0.1, 0.2], 2.0, 0.0), GroupBy::All, &PegOptions::default());
        assert_eq!(d[0].n_runs, 0);
        assert_eq!((d[0].max, d[0].mean, d[0].p95), (0.0, 0.0, 0.0));
    }

    #[test]
    fn runs_split_on_rail_change_and_attribute_to_first_bucket() {
        // Starts at 00:00:58 UTC, dt = 2 s: samples 0 and 1 fall in minutes 0 and 1.
        let x = s(&[1.0, 1.0, 1.0, -1.0, 0.0], 2.0, 58.0);
        let d = pegging_durations(&x, GroupBy::Minute, &PegOptions::default());
        let m0 = d.iter().find(|r| r.group_key == "00").unwrap();
        let m1 = d.iter().find(|r| r.group_key == "01").unwrap();
        assert_eq!((m0.n_runs, m0.max), (1, 6.0));
        assert_eq!((m1.n_runs, m1.max), (1, 2.0));
    }

    #[test]
    fn calendar_keys() {
        // 2019-06-20 13:05:00 UTC is a Thursday.
        let t = 1_561_035_900.0;
        let x = s(&[1.0], 2.0, t);
        let o = PegOptions::default();
        assert_eq!(pegging_amount(&x, GroupBy::Minute, &o)[0].group_key, "05");
        assert_eq!(pegging_amount(&x, GroupBy::Hour, &o)[0].group_key, "13");
        assert_eq!(pegging_amount(&x, GroupBy::Day, &o)[0].group_key, "Thu");
        assert_eq!(pegging_amount(&x, GroupBy::Month, &o)[0].group_key, "Jun");
        let shifted = PegOptions {
            utc_offset_minutes: -14 * 60,
            ..o
        };
        assert_eq!(pegging_amount(&x, GroupBy::Hour, &shifted)[0].group_key, "23");
        assert_eq!(pegging_amount(&x, GroupBy::Day, &shifted)[0].group_key, "Wed");
    }

    fn arb_regd() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(
            prop_oneof![Just(1.0), Just(-1.0), -0.99f64..0.99],
            1..400,
        )
    }

    proptest! {
        #[test]
        fn grouped_amounts_recombine(v in arb_regd(), g in 0usize..4) {
            let x = s(&v, 2.0, 1_546_300_000.0);
            let o = PegOptions::default();
            let whole = &pegging_amount(&x, GroupBy::All, &o)[0];
            let parts = pegging_amount(&x, GroupBy::ALL_KINDS[g], &o);
            let n: u64 = parts.iter().map(|p| p.n_samples).sum();
            let p: u64 = parts.iter().map(|p| p.n_pegged).sum();
            prop_assert_eq!(n, whole.n_samples);
            prop_assert_eq!(p, whole.n_pegged);
            let weighted: f64 = parts.iter().map(|p| p.amount_pct * p.n_samples as f64).sum::<f64>() / n as f64;
            prop_assert!((weighted - whole.amount_pct).abs() < 1e-9);
        }

        #[test]
        fn run_totals_match_pegged_time(v in arb_regd(), g in 0usize..5) {
            let x = s(&v, 2.0, 1_546_300_000.0);
            let o = PegOptions::default();
            let d = pegging_durations(&x, GroupBy::ALL_KINDS[g], &o);
            let total: f64 = d.iter().map(|r| r.n_runs as f64 * r.mean).sum();
            let pegged = pegging_amount(&x, GroupBy::All, &o)[0].n_pegged;
            prop_assert!((total - pegged as f64 * 2.0).abs() < 1e-9);
            for r in &d {
                prop_assert!(r.max >= r.p95 && r.p95 >= 0.0 && r.mean >= 0.0);
                prop_assert!(r.max >= r.mean);
            }
        }
    }
}
