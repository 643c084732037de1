//! Per-metric summary statistics of a long-format CSV.
//!
//! For values `x_1..x_n`: mean `x̄`, sample standard deviation
//! `s = sqrt(Σ(x_i − x̄)² / (n − 1))`, and the 95% interval
//! `x̄ ± q · s / sqrt(n)` with `q` the 0.975 quantile of Student's t with
//! `n − 1` degrees of freedom when `n < 30` and of the standard normal
//! otherwise. `s` and the interval are undefined (null) for `n = 1`.

use std::collections::BTreeMap;
use std::io::Read;

use serde_json::{json, Value};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SummaryError {
    #[error("no records to summarize")]
    Empty,
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Malformed { row: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    pub std: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub ci95: Option<(f64, f64)>,
}

pub fn summarize_values(values: &[f64]) -> Result<SummaryStats, SummaryError> {
    let n = values.len();
    if n == 0 {
        return Err(SummaryError::Empty);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (std, ci95) = if n > 1 {
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let s = var.sqrt();
        let q = if n < 30 {
            StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("dof > 0").inverse_cdf(0.975)
        } else {
            Normal::standard().inverse_cdf(0.975)
        };
        let half = q * s / (n as f64).sqrt();
        (Some(s), Some((mean - half, mean + half)))
    } else {
        (None, None)
    };
    Ok(SummaryStats {
        count: n,
        mean,
        std,
        min,
        max,
        ci95,
    })
}

/// Key of one summary group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupKey {
    pub experiment: String,
    pub d: u32,
    /// `p` as written in the CSV.
    pub p: String,
    pub metric: String,
}

/// Groups CSV rows by `(experiment, d, p, metric)` and summarizes each.
pub fn summarize_csv<R: Read>(input: R) -> Result<Vec<(GroupKey, SummaryStats)>, SummaryError> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| SummaryError::Malformed {
            row: 1,
            message: format!("missing column '{name}'"),
        })
    };
    let (ce, cd, cp, cm, cv) = (col("experiment")?, col("d")?, col("p")?, col("metric")?, col("value")?);
    let mut groups: BTreeMap<GroupKey, Vec<f64>> = BTreeMap::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let bad = |message: String| SummaryError::Malformed { row: i + 2, message };
        let d = row[cd].parse().map_err(|e| bad(format!("d: {e}")))?;
        let value: f64 = row[cv].parse().map_err(|e| bad(format!("value: {e}")))?;
        groups
            .entry(GroupKey {
                experiment: row[ce].to_string(),
                d,
                p: row[cp].to_string(),
                metric: row[cm].to_string(),
            })
            .or_default()
            .push(value);
    }
    if groups.is_empty() {
        return Err(SummaryError::Empty);
    }
    groups
        .into_iter()
        .map(|(k, v)| Ok((k, summarize_values(&v)?)))
        .collect()
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn to_json(groups: &[(GroupKey, SummaryStats)]) -> Value {
    Value::Array(
        groups
            .iter()
            .map(|(k, s)| {
                json!({
                    "experiment": k.experiment,
                    "d": k.d,
                    "p": k.p,
                    "metric": k.metric,
                    "count": s.count,
                    "mean": number(s.mean),
                    "std": s.std.map_or(Value::Null, number),
                    "min": number(s.min),
                    "max": number(s.max),
                    "ci95_low": s.ci95.map_or(Value::Null, |c| number(c.0)),
                    "ci95_high": s.ci95.map_or(Value::Null, |c| number(c.1)),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_record_has_no_spread() {
        let s = summarize_values(&[3.5]).unwrap();
        assert_eq!((s.mean, s.std, s.ci95), (3.5, None, None));
        assert_eq!(to_json(&[(
            GroupKey {
                experiment: "census".into(),
                d: 8,
                p: "0".into(),
                metric: "m".into()
            },
            s
        )])[0]["std"], Value::Null);
    }

    #[test]
    fn constant_metric_has_zero_std() {
        let s = summarize_values(&[2.0; 7]).unwrap();
        assert_eq!(s.std, Some(0.0));
        assert_eq!(s.ci95, Some((2.0, 2.0)));
    }

    #[test]
    fn hand_computed_example() {
        // Mean 5, squared deviations 9+1+1+9 = 20, s² = 20/3.
        let s = summarize_values(&[2.0, 4.0, 6.0, 8.0]).unwrap();
        assert_eq!(s.mean, 5.0);
        assert!((s.std.unwrap() - (20.0f64 / 3.0).sqrt()).abs() < 1e-12);
        // t_{0.975, 3} = 3.182446305284263.
        let half = 3.182446305284263 * (20.0f64 / 3.0).sqrt() / 2.0;
        let (lo, hi) = s.ci95.unwrap();
        assert!((lo - (5.0 - half)).abs() < 1e-9 && (hi - (5.0 + half)).abs() < 1e-9);
        assert_eq!((s.min, s.max), (2.0, 8.0));
    }

    #[test]
    fn large_samples_use_the_normal_quantile() {
        let v: Vec<f64> = (0..40).map(|i| (i % 2) as f64).collect();
        let s = summarize_values(&v).unwrap();
        let half = 1.959963984540054 * s.std.unwrap() / 40f64.sqrt();
        assert!((s.ci95.unwrap().1 - (0.5 + half)).abs() < 1e-9);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(summarize_values(&[]), Err(SummaryError::Empty)));
        let header = "experiment,d,p,q2,trial,seed,metric,value,wall_ms,workers\n";
        assert!(matches!(summarize_csv(header.as_bytes()), Err(SummaryError::Empty)));
    }

    #[test]
    fn groups_by_dimension_and_metric() {
        let csv = "experiment,d,p,q2,trial,seed,metric,value,wall_ms,workers\n\
                   census,8,0.25,,0,1,a,1,,2\n\
                   census,8,0.25,,1,2,a,3,,2\n\
                   census,10,0.2,,0,3,a,5,,2\n\
                   census,8,0.25,,0,1,b,7,,2\n";
        let g = summarize_csv(csv.as_bytes()).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!((g[0].0.d, g[0].0.metric.as_str(), g[0].1.mean), (8, "a", 2.0));
        assert_eq!(g[2].0.d, 10);
        let bad = "experiment,d,p,q2,trial,seed,metric,value,wall_ms,workers\ncensus,x,0,,0,0,a,1,,1\n";
        assert!(matches!(summarize_csv(bad.as_bytes()), Err(SummaryError::Malformed { row: 2, .. })));
    }
}
