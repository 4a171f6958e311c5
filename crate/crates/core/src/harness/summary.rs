use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use super::sweep::inverse_deltas_by_size;
use crate::analysis::{fit, freedman_diaconis_width, value_histogram, FitForm, FitResult, Histogram};
use crate::error::{Error, Result};

/// File name used for the inverse-gap histogram at the largest size.
pub const HISTOGRAM_FILE: &str = "histogram.csv";

/// Statistics of `1 / delta` at one size. Error rows are only counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (`m - 1` denominator); 0 for one record.
    pub std: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
    pub errors: usize,
    /// Histogram file for this size, set for the largest size only.
    pub histogram: Option<String>,
}

const HEADER: [&str; 9] = ["n", "count", "mean", "std", "stderr", "min", "max", "errors", "histogram"];

/// Per-size statistics, ascending in `n`. Sizes without a successful record
/// are omitted.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SizeSummary>> {
    let by = inverse_deltas_by_size(records);
    if by.is_empty() {
        return Err(Error::EmptyInput("no successful records to summarise".into()));
    }
    let largest = *by.keys().next_back().expect("non-empty");
    Ok(by
        .into_iter()
        .map(|(n, v)| {
            let m = v.len() as f64;
            let mean = v.iter().sum::<f64>() / m;
            let var = if v.len() > 1 {
                v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)
            } else {
                0.0
            };
            let errors = records.iter().filter(|r| r.n == n && !r.is_ok()).count();
            SizeSummary {
                n,
                count: v.len(),
                // clamps the last-ulp drift of the mean of equal values
                mean: mean.clamp(
                    v.iter().copied().fold(f64::INFINITY, f64::min),
                    v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ),
                std: var.sqrt(),
                stderr: var.sqrt() / m.sqrt(),
                min: v.iter().copied().fold(f64::INFINITY, f64::min),
                max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                errors,
                histogram: (n == largest).then(|| HISTOGRAM_FILE.to_string()),
            }
        })
        .collect())
}

/// Histogram of `1 / delta` at the largest size, with Freedman-Diaconis width.
pub fn largest_size_histogram(records: &[RunRecord]) -> Result<(usize, Histogram)> {
    let by = inverse_deltas_by_size(records);
    let (n, v) = by
        .into_iter()
        .next_back()
        .ok_or_else(|| Error::EmptyInput("no successful records to histogram".into()))?;
    Ok((n, value_histogram(&v, freedman_diaconis_width(&v))?))
}

/// Fits all three forms to `(n, mean)`.
pub fn fit_summaries(summaries: &[SizeSummary]) -> Result<Vec<FitResult>> {
    let pts: Vec<(f64, f64)> = summaries.iter().map(|s| (s.n as f64, s.mean)).collect();
    FitForm::ALL.iter().map(|&f| fit(f, &pts)).collect()
}

pub fn write_summary_csv<W: Write>(summaries: &[SizeSummary], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER)?;
    for s in summaries {
        out.serialize((
            s.n,
            s.count,
            s.mean,
            s.std,
            s.stderr,
            s.min,
            s.max,
            s.errors,
            s.histogram.as_deref().unwrap_or(""),
        ))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_summary_csv<R: Read>(r: R) -> Result<Vec<SizeSummary>> {
    let mut rdr = csv::Reader::from_reader(r);
    if rdr.headers()?.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::InvalidParameter("unexpected summary header".into()));
    }
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let (n, count, mean, std, stderr, min, max, errors, histogram): (
            usize,
            usize,
            f64,
            f64,
            f64,
            f64,
            f64,
            usize,
            String,
        ) = row?;
        out.push(SizeSummary {
            n,
            count,
            mean,
            std,
            stderr,
            min,
            max,
            errors,
            histogram: (!histogram.is_empty()).then_some(histogram),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::record::{STATUS_ERROR, STATUS_OK};
    use proptest::prelude::*;

    fn rec(n: usize, id: usize, inv: Option<f64>) -> RunRecord {
        RunRecord {
            model: "copy".into(),
            params: String::new(),
            n,
            instance_id: id,
            seed: 0,
            status: if inv.is_some() { STATUS_OK } else { STATUS_ERROR }.into(),
            error_class: inv.is_none().then(|| "convergence-failure".into()),
            error: None,
            delta: inv.map(|v| 1.0 / v),
            inverse_delta: inv,
            s_star: inv.map(|_| 1.0),
            lambda0: None,
            lambda1: None,
            solver: "dense".into(),
            wall_time: 0.0,
        }
    }

    #[test]
    fn single_record() {
        let s = summarize(&[rec(64, 0, Some(7.5))]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].mean, s[0].std, s[0].count), (7.5, 0.0, 1));
        assert_eq!(s[0].histogram.as_deref(), Some(HISTOGRAM_FILE));
    }

    #[test]
    fn two_records_and_errors() {
        let rs = [rec(64, 0, Some(2.0)), rec(64, 1, Some(4.0)), rec(64, 2, None), rec(128, 0, Some(1.0))];
        let s = summarize(&rs).unwrap();
        assert_eq!(s[0].mean, 3.0);
        assert_eq!(s[0].count, 2);
        assert_eq!(s[0].errors, 1);
        assert!((s[0].std - 2f64.sqrt()).abs() < 1e-15);
        assert!((s[0].stderr - 1.0).abs() < 1e-15);
        assert_eq!(s[0].histogram, None);
        assert_eq!(s[1].n, 128);
        assert!(summarize(&[]).is_err());
        assert!(summarize(&[rec(4, 0, None)]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let rs = [rec(64, 0, Some(2.0)), rec(64, 1, Some(4.5)), rec(128, 0, Some(1.0 / 3.0))];
        let s = summarize(&rs).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(&s, &mut buf).unwrap();
        assert!(buf.starts_with(b"n,count,mean,std,stderr,min,max,errors,histogram\n"));
        assert_eq!(read_summary_csv(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn histogram_at_largest_size() {
        let rs = [rec(64, 0, Some(2.0)), rec(128, 0, Some(3.0)), rec(128, 1, Some(5.0))];
        let (n, h) = largest_size_histogram(&rs).unwrap();
        assert_eq!(n, 128);
        assert_eq!(h.total(), 2);
    }

    proptest! {
        #[test]
        fn mean_within_range(vals in proptest::collection::vec(0.5f64..1e4, 1..40)) {
            let rs: Vec<_> = vals.iter().enumerate().map(|(i, &v)| rec(32, i, Some(v))).collect();
            let s = &summarize(&rs).unwrap()[0];
            prop_assert_eq!(s.count, vals.len());
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
            prop_assert!(s.std >= 0.0);
        }
    }
}
