use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Fixed-width histogram starting at the smallest value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub start: f64,
    pub width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Left edge of bin `i`.
    pub fn edge(&self, i: usize) -> f64 {
        self.start + i as f64 * self.width
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `lower,upper,count` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["lower", "upper", "count"])?;
        for (i, c) in self.counts.iter().enumerate() {
            out.serialize((self.edge(i), self.edge(i + 1), c))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Counts `values` in bins `[min + i w, min + (i + 1) w)`; the maximum lands
/// in the last bin.
pub fn value_histogram(values: &[f64], bin_width: f64) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyInput("no values to histogram".into()));
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(invalid(format!("bin width must be positive, got {bin_width}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(invalid("histogram values must be finite"));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = ((max - min) / bin_width).floor() as usize + 1;
    let mut counts = vec![0u64; bins];
    for &v in values {
        let i = (((v - min) / bin_width).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    Ok(Histogram {
        start: min,
        width: bin_width,
        counts,
    })
}

/// `2 IQR m^(-1/3)`; falls back to 1 when the spread is zero.
pub fn freedman_diaconis_width(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 1.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    };
    let iqr = q(0.75) - q(0.25);
    let width = 2.0 * iqr * (v.len() as f64).powf(-1.0 / 3.0);
    if width > 0.0 {
        width
    } else {
        let range = v[v.len() - 1] - v[0];
        if range > 0.0 {
            range / 10.0
        } else {
            1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value() {
        let h = value_histogram(&[3.5], 0.1).unwrap();
        assert_eq!(h.counts, vec![1]);
        assert_eq!(h.start, 3.5);
    }

    #[test]
    fn two_by_two() {
        let h = value_histogram(&[1.0, 1.0, 2.0, 2.0], 1.0).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert_eq!(h.edge(1), 2.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(value_histogram(&[], 1.0).is_err());
        assert!(value_histogram(&[1.0], 0.0).is_err());
        assert!(value_histogram(&[1.0], -1.0).is_err());
        assert!(value_histogram(&[f64::NAN], 1.0).is_err());
    }

    #[test]
    fn fd_width() {
        let v: Vec<f64> = (0..=8).map(|x| x as f64).collect();
        // IQR = 4, m = 9
        assert!((freedman_diaconis_width(&v) - 8.0 / 9f64.cbrt()).abs() < 1e-12);
        assert_eq!(freedman_diaconis_width(&[2.0, 2.0]), 1.0);
    }

    #[test]
    fn every_value_counted() {
        let v: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1013) as f64 / 3.0).collect();
        let h = value_histogram(&v, freedman_diaconis_width(&v)).unwrap();
        assert_eq!(h.total(), 1000);
    }
}
