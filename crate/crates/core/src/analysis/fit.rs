//! Scaling-law fits by ordinary least squares in transformed coordinates.
//!
//! | form     | model              | regression            |
//! |----------|--------------------|-----------------------|
//! | semilog  | `y = a ln n + b`   | `y` on `ln n`         |
//! | powerlaw | `y = a n^b`        | `ln y` on `ln n`      |
//! | polylog  | `y = a (ln n)^b`   | `ln y` on `ln ln n`   |

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::binning::BinnedDistribution;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitForm {
    Semilog,
    Powerlaw,
    Polylog,
}

impl FitForm {
    pub const ALL: [FitForm; 3] = [FitForm::Semilog, FitForm::Powerlaw, FitForm::Polylog];

    pub fn as_str(&self) -> &'static str {
        match self {
            FitForm::Semilog => "semilog",
            FitForm::Powerlaw => "powerlaw",
            FitForm::Polylog => "polylog",
        }
    }

    /// Evaluates the fitted curve at `n`.
    pub fn eval(&self, a: f64, b: f64, n: f64) -> f64 {
        match self {
            FitForm::Semilog => a * n.ln() + b,
            FitForm::Powerlaw => a * n.powf(b),
            FitForm::Polylog => a * n.ln().powf(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub form: FitForm,
    pub a: f64,
    pub b: f64,
    /// Root-mean-square residual in the regression's own coordinates.
    pub residual: f64,
    pub points: usize,
}

impl FitResult {
    pub fn eval(&self, n: f64) -> f64 {
        self.form.eval(self.a, self.b, n)
    }
}

struct Line {
    slope: f64,
    intercept: f64,
    rms: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Result<Line> {
    let m = xs.len();
    if m < 2 {
        return Err(invalid(format!("need at least 2 points, got {m}")));
    }
    let mx = xs.iter().sum::<f64>() / m as f64;
    let my = ys.iter().sum::<f64>() / m as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * m as f64 {
        return Err(invalid("abscissae are all equal; slope undefined"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    Ok(Line {
        slope,
        intercept,
        rms: (sse / m as f64).sqrt(),
    })
}

fn domain(msg: String) -> Error {
    Error::UndefinedDomain(msg)
}

/// `y = a ln n + b`.
pub fn fit_semilog(points: &[(f64, f64)]) -> Result<FitResult> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(n, y) in points {
        if !(n > 1.0) {
            return Err(domain(format!("semilog fit needs n > 1, got {n}")));
        }
        xs.push(n.ln());
        ys.push(y);
    }
    let line = least_squares(&xs, &ys)?;
    Ok(FitResult {
        form: FitForm::Semilog,
        a: line.slope,
        b: line.intercept,
        residual: line.rms,
        points: points.len(),
    })
}

/// `y = a n^b`.
pub fn fit_powerlaw(points: &[(f64, f64)]) -> Result<FitResult> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(n, y) in points {
        if !(n > 1.0 && y > 0.0) {
            return Err(domain(format!("power-law fit needs n > 1 and y > 0, got ({n}, {y})")));
        }
        xs.push(n.ln());
        ys.push(y.ln());
    }
    let line = least_squares(&xs, &ys)?;
    Ok(FitResult {
        form: FitForm::Powerlaw,
        a: line.intercept.exp(),
        b: line.slope,
        residual: line.rms,
        points: points.len(),
    })
}

/// `y = a (ln n)^b`.
pub fn fit_polylog(points: &[(f64, f64)]) -> Result<FitResult> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(n, y) in points {
        if !(n > std::f64::consts::E && y > 0.0) {
            return Err(domain(format!("polylog fit needs n > e and y > 0, got ({n}, {y})")));
        }
        xs.push(n.ln().ln());
        ys.push(y.ln());
    }
    let line = least_squares(&xs, &ys)?;
    Ok(FitResult {
        form: FitForm::Polylog,
        a: line.intercept.exp(),
        b: line.slope,
        residual: line.rms,
        points: points.len(),
    })
}

pub fn fit(form: FitForm, points: &[(f64, f64)]) -> Result<FitResult> {
    match form {
        FitForm::Semilog => fit_semilog(points),
        FitForm::Powerlaw => fit_powerlaw(points),
        FitForm::Polylog => fit_polylog(points),
    }
}

/// Tail exponent `gamma` from the log-log slope of bins with mean degree at
/// least `k_min`.
pub fn tail_exponent(binned: &BinnedDistribution, k_min: f64) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = binned
        .bins
        .iter()
        .filter(|b| b.degree >= k_min && b.degree > 0.0 && b.probability > 0.0)
        .map(|b| (b.degree.ln(), b.probability.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(invalid(format!(
            "need at least 3 bins at degree >= {k_min}, found {}",
            xs.len()
        )));
    }
    Ok(-least_squares(&xs, &ys)?.slope)
}

pub fn write_fits_csv<W: Write>(fits: &[FitResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["form", "a", "b", "residual", "points"])?;
    for f in fits {
        out.serialize((f.form.as_str(), f.a, f.b, f.residual, f.points))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_fits_csv<R: Read>(r: R) -> Result<Vec<FitResult>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut fits = Vec::new();
    for row in rdr.deserialize() {
        let (form, a, b, residual, points): (FitForm, f64, f64, f64, usize) = row?;
        fits.push(FitResult {
            form,
            a,
            b,
            residual,
            points,
        });
    }
    Ok(fits)
}
