use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::summary::{write_summary_csv, SizeSummary};
use crate::analysis::{write_fits_csv, FitForm, FitResult};
use crate::error::Result;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const FITS_FILE: &str = "fits.csv";
pub const PLOT_FILE: &str = "scaling.svg";

/// Writes `summary.csv`, `fits.csv` and, with `plot`, `scaling.svg` into
/// `dir`. Output depends only on the inputs.
pub fn emit_outputs(
    dir: &Path,
    summaries: &[SizeSummary],
    fits: &[FitResult],
    plot: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let p = dir.join(SUMMARY_FILE);
    let mut buf = Vec::new();
    write_summary_csv(summaries, &mut buf)?;
    fs::write(&p, buf)?;
    written.push(p);

    let p = dir.join(FITS_FILE);
    let mut buf = Vec::new();
    write_fits_csv(fits, &mut buf)?;
    fs::write(&p, buf)?;
    written.push(p);

    if plot {
        let p = dir.join(PLOT_FILE);
        fs::write(&p, render_svg(summaries, fits))?;
        written.push(p);
    }
    Ok(written)
}

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN: f64 = 56.0;

fn color(form: FitForm) -> &'static str {
    match form {
        FitForm::Semilog => "#1f77b4",
        FitForm::Powerlaw => "#d62728",
        FitForm::Polylog => "#2ca02c",
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn t(&self, v: f64) -> f64 {
        if self.log {
            v.ln()
        } else {
            v
        }
    }

    fn frac(&self, v: f64) -> f64 {
        let (a, b) = (self.t(self.lo), self.t(self.hi));
        if b > a {
            (self.t(v) - a) / (b - a)
        } else {
            0.5
        }
    }
}

fn ticks(axis: &Axis) -> Vec<f64> {
    if axis.log {
        let (a, b) = (axis.lo.log10().floor() as i32, axis.hi.log10().ceil() as i32);
        (a..=b)
            .map(|e| 10f64.powi(e))
            .filter(|&v| v >= axis.lo * 0.999 && v <= axis.hi * 1.001)
            .collect()
    } else {
        (0..=4).map(|i| axis.lo + (axis.hi - axis.lo) * i as f64 / 4.0).collect()
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

fn panel(
    svg: &mut String,
    x0: f64,
    title: &str,
    summaries: &[SizeSummary],
    fits: &[FitResult],
    log_y: bool,
) {
    let n_lo = summaries.first().map_or(2.0, |s| s.n as f64);
    let n_hi = summaries.last().map_or(4.0, |s| s.n as f64).max(n_lo * 1.01);
    let xa = Axis {
        lo: n_lo,
        hi: n_hi,
        log: true,
    };
    let samples: Vec<f64> = (0..=64).map(|i| (n_lo.ln() + (n_hi / n_lo).ln() * i as f64 / 64.0).exp()).collect();

    let mut ys: Vec<f64> = summaries
        .iter()
        .flat_map(|s| [s.mean - s.stderr, s.mean + s.stderr])
        .collect();
    for f in fits {
        ys.extend(samples.iter().map(|&n| f.eval(n)));
    }
    ys.retain(|y| y.is_finite() && (!log_y || *y > 0.0));
    let (mut y_lo, mut y_hi) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (1.0, 10.0);
    }
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let ya = Axis {
        lo: y_lo,
        hi: y_hi,
        log: log_y,
    };

    let px = |n: f64| x0 + MARGIN + xa.frac(n) * (PANEL_W - 1.5 * MARGIN);
    let py = |y: f64| PANEL_H - MARGIN - ya.frac(y) * (PANEL_H - 1.6 * MARGIN);

    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{title}</text>"##,
        x0 + PANEL_W / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000"/>"##,
        x0 + MARGIN,
        0.6 * MARGIN,
        PANEL_W - 1.5 * MARGIN,
        PANEL_H - 1.6 * MARGIN
    );
    for s in summaries {
        let x = px(s.n as f64);
        let _ = writeln!(
            svg,
            r##"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"##,
            PANEL_H - MARGIN + 14.0,
            s.n
        );
    }
    for y in ticks(&ya) {
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{}</text>"##,
            x0 + MARGIN - 4.0,
            py(y) + 3.0,
            label(y)
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">n</text>"##,
        x0 + MARGIN + (PANEL_W - 1.5 * MARGIN) / 2.0,
        PANEL_H - 12.0
    );

    for f in fits {
        let pts: Vec<String> = samples
            .iter()
            .filter_map(|&n| {
                let y = f.eval(n);
                (y.is_finite() && (!log_y || y > 0.0)).then(|| format!("{:.2},{:.2}", px(n), py(y)))
            })
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"##,
            color(f.form),
            pts.join(" ")
        );
    }
    for s in summaries {
        let (x, y) = (px(s.n as f64), py(s.mean));
        if s.stderr > 0.0 && (!log_y || s.mean - s.stderr > 0.0) {
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/>"##,
                py(s.mean - s.stderr),
                py(s.mean + s.stderr)
            );
        }
        let _ = writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#000"/>"##);
    }
}

/// Two panels: `1/delta` against `n` with logarithmic `n` (left) and with
/// both axes logarithmic (right), each with the means, standard-error bars
/// and every fitted curve.
pub fn render_svg(summaries: &[SizeSummary], fits: &[FitResult]) -> String {
    let width = 2.0 * PANEL_W;
    let height = PANEL_H + 20.0 * fits.len() as f64 + 10.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    panel(&mut svg, 0.0, "1/δ, semilog", summaries, fits, false);
    panel(&mut svg, PANEL_W, "1/δ, log-log", summaries, fits, true);
    for (i, f) in fits.iter().enumerate() {
        let y = PANEL_H + 14.0 + 20.0 * i as f64;
        let formula = match f.form {
            FitForm::Semilog => format!("{} ln n + {}", label(f.a), label(f.b)),
            FitForm::Powerlaw => format!("{} n^{}", label(f.a), label(f.b)),
            FitForm::Polylog => format!("{} (ln n)^{}", label(f.a), label(f.b)),
        };
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/>"##,
            MARGIN,
            y - 4.0,
            MARGIN + 24.0,
            y - 4.0,
            color(f.form)
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{y:.2}" font-size="11">{}: {formula} (rms {})</text>"##,
            MARGIN + 30.0,
            f.form.as_str(),
            label(f.residual)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{read_fits_csv, FitForm};
    use crate::harness::summary::{fit_summaries, read_summary_csv};

    fn summaries() -> Vec<SizeSummary> {
        [64usize, 128, 256, 512]
            .iter()
            .map(|&n| {
                let m = 8.0 * (n as f64).powf(0.4);
                SizeSummary {
                    n,
                    count: 10,
                    mean: m,
                    std: 1.0,
                    stderr: 0.3,
                    min: m - 2.0,
                    max: m + 2.0,
                    errors: 0,
                    histogram: (n == 512).then(|| "histogram.csv".into()),
                }
            })
            .collect()
    }

    #[test]
    fn empty_fits_give_header_only() {
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(dir.path(), &[], &[], false).unwrap();
        assert_eq!(
            fs::read_to_string(dir.path().join(FITS_FILE)).unwrap(),
            "form,a,b,residual,points\n"
        );
        assert_eq!(
            fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap(),
            "n,count,mean,std,stderr,min,max,errors,histogram\n"
        );
        assert!(!dir.path().join(PLOT_FILE).exists());
    }

    #[test]
    fn round_trip_and_byte_stable() {
        let s = summaries();
        let fits = fit_summaries(&s).unwrap();
        assert_eq!(fits.len(), 3);
        let pl = fits.iter().find(|f| f.form == FitForm::Powerlaw).unwrap();
        assert!((pl.b - 0.4).abs() < 1e-12 && (pl.a - 8.0).abs() < 1e-10);

        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        emit_outputs(a.path(), &s, &fits, true).unwrap();
        emit_outputs(b.path(), &s, &fits, true).unwrap();
        for f in [SUMMARY_FILE, FITS_FILE, PLOT_FILE] {
            assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
        }
        let back = read_summary_csv(fs::File::open(a.path().join(SUMMARY_FILE)).unwrap()).unwrap();
        assert_eq!(back, s);
        let fits_back = read_fits_csv(fs::File::open(a.path().join(FITS_FILE)).unwrap()).unwrap();
        assert_eq!(fits_back, fits);

        let svg = fs::read_to_string(a.path().join(PLOT_FILE)).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 6);
        assert_eq!(svg.matches("<circle").count(), 8);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn plot_survives_degenerate_input() {
        let mut s = summaries();
        s.truncate(1);
        let svg = render_svg(&s, &[]);
        assert!(!svg.contains("NaN"));
        assert!(render_svg(&[], &[]).ends_with("</svg>\n"));
    }
}
