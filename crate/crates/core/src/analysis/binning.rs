use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::degrees::DegreeCounts;
use crate::error::{invalid, Error, Result};

pub const DEFAULT_THRESHOLD: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    /// Count-weighted mean degree of the bin.
    pub degree: f64,
    /// Average probability per integer degree covered by the bin.
    pub probability: f64,
    pub samples: u64,
    /// Number of integer degrees covered, `last - first + 1`.
    pub span: u64,
}

/// Degree distribution with adaptive bins of at least `threshold` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedDistribution {
    pub bins: Vec<Bin>,
    pub threshold: u64,
}

struct Pending {
    first: usize,
    last: usize,
    samples: u64,
    weighted: f64,
}

impl Pending {
    fn close(self, total: f64) -> Bin {
        let span = (self.last - self.first + 1) as u64;
        Bin {
            degree: self.weighted / self.samples as f64,
            probability: self.samples as f64 / (total * span as f64),
            samples: self.samples,
            span,
        }
    }

    fn absorb(&mut self, k: usize, c: u64) {
        self.last = k;
        self.samples += c;
        self.weighted += k as f64 * c as f64;
    }
}

/// Sweeps degrees in ascending order. A degree with at least `threshold`
/// samples forms its own bin; sparser degrees are pooled with their
/// successors until the pool reaches the threshold. A final pool that never
/// reaches it is merged into the last emitted bin.
pub fn adaptive_bin(counts: &DegreeCounts, threshold: u64) -> Result<BinnedDistribution> {
    if threshold < 1 {
        return Err(invalid("sampling threshold must be at least 1"));
    }
    let total = counts.total_observations as f64;
    let mut closed: Vec<Pending> = Vec::new();
    let mut open: Option<Pending> = None;
    for (&k, &c) in counts.counts.iter().filter(|(_, &c)| c > 0) {
        let pool = open.get_or_insert(Pending {
            first: k,
            last: k,
            samples: 0,
            weighted: 0.0,
        });
        pool.absorb(k, c);
        if pool.samples >= threshold {
            closed.push(open.take().expect("just filled"));
        }
    }
    if let Some(rest) = open {
        match closed.last_mut() {
            Some(prev) => {
                prev.last = rest.last;
                prev.samples += rest.samples;
                prev.weighted += rest.weighted;
            }
            None => closed.push(rest),
        }
    }
    Ok(BinnedDistribution {
        bins: closed.into_iter().map(|p| p.close(total)).collect(),
        threshold,
    })
}

impl BinnedDistribution {
    /// `sum(probability * span)`, i.e. the captured probability mass.
    pub fn mass(&self) -> f64 {
        self.bins.iter().map(|b| b.probability * b.span as f64).sum()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["degree", "probability", "samples", "span"])?;
        for b in &self.bins {
            out.serialize((b.degree, b.probability, b.samples, b.span))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads bins written by [`write_csv`](Self::write_csv). The threshold is
    /// not part of the file and must be supplied.
    pub fn read_csv<R: Read>(r: R, threshold: u64) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["degree", "probability", "samples", "span"] {
            return Err(Error::InvalidParameter(format!(
                "unexpected binned-distribution header {headers:?}"
            )));
        }
        let mut bins = Vec::new();
        for row in rdr.deserialize() {
            let (degree, probability, samples, span): (f64, f64, u64, u64) = row?;
            bins.push(Bin {
                degree,
                probability,
                samples,
                span,
            });
        }
        Ok(Self { bins, threshold })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::Direction;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn counts(pairs: &[(usize, u64)]) -> DegreeCounts {
        let counts: BTreeMap<usize, u64> = pairs.iter().copied().collect();
        DegreeCounts {
            direction: Direction::In,
            total_observations: counts.values().sum(),
            counts,
        }
    }

    #[test]
    fn dense_degrees_stay_singletons() {
        let b = adaptive_bin(&counts(&[(1, 500), (2, 500)]), 200).unwrap();
        assert_eq!(b.bins.len(), 2);
        assert_eq!(b.bins[0].probability, 0.5);
        assert_eq!(b.bins[1].probability, 0.5);
        assert_eq!(b.bins[0].span, 1);
    }

    #[test]
    fn sparse_degrees_pool() {
        let b = adaptive_bin(&counts(&[(1, 150), (2, 150)]), 200).unwrap();
        assert_eq!(b.bins.len(), 1);
        assert_eq!(b.bins[0].degree, 1.5);
        assert_eq!(b.bins[0].probability, 0.5);
        assert_eq!(b.bins[0].span, 2);
    }

    #[test]
    fn leftover_alone_forms_final_bin() {
        let b = adaptive_bin(&counts(&[(1, 199)]), 200).unwrap();
        assert_eq!(b.bins.len(), 1);
        assert_eq!(b.bins[0].samples, 199);
        assert!((b.mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn leftover_merges_into_previous() {
        let b = adaptive_bin(&counts(&[(1, 300), (5, 10), (9, 3)]), 200).unwrap();
        assert_eq!(b.bins.len(), 1);
        let b = adaptive_bin(&counts(&[(1, 300), (2, 250), (5, 10), (9, 3)]), 200).unwrap();
        assert_eq!(b.bins.len(), 2);
        assert_eq!(b.bins[1].samples, 263);
        assert_eq!(b.bins[1].span, 8);
    }

    #[test]
    fn zero_threshold_rejected() {
        assert!(adaptive_bin(&counts(&[(1, 1)]), 0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let b = adaptive_bin(&counts(&[(1, 333), (2, 120), (3, 90), (7, 4)]), 200).unwrap();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"degree,probability,samples,span\n"));
        let back = BinnedDistribution::read_csv(buf.as_slice(), 200).unwrap();
        assert_eq!(back, b);
    }

    proptest! {
        #[test]
        fn binning_invariants(
            raw in proptest::collection::btree_map(0usize..400, 1u64..500, 1..60),
            threshold in 1u64..400,
        ) {
            let pairs: Vec<(usize, u64)> = raw.into_iter().collect();
            let c = counts(&pairs);
            let b = adaptive_bin(&c, threshold).unwrap();
            let total: u64 = b.bins.iter().map(|x| x.samples).sum();
            prop_assert_eq!(total, c.total_observations);
            prop_assert!((b.mass() - 1.0).abs() < 1e-12);
            for w in b.bins.windows(2) {
                prop_assert!(w[0].degree < w[1].degree);
            }
            for bin in &b.bins[..b.bins.len() - 1] {
                prop_assert!(bin.samples >= threshold);
            }
        }
    }
}
