use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{Direction, MultiDigraph, SimpleDigraph};

/// Pooled degree histogram: degree -> number of (graph, vertex) observations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCounts {
    pub direction: Direction,
    pub counts: BTreeMap<usize, u64>,
    pub total_observations: u64,
}

impl DegreeCounts {
    pub fn new(direction: Direction) -> Self {
        Self {
            direction,
            counts: BTreeMap::new(),
            total_observations: 0,
        }
    }

    pub fn add_graph(&mut self, g: &SimpleDigraph) {
        let degrees: Vec<usize> = match self.direction {
            Direction::In => g.in_degrees(),
            Direction::Out => g.out_degrees(),
            Direction::Total => g
                .in_degrees()
                .into_iter()
                .zip(g.out_degrees())
                .map(|(a, b)| a + b)
                .collect(),
        };
        for d in degrees {
            *self.counts.entry(d).or_insert(0) += 1;
            self.total_observations += 1;
        }
    }

    /// Counts growth-multigraph degrees with edge multiplicity. Loops are
    /// not counted.
    pub fn add_multigraph(&mut self, g: &MultiDigraph) {
        let n = g.node_count();
        let mut ins = vec![0usize; n];
        let mut outs = vec![0usize; n];
        for &(i, j) in g.edges() {
            if i != j {
                outs[i] += 1;
                ins[j] += 1;
            }
        }
        for v in 0..n {
            let d = match self.direction {
                Direction::In => ins[v],
                Direction::Out => outs[v],
                Direction::Total => ins[v] + outs[v],
            };
            *self.counts.entry(d).or_insert(0) += 1;
            self.total_observations += 1;
        }
    }

    /// Folds another pooled histogram of the same direction into this one.
    pub fn merge(&mut self, other: &DegreeCounts) {
        debug_assert_eq!(self.direction, other.direction);
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total_observations += other.total_observations;
    }

    /// Count-weighted mean degree.
    pub fn mean_degree(&self) -> f64 {
        if self.total_observations == 0 {
            return 0.0;
        }
        let sum: f64 = self.counts.iter().map(|(&k, &c)| k as f64 * c as f64).sum();
        sum / self.total_observations as f64
    }

    /// `degree,count` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["degree", "count"])?;
        for (k, c) in &self.counts {
            out.write_record([k.to_string(), c.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Pools vertex degrees of `graphs` in the given direction.
pub fn degree_counts<'a, I>(graphs: I, direction: Direction) -> Result<DegreeCounts>
where
    I: IntoIterator<Item = &'a SimpleDigraph>,
{
    let mut counts = DegreeCounts::new(direction);
    let mut any = false;
    for g in graphs {
        counts.add_graph(g);
        any = true;
    }
    if !any {
        return Err(Error::EmptyInput("no graphs to count degrees of".into()));
    }
    Ok(counts)
}

/// Pools multiplicity-weighted, loop-free degrees of growth multigraphs.
pub fn weighted_degree_counts<'a, I>(graphs: I, direction: Direction) -> Result<DegreeCounts>
where
    I: IntoIterator<Item = &'a MultiDigraph>,
{
    let mut counts = DegreeCounts::new(direction);
    let mut any = false;
    for g in graphs {
        counts.add_multigraph(g);
        any = true;
    }
    if !any {
        return Err(Error::EmptyInput("no graphs to count degrees of".into()));
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multigraph_counts_multiplicity_without_loops() {
        let g = MultiDigraph::from_edges(3, &[(0, 1), (0, 1), (1, 1), (2, 0)]).unwrap();
        let c = weighted_degree_counts([&g], Direction::In).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        let o = weighted_degree_counts([&g], Direction::Out).unwrap();
        assert_eq!(o.counts, BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        assert!((o.mean_degree() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_cycle_in_degrees() {
        let g = SimpleDigraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let c = degree_counts([&g], Direction::In).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(1, 2)]));
        assert_eq!(c.total_observations, 2);
    }

    #[test]
    fn dangling_out_degrees() {
        let g = SimpleDigraph::from_edges(2, [(0, 1)]).unwrap();
        let c = degree_counts([&g], Direction::Out).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn pooled_total_degree() {
        let a = SimpleDigraph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let b = SimpleDigraph::empty(2);
        let c = degree_counts([&a, &b], Direction::Total).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(0, 2), (1, 2), (2, 1)]));
        assert_eq!(c.total_observations, 5);
        assert!((c.mean_degree() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn empty_collection_rejected() {
        let none: Vec<SimpleDigraph> = Vec::new();
        assert!(matches!(
            degree_counts(&none, Direction::In),
            Err(Error::EmptyInput(_))
        ));
    }
}
