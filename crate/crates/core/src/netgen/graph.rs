use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{invalid, Error, Result};

/// Growth-phase directed multigraph. Loops and parallel edges are allowed.
///
/// Degree tallies are updated on every insertion and always agree with the
/// edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDigraph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    in_degree: Vec<usize>,
    out_degree: Vec<usize>,
}

impl MultiDigraph {
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            edges: Vec::new(),
            in_degree: vec![0; node_count],
            out_degree: vec![0; node_count],
        }
    }

    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(node_count);
        for &(i, j) in edges {
            if i >= node_count || j >= node_count {
                return Err(invalid(format!(
                    "edge ({i}, {j}) out of range for {node_count} nodes"
                )));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Appends a vertex with no edges and returns its index.
    pub fn add_node(&mut self) -> usize {
        self.node_count += 1;
        self.in_degree.push(0);
        self.out_degree.push(0);
        self.node_count - 1
    }

    /// Panics if either endpoint is out of range.
    pub fn add_edge(&mut self, from: usize, to: usize) {
        assert!(
            from < self.node_count && to < self.node_count,
            "edge endpoint out of range"
        );
        self.edges.push((from, to));
        self.out_degree[from] += 1;
        self.in_degree[to] += 1;
    }

    /// Edge-multiset union of two graphs on the same vertex set.
    pub fn union(&self, other: &MultiDigraph) -> Result<MultiDigraph> {
        if self.node_count != other.node_count {
            return Err(invalid(format!(
                "component graphs have {} and {} nodes",
                self.node_count, other.node_count
            )));
        }
        let mut g = self.clone();
        for &(i, j) in &other.edges {
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_degree[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_degree[v]
    }

    pub fn total_degree(&self, v: usize) -> usize {
        self.in_degree[v] + self.out_degree[v]
    }

    pub fn in_degrees(&self) -> &[usize] {
        &self.in_degree
    }

    pub fn out_degrees(&self) -> &[usize] {
        &self.out_degree
    }
}

/// Unweighted, loop-free directed graph in compressed sparse row form.
///
/// Out-neighbour lists are sorted and duplicate-free, so `edges()` yields
/// pairs in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleDigraph {
    node_count: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl SimpleDigraph {
    /// Builds a simple digraph from arbitrary pairs: loops are dropped and
    /// duplicates collapsed.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (i, j) in edges {
            if i >= node_count || j >= node_count {
                return Err(invalid(format!(
                    "edge ({i}, {j}) out of range for {node_count} nodes"
                )));
            }
            if i != j {
                pairs.push((i, j));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; node_count + 1];
        for &(i, _) in &pairs {
            offsets[i + 1] += 1;
        }
        for k in 0..node_count {
            offsets[k + 1] += offsets[k];
        }
        let targets = pairs.into_iter().map(|(_, j)| j).collect();
        Ok(Self {
            node_count,
            offsets,
            targets,
        })
    }

    /// Graph on `node_count` vertices with no edges (every vertex dangling).
    pub fn empty(node_count: usize) -> Self {
        Self {
            node_count,
            offsets: vec![0; node_count + 1],
            targets: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.out_neighbors(i).binary_search(&j).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count).flat_map(move |i| self.out_neighbors(i).iter().map(move |&j| (i, j)))
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.node_count).map(|v| self.out_degree(v)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.node_count];
        for &j in &self.targets {
            d[j] += 1;
        }
        d
    }

    /// Serialises as `n <count>` followed by one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(16 + 12 * self.edge_count());
        let _ = writeln!(s, "n {}", self.node_count);
        for (i, j) in self.edges() {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_edge_list().as_bytes())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }

    /// Parses the edge-list format. Loops and repeated pairs are accepted and
    /// discarded, like any other simplification.
    pub fn read_edge_list<R: BufRead>(reader: R, origin: &Path) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            message: format!("line {line}: {message}"),
        };
        let mut lines = reader.lines().enumerate();
        let node_count = loop {
            let Some((no, line)) = lines.next() else {
                return Err(parse_err(0, "missing `n <count>` header".into()));
            };
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("n"), Some(count), None) => {
                    break count
                        .parse::<usize>()
                        .map_err(|e| parse_err(no + 1, e.to_string()))?;
                }
                _ => return Err(parse_err(no + 1, "expected `n <count>` header".into())),
            }
        };
        let mut edges = Vec::new();
        for (no, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(no + 1, format!("expected `i j`, got `{line}`")));
            };
            let i = a.parse().map_err(|_| parse_err(no + 1, format!("bad index `{a}`")))?;
            let j = b.parse().map_err(|_| parse_err(no + 1, format!("bad index `{b}`")))?;
            edges.push((i, j));
        }
        Self::from_edges(node_count, edges).map_err(|e| parse_err(0, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_edge_list(std::io::BufReader::new(file), path)
    }
}

/// Collapses duplicates and removes loops.
pub fn simplify(graph: &MultiDigraph) -> SimpleDigraph {
    SimpleDigraph::from_edges(graph.node_count(), graph.edges().iter().copied())
        .expect("multigraph endpoints are always in range")
}

/// Adds the adjacency matrices of `x` and `y`, caps weights at one and drops
/// the diagonal.
pub fn compose_and_simplify(x: &MultiDigraph, y: &MultiDigraph) -> Result<SimpleDigraph> {
    if x.node_count() != y.node_count() {
        return Err(invalid(format!(
            "component graphs have {} and {} nodes",
            x.node_count(),
            y.node_count()
        )));
    }
    SimpleDigraph::from_edges(
        x.node_count(),
        x.edges().iter().chain(y.edges()).copied(),
    )
}

impl From<&SimpleDigraph> for MultiDigraph {
    fn from(g: &SimpleDigraph) -> Self {
        let mut m = MultiDigraph::new(g.node_count());
        for (i, j) in g.edges() {
            m.add_edge(i, j);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multigraph_tallies_follow_edges() {
        let g = MultiDigraph::from_edges(3, &[(0, 1), (0, 1), (2, 2)]).unwrap();
        assert_eq!(g.out_degrees(), &[2, 0, 1]);
        assert_eq!(g.in_degrees(), &[0, 2, 1]);
        assert_eq!(g.total_degree(2), 2);
        assert!(MultiDigraph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn simplify_drops_loops_and_duplicates() {
        let loop_only = MultiDigraph::from_edges(1, &[(0, 0)]).unwrap();
        assert_eq!(simplify(&loop_only).edge_count(), 0);

        let doubled = MultiDigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let s = simplify(&doubled);
        assert_eq!(s.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn compose_collapses_weights() {
        let x = MultiDigraph::from_edges(2, &[(0, 1)]).unwrap();
        let s = compose_and_simplify(&x, &x).unwrap();
        assert_eq!(s.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn compose_removes_loops() {
        let x = MultiDigraph::from_edges(2, &[(0, 0), (0, 1)]).unwrap();
        let y = MultiDigraph::from_edges(2, &[(1, 0)]).unwrap();
        let s = compose_and_simplify(&x, &y).unwrap();
        assert_eq!(s.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn compose_rejects_mismatched_sizes() {
        let x = MultiDigraph::new(2);
        let y = MultiDigraph::new(3);
        assert!(matches!(
            compose_and_simplify(&x, &y),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn edge_list_format() {
        let g = SimpleDigraph::from_edges(3, [(2, 0), (0, 2), (0, 1)]).unwrap();
        assert_eq!(g.to_edge_list(), "n 3\n0 1\n0 2\n2 0\n");
        let back =
            SimpleDigraph::read_edge_list(g.to_edge_list().as_bytes(), Path::new("mem")).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_rejects_garbage() {
        let bad = ["", "3\n", "n 2\n0\n", "n 2\n0 5\n", "n 2\nx 1\n"];
        for text in bad {
            assert!(
                SimpleDigraph::read_edge_list(text.as_bytes(), Path::new("mem")).is_err(),
                "{text:?}"
            );
        }
    }

    #[test]
    fn degrees_of_simple_graph() {
        let g = SimpleDigraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(g.out_degrees(), vec![2, 1, 0]);
        assert_eq!(g.in_degrees(), vec![0, 1, 2]);
        assert!(g.has_edge(1, 2));
        assert!(!g.has_edge(2, 1));
    }
}
