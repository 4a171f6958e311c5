//! Growth processes. Every generator consumes a single random stream and is
//! bit-reproducible for a given seed.

use rand::Rng;

use super::graph::{simplify, MultiDigraph, SimpleDigraph};
use super::params::{AlphaPaParams, ModelParams};
use crate::error::{invalid, Result};

/// Complete directed graph with loops on `m + 1` vertices.
pub fn seed_graph(m: usize) -> Result<MultiDigraph> {
    if m < 1 {
        return Err(invalid("seed graph needs m >= 1"));
    }
    let k = m + 1;
    let mut g = MultiDigraph::new(k);
    for i in 0..k {
        for j in 0..k {
            g.add_edge(i, j);
        }
    }
    Ok(g)
}

fn check_size(m: usize, n: usize) -> Result<()> {
    if n < m + 1 {
        return Err(invalid(format!("n = {n} is smaller than the seed size {}", m + 1)));
    }
    Ok(())
}

/// Preferential attachment on total degree.
///
/// Each new vertex gets `m` out-edges (in-edges when `reversed`). Targets are
/// pre-existing vertices drawn with probability proportional to their total
/// degree, refreshed after every individual edge.
pub fn grow_pa<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    rng: &mut R,
    reversed: bool,
) -> Result<MultiDigraph> {
    let mut g = seed_graph(m)?;
    check_size(m, n)?;

    // one entry per edge endpoint, so a uniform pick is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(4 * m * n);
    for &(i, j) in g.edges() {
        endpoints.push(i);
        endpoints.push(j);
    }
    while g.node_count() < n {
        let v = g.add_node();
        for _ in 0..m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if reversed {
                g.add_edge(t, v);
            } else {
                g.add_edge(v, t);
            }
            endpoints.push(t);
        }
        // the new vertex becomes eligible only from the next step on
        endpoints.extend(std::iter::repeat_n(v, m));
    }
    Ok(g)
}

/// Copying model.
///
/// A star vertex is picked uniformly among existing vertices. With
/// probability `1 - p` the new vertex links to every vertex the star links to
/// (loops of the star are not copied); with probability `p` it emits `m`
/// edges to uniformly random existing vertices, drawn with replacement. With
/// `reversed` every direction is mirrored.
pub fn grow_copy<R: Rng + ?Sized>(
    m: usize,
    p: f64,
    n: usize,
    rng: &mut R,
    reversed: bool,
) -> Result<MultiDigraph> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("p must lie in (0, 1), got {p}")));
    }
    let mut g = seed_graph(m)?;
    check_size(m, n)?;

    // links[v]: the vertices v points at (or is pointed from, when reversed)
    let mut links: Vec<Vec<usize>> = (0..=m)
        .map(|v| (0..=m).filter(|&u| u != v).collect())
        .collect();
    links.reserve(n);
    while g.node_count() < n {
        let existing = g.node_count();
        let star = rng.random_range(0..existing);
        let chosen: Vec<usize> = if rng.random::<f64>() < p {
            (0..m).map(|_| rng.random_range(0..existing)).collect()
        } else {
            links[star].clone()
        };
        let v = g.add_node();
        for &t in &chosen {
            if reversed {
                g.add_edge(t, v);
            } else {
                g.add_edge(v, t);
            }
        }
        links.push(chosen);
    }
    Ok(g)
}

/// Draws a vertex with probability proportional to `deg(v) + alpha`, where
/// `ends` lists the relevant endpoint of every edge.
fn offset_pick<R: Rng + ?Sized>(ends: &[usize], alpha: f64, nodes: usize, rng: &mut R) -> usize {
    let edge_mass = ends.len() as f64;
    let r = rng.random::<f64>() * (edge_mass + alpha * nodes as f64);
    if r < edge_mass {
        ends[(r as usize).min(ends.len() - 1)]
    } else {
        rng.random_range(0..nodes)
    }
}

/// α-preferential attachment, grown from `seed_graph(1)` until exactly `n`
/// vertices exist. Edge-only steps do not advance the vertex count.
pub fn grow_alpha_pa<R: Rng + ?Sized>(
    params: &AlphaPaParams,
    n: usize,
    rng: &mut R,
) -> Result<MultiDigraph> {
    params.validate()?;
    let mut g = seed_graph(1)?;
    check_size(1, n)?;

    let mut sources: Vec<usize> = g.edges().iter().map(|e| e.0).collect();
    let mut heads: Vec<usize> = g.edges().iter().map(|e| e.1).collect();
    let alpha = params.alpha;
    while g.node_count() < n {
        let existing = g.node_count();
        let r = rng.random::<f64>();
        let (from, to) = if r < params.p1 {
            let to = offset_pick(&heads, alpha, existing, rng);
            (g.add_node(), to)
        } else if r < params.p1 + params.p2 {
            let from = offset_pick(&sources, alpha, existing, rng);
            (from, g.add_node())
        } else {
            let to = offset_pick(&heads, alpha, existing, rng);
            let from = offset_pick(&sources, alpha, existing, rng);
            (from, to)
        };
        g.add_edge(from, to);
        sources.push(from);
        heads.push(to);
    }
    Ok(g)
}

/// Grows the weighted, loop-carrying multigraph for `params` with `n`
/// vertices. Composite models grow X first and then Y from the same stream
/// and return their edge union.
pub fn generate_multigraph<R: Rng + ?Sized>(
    params: &ModelParams,
    n: usize,
    rng: &mut R,
) -> Result<MultiDigraph> {
    params.validate()?;
    if n < params.min_nodes() {
        return Err(invalid(format!(
            "n = {n} is below the minimum {} for model {}",
            params.min_nodes(),
            params.tag()
        )));
    }
    match params {
        ModelParams::Pa(p) => {
            let x = grow_pa(p.m_x, n, rng, false)?;
            let y = grow_pa(p.m_y, n, rng, true)?;
            x.union(&y)
        }
        ModelParams::Copy(p) => {
            let x = grow_copy(p.m_x, p.p_x, n, rng, false)?;
            let y = grow_copy(p.m_y, p.p_y, n, rng, true)?;
            x.union(&y)
        }
        ModelParams::AlphaPa(p) => grow_alpha_pa(p, n, rng),
        ModelParams::Empty => Ok(MultiDigraph::new(n)),
    }
}

/// Grows one final simple digraph: the multigraph of
/// [`generate_multigraph`] with weights and loops discarded.
pub fn generate<R: Rng + ?Sized>(params: &ModelParams, n: usize, rng: &mut R) -> Result<SimpleDigraph> {
    Ok(simplify(&generate_multigraph(params, n, rng)?))
}
