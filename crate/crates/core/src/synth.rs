//! Seeded random graph models.
//!
//! Every sampler uses ChaCha8 seeded with the caller's seed. Bernoulli edge
//! indicators come from stream 0 and Poisson weights from stream 1, so the
//! weighted and unweighted models share the same edge indicators for a seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Poisson};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge};
use crate::partition::Partition;

const EDGE_STREAM: u64 = 0;
const WEIGHT_STREAM: u64 = 1;
const ATTACH_STREAM: u64 = 2;

/// Directed stochastic block model, optionally with Poisson weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DsbmParams {
    pub block_sizes: Vec<usize>,
    /// `F[a][b]`: edge probability from block `a` to block `b`.
    pub connection: Vec<Vec<f64>>,
    /// `Lambda[a][b]`: Poisson mean of the weight of an edge from `a` to `b`.
    pub weights: Option<Vec<Vec<f64>>>,
    pub seed: u64,
}

/// Bipartite block model: sources only send edges to destinations.
#[derive(Debug, Clone, PartialEq)]
pub struct BsbmParams {
    pub source_sizes: Vec<usize>,
    pub destination_sizes: Vec<usize>,
    pub connection: Vec<Vec<f64>>,
    pub weights: Option<Vec<Vec<f64>>>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BsbmSample {
    pub graph: DirectedGraph,
    /// Source vertices come first: `0..sources.len()`.
    pub sources: Vec<usize>,
    pub destinations: Vec<usize>,
    /// Planted blocks of the sources, indexed like `sources`.
    pub source_truth: Partition,
    /// Planted blocks of the destinations, indexed like `destinations`.
    pub destination_truth: Partition,
}

fn check_matrix(name: &str, m: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("{name} must be {rows}x{cols}")));
    }
    Ok(())
}

fn check_probabilities(m: &[Vec<f64>]) -> Result<()> {
    for row in m {
        for &p in row {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("connection probability {p} outside [0, 1]")));
            }
        }
    }
    Ok(())
}

fn check_rates(m: &[Vec<f64>]) -> Result<()> {
    for row in m {
        for &l in row {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "Poisson mean {l} must be finite and non-negative"
                )));
            }
        }
    }
    Ok(())
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    out.push(0);
    for &s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

/// Calls `f(i)` for the indices `i` in `0..len` that succeed in independent
/// Bernoulli(p) trials, skipping ahead geometrically.
fn bernoulli_hits(len: u64, p: f64, rng: &mut ChaCha8Rng, mut f: impl FnMut(u64)) {
    if p <= 0.0 || len == 0 {
        return;
    }
    if p >= 1.0 {
        (0..len).for_each(f);
        return;
    }
    let skip = Geometric::new(p).expect("p in (0, 1)");
    let mut pos = 0u64;
    loop {
        let gap = skip.sample(rng);
        pos = match pos.checked_add(gap) {
            Some(p) if p < len => p,
            _ => return,
        };
        f(pos);
        pos += 1;
    }
}

/// Edges between every ordered pair of blocks `(a, b)`: rows of block `a`
/// from `row_off`, columns of block `b` from `col_off`.
#[allow(clippy::too_many_arguments)]
fn sample_blocks(
    n: usize,
    row_sizes: &[usize],
    row_base: usize,
    col_sizes: &[usize],
    col_base: usize,
    connection: &[Vec<f64>],
    weights: Option<&[Vec<f64>]>,
    seed: u64,
) -> Result<DirectedGraph> {
    let mut edge_rng = ChaCha8Rng::seed_from_u64(seed);
    edge_rng.set_stream(EDGE_STREAM);
    let mut weight_rng = ChaCha8Rng::seed_from_u64(seed);
    weight_rng.set_stream(WEIGHT_STREAM);

    let (ro, co) = (offsets(row_sizes), offsets(col_sizes));
    let mut edges = Vec::new();
    for a in 0..row_sizes.len() {
        for b in 0..col_sizes.len() {
            let p = connection[a][b];
            let rate = weights.map(|w| w[a][b]);
            if rate == Some(0.0) {
                continue;
            }
            let poisson = rate.map(|r| Poisson::new(r).expect("positive finite rate"));
            let cols = col_sizes[b] as u64;
            let len = row_sizes[a] as u64 * cols;
            bernoulli_hits(len, p, &mut edge_rng, |idx| {
                let s = row_base + ro[a] + (idx / cols) as usize;
                let t = col_base + co[b] + (idx % cols) as usize;
                if s == t {
                    return;
                }
                let w = match &poisson {
                    Some(dist) => dist.sample(&mut weight_rng),
                    None => 1.0,
                };
                if w > 0.0 {
                    edges.push(Edge::new(s, t, w));
                }
            });
        }
    }
    DirectedGraph::new(n, edges)
}

fn block_labels(sizes: &[usize]) -> Partition {
    Partition::from_labels(sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect())
}

pub fn sample_dsbm(p: &DsbmParams) -> Result<(DirectedGraph, Partition)> {
    let k = p.block_sizes.len();
    check_matrix("connection matrix", &p.connection, k, k)?;
    check_probabilities(&p.connection)?;
    if let Some(w) = &p.weights {
        check_matrix("weight matrix", w, k, k)?;
        check_rates(w)?;
    }
    let n = p.block_sizes.iter().sum();
    let g =
        sample_blocks(n, &p.block_sizes, 0, &p.block_sizes, 0, &p.connection, p.weights.as_deref(), p.seed)?;
    Ok((g, block_labels(&p.block_sizes)))
}

pub fn sample_bsbm(p: &BsbmParams) -> Result<BsbmSample> {
    let (ks, kd) = (p.source_sizes.len(), p.destination_sizes.len());
    check_matrix("bipartite connection matrix", &p.connection, ks, kd)?;
    check_probabilities(&p.connection)?;
    if let Some(w) = &p.weights {
        check_matrix("bipartite weight matrix", w, ks, kd)?;
        check_rates(w)?;
    }
    let ns: usize = p.source_sizes.iter().sum();
    let nd: usize = p.destination_sizes.iter().sum();
    let graph = sample_blocks(
        ns + nd,
        &p.source_sizes,
        0,
        &p.destination_sizes,
        ns,
        &p.connection,
        p.weights.as_deref(),
        p.seed,
    )?;
    Ok(BsbmSample {
        graph,
        sources: (0..ns).collect(),
        destinations: (ns..ns + nd).collect(),
        source_truth: block_labels(&p.source_sizes),
        destination_truth: block_labels(&p.destination_sizes),
    })
}

/// Directed Erdos-Renyi graph: each ordered pair is an edge with probability
/// `p`, weight one.
pub fn sample_er(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    let params = DsbmParams { block_sizes: vec![n], connection: vec![vec![p]], weights: None, seed };
    if n == 0 {
        check_probabilities(&params.connection)?;
        return DirectedGraph::new(0, []);
    }
    sample_dsbm(&params).map(|(g, _)| g)
}

/// Barabasi-Albert graph with every undirected edge emitted in both
/// directions. Vertices `0..m` start without edges; vertex `m` joins all of
/// them, and each later vertex joins `m` distinct earlier vertices chosen
/// with probability proportional to degree.
pub fn sample_ba(n: usize, m: usize, seed: u64) -> Result<DirectedGraph> {
    if m > n {
        return Err(Error::InvalidParameter(format!("attachment count {m} exceeds vertex count {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ATTACH_STREAM);
    // Each undirected edge contributes both endpoints, so a uniform draw
    // from `pool` is a degree-proportional draw.
    let mut pool: Vec<usize> = Vec::with_capacity(2 * m * n.saturating_sub(m));
    let mut edges = Vec::with_capacity(2 * m * n.saturating_sub(m));
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for v in m..n {
        targets.clear();
        if v == m {
            targets.extend(0..m);
        } else {
            while targets.len() < m {
                let t = pool[rng.random_range(0..pool.len())];
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
        }
        for &t in &targets {
            pool.push(t);
            pool.push(v);
            edges.push(Edge::new(v, t, 1.0));
            edges.push(Edge::new(t, v, 1.0));
        }
    }
    DirectedGraph::new(n, edges)
}
