//! Partition agreement scores, cut objectives and the `AA^T` baseline.

use std::collections::BTreeMap;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::{connected_components, DirectedGraph};
use crate::mam::validate_bipartite;
use crate::partition::Partition;
use crate::sparse::{CsrMatrix, SymmetricSparseMatrix};
use crate::spectral::{embed, RwLaplacian};

/// Contingency counts over the nodes clustered in both partitions.
struct Contingency {
    n: f64,
    /// Nonzero cells as `(count, row margin, column margin)`.
    cells: Vec<(f64, f64, f64)>,
    rows: Vec<f64>,
    cols: Vec<f64>,
}

fn contingency(a: &Partition, b: &Partition) -> Result<Contingency> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("partitions cover {} and {} nodes", a.len(), b.len())));
    }
    let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, f64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, f64> = BTreeMap::new();
    let mut n = 0.0;
    for (x, y) in a.labels().iter().zip(b.labels()) {
        if let (Some(x), Some(y)) = (x, y) {
            *cells.entry((*x, *y)).or_default() += 1.0;
            *rows.entry(*x).or_default() += 1.0;
            *cols.entry(*y).or_default() += 1.0;
            n += 1.0;
        }
    }
    if n == 0.0 {
        return Err(Error::NoCommonNodes);
    }
    Ok(Contingency {
        n,
        cells: cells.iter().map(|(&(x, y), &c)| (c, rows[&x], cols[&y])).collect(),
        rows: rows.into_values().collect(),
        cols: cols.into_values().collect(),
    })
}

fn pairs(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index over the nodes clustered in both partitions. Returns 1
/// when the chance-corrected denominator vanishes (both partitions trivial).
pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    let t = contingency(a, b)?;
    let index: f64 = t.cells.iter().map(|&(c, _, _)| pairs(c)).sum();
    let sa: f64 = t.rows.iter().map(|&c| pairs(c)).sum();
    let sb: f64 = t.cols.iter().map(|&c| pairs(c)).sum();
    let total = pairs(t.n);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sa * sb / total;
    let max = 0.5 * (sa + sb);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

// Terms are summed in sorted order so relabelling is bit-for-bit neutral.
fn entropy(counts: &[f64], n: f64) -> f64 {
    let mut counts = counts.to_vec();
    counts.sort_by(f64::total_cmp);
    counts.iter().filter(|&&c| c > 0.0).map(|&c| -(c / n) * (c / n).ln()).sum()
}

/// Mutual information divided by the arithmetic mean of the two entropies.
/// A partition with zero entropy scores 0.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    let t = contingency(a, b)?;
    let ha = entropy(&t.rows, t.n);
    let hb = entropy(&t.cols, t.n);
    if ha <= 0.0 || hb <= 0.0 {
        return Ok(0.0);
    }
    let n = t.n;
    let mut cells = t.cells;
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    let mi: f64 = cells.iter().map(|&(c, r, k)| (c / n) * (c * n / (r * k)).ln()).sum();
    Ok((mi / (0.5 * (ha + hb))).clamp(0.0, 1.0))
}

/// Normalized cut `1/2 sum_i cut(P_i, complement) / vol(P_i)`.
pub fn ncut(m: &SymmetricSparseMatrix, p: &Partition) -> Result<f64> {
    if p.len() != m.n() {
        return Err(Error::DimensionMismatch(format!(
            "partition covers {} nodes, matrix has {}",
            p.len(),
            m.n()
        )));
    }
    let mut labels = Vec::with_capacity(p.len());
    for (v, l) in p.labels().iter().enumerate() {
        labels.push(l.ok_or_else(|| Error::InvalidParameter(format!("node {v} is unclustered")))?);
    }
    let k = p.k();
    let mut vol = vec![0.0; k];
    let mut cut = vec![0.0; k];
    for (i, j, w) in m.iter_upper() {
        let (a, b) = (labels[i], labels[j]);
        if i == j {
            vol[a] += w;
            continue;
        }
        vol[a] += w;
        vol[b] += w;
        if a != b {
            cut[a] += w;
            cut[b] += w;
        }
    }
    let mut total = 0.0;
    for c in 0..k {
        if vol[c] <= 0.0 {
            return Err(Error::ZeroVolume(c));
        }
        total += cut[c] / vol[c];
    }
    Ok(0.5 * total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepProfile {
    /// Nodes sorted by the second eigenvector of the random-walk Laplacian,
    /// ties broken by node id.
    pub order: Vec<usize>,
    /// `ncut[s - 1]` is the Ncut of the split `order[..s]` versus the rest.
    pub ncut: Vec<f64>,
    /// Prefix length `s` of the best split.
    pub argmin: usize,
    pub min: f64,
}

pub fn sweep_profile(m: &SymmetricSparseMatrix) -> Result<SweepProfile> {
    let n = m.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("a sweep needs at least 2 nodes, got {n}")));
    }
    if connected_components(m).iter().any(|&c| c != 0) {
        return Err(Error::Disconnected);
    }
    let op = RwLaplacian::new(m)?;
    let emb = embed(&op, 2)?;
    let fiedler = emb.vectors.column(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fiedler[a].total_cmp(&fiedler[b]).then(a.cmp(&b)));

    let full = m.to_full();
    let degrees = m.degrees();
    let vol_total: f64 = degrees.iter().sum();
    let mut inside = vec![false; n];
    let (mut vol, mut cut) = (0.0, 0.0);
    let mut profile = Vec::with_capacity(n - 1);
    for &v in &order[..n - 1] {
        let (cols, vals) = full.row(v);
        let mut to_inside = 0.0;
        let mut self_loop = 0.0;
        for (&u, &w) in cols.iter().zip(vals) {
            if u == v {
                self_loop += w;
            } else if inside[u] {
                to_inside += w;
            }
        }
        inside[v] = true;
        vol += degrees[v];
        cut += degrees[v] - self_loop - 2.0 * to_inside;
        let cut = cut.max(0.0);
        profile.push(0.5 * (cut / vol + cut / (vol_total - vol)));
    }
    let (best, min) =
        profile.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &x)| if x < b.1 { (i, x) } else { b });
    Ok(SweepProfile { order, ncut: profile, argmin: best + 1, min })
}

/// Weighted directed cuts between clusters and their imbalance ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct CirMatrix {
    /// `cut[[i, j]]`: total weight of edges from `P_i` to `P_j`.
    pub cut: Array2<f64>,
    /// `1/2 (cut_ij - cut_ji) / (cut_ij + cut_ji)`, 0 where both cuts vanish.
    pub ratio: Array2<f64>,
}

/// Cut imbalance ratios between the parts of `p`; unclustered nodes are
/// ignored.
pub fn cir_matrix(g: &DirectedGraph, p: &Partition) -> Result<CirMatrix> {
    if p.len() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "partition covers {} nodes, graph has {}",
            p.len(),
            g.n()
        )));
    }
    let k = p.k();
    let mut cut = Array2::<f64>::zeros((k, k));
    for e in g.edges() {
        if let (Some(a), Some(b)) = (p.label(e.source), p.label(e.target)) {
            if a != b {
                cut[[a, b]] += e.weight;
            }
        }
    }
    let ratio = Array2::from_shape_fn((k, k), |(i, j)| {
        let total = cut[[i, j]] + cut[[j, i]];
        if total == 0.0 {
            0.0
        } else {
            0.5 * (cut[[i, j]] - cut[[j, i]]) / total
        }
    });
    Ok(CirMatrix { cut, ratio })
}

/// `A A^T` of the weighted source-by-destination adjacency with its diagonal
/// removed. Row `r` corresponds to the `r`-th smallest source id.
pub fn aat_similarity(
    g: &DirectedGraph,
    sources: &[usize],
    destinations: &[usize],
) -> Result<SymmetricSparseMatrix> {
    let (sources, destinations) = validate_bipartite(g, sources, destinations)?;
    let mut src_pos = vec![usize::MAX; g.n()];
    let mut dst_pos = vec![usize::MAX; g.n()];
    for (r, &s) in sources.iter().enumerate() {
        src_pos[s] = r;
    }
    for (c, &d) in destinations.iter().enumerate() {
        dst_pos[d] = c;
    }
    let a = CsrMatrix::from_triplets(
        sources.len(),
        destinations.len(),
        g.edges().iter().map(|e| (src_pos[e.source], dst_pos[e.target], e.weight)),
    );
    let at = a.transpose();
    let ns = sources.len();
    let mut acc = vec![0.0; ns];
    let mut touched = Vec::new();
    let mut triplets = Vec::new();
    for i in 0..ns {
        let (dcols, dvals) = a.row(i);
        for (&d, &wi) in dcols.iter().zip(dvals) {
            let (srows, svals) = at.row(d);
            for (&s, &ws) in srows.iter().zip(svals) {
                if s <= i {
                    continue;
                }
                if acc[s] == 0.0 {
                    touched.push(s);
                }
                acc[s] += wi * ws;
            }
        }
        touched.sort_unstable();
        for &s in &touched {
            triplets.push((i, s, acc[s]));
            acc[s] = 0.0;
        }
        touched.clear();
    }
    SymmetricSparseMatrix::from_triplets(ns, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(labels: &[usize]) -> Partition {
        Partition::from_labels(labels.to_vec())
    }

    #[test]
    fn ari_examples() {
        let a = part(&[0, 0, 1, 1]);
        assert_eq!(ari(&a, &a).unwrap(), 1.0);
        assert_eq!(ari(&a, &part(&[1, 1, 0, 0])).unwrap(), 1.0);
        assert!((ari(&a, &part(&[0, 1, 0, 1])).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn unclustered_nodes_are_skipped() {
        let a = Partition::from_signed_labels(&[0, 0, 1, 1, -1]).unwrap();
        let b = Partition::from_signed_labels(&[1, 1, 0, 0, 0]).unwrap();
        assert_eq!(ari(&a, &b).unwrap(), 1.0);
        let none = Partition::from_signed_labels(&[-1, -1]).unwrap();
        assert!(matches!(ari(&none, &part(&[0, 0])), Err(Error::NoCommonNodes)));
    }

    #[test]
    fn nmi_examples() {
        let a = part(&[0, 0, 1, 1, 2, 2]);
        assert!((nmi(&a, &part(&[2, 2, 0, 0, 1, 1])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(nmi(&a, &part(&[0; 6])).unwrap(), 0.0);
        // MI = ln 2, H_a = ln 2, H_b = 2 ln 2
        let v = nmi(&part(&[0, 0, 1, 1]), &part(&[0, 1, 2, 3])).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    fn clique_pair(bridge: f64) -> SymmetricSparseMatrix {
        let mut t = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    t.push((base + i, base + j, 1.0));
                }
            }
        }
        if bridge > 0.0 {
            t.push((3, 4, bridge));
        }
        SymmetricSparseMatrix::from_triplets(8, t).unwrap()
    }

    #[test]
    fn ncut_examples() {
        let k4 = SymmetricSparseMatrix::from_triplets(
            4,
            (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0))),
        )
        .unwrap();
        let v = ncut(&k4, &part(&[0, 0, 1, 1])).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(ncut(&k4, &part(&[0; 4])).unwrap(), 0.0);
        assert_eq!(ncut(&clique_pair(0.0), &part(&[0, 0, 0, 0, 1, 1, 1, 1])).unwrap(), 0.0);
        let p = Partition::new(vec![Some(0); 4], 2).unwrap();
        assert!(matches!(ncut(&k4, &p), Err(Error::ZeroVolume(1))));
    }

    #[test]
    fn sweep_finds_the_bridge() {
        let m = clique_pair(0.1);
        let s = sweep_profile(&m).unwrap();
        assert_eq!(s.ncut.len(), 7);
        assert_eq!(s.argmin, 4);
        let mut left = s.order[..4].to_vec();
        left.sort();
        assert!(left == vec![0, 1, 2, 3] || left == vec![4, 5, 6, 7]);
        assert!(matches!(sweep_profile(&clique_pair(0.0)), Err(Error::Disconnected)));
        let two = SymmetricSparseMatrix::from_triplets(2, [(0, 1, 3.0)]).unwrap();
        assert_eq!(sweep_profile(&two).unwrap().ncut, vec![1.0]);
    }

    #[test]
    fn cir_examples() {
        let g = DirectedGraph::new(
            4,
            [
                crate::graph::Edge::new(0, 2, 1.0),
                crate::graph::Edge::new(1, 3, 2.0),
                crate::graph::Edge::new(2, 1, 1.0),
            ],
        )
        .unwrap();
        let c = cir_matrix(&g, &part(&[0, 0, 1, 1])).unwrap();
        assert_eq!(c.cut[[0, 1]], 3.0);
        assert_eq!(c.ratio[[0, 1]], 0.25);
        assert_eq!(c.ratio[[1, 0]], -0.25);
        assert_eq!(c.ratio[[0, 0]], 0.0);
    }

    #[test]
    fn aat_examples() {
        let g = DirectedGraph::new(
            4,
            [
                crate::graph::Edge::new(0, 2, 2.0),
                crate::graph::Edge::new(1, 2, 4.0),
                crate::graph::Edge::new(1, 3, 1.0),
            ],
        )
        .unwrap();
        let m = aat_similarity(&g, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(m.get(0, 1), 8.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert!(aat_similarity(&g, &[0, 2], &[1, 3]).is_err());
    }
}
