use crate::error::{Error, Result};

/// Cluster label per node; `None` marks a node that was not clustered (it
/// lies outside the component that was embedded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<Option<usize>>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<Option<usize>>, k: usize) -> Result<Self> {
        if let Some(bad) = labels.iter().flatten().find(|&&l| l >= k) {
            return Err(Error::InvalidParameter(format!("label {bad} out of range for {k} clusters")));
        }
        Ok(Partition { labels, k })
    }

    /// Every node clustered; `k` is one past the largest label.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |&l| l + 1);
        Partition { labels: labels.into_iter().map(Some).collect(), k }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> Option<usize> {
        self.labels[node]
    }

    pub fn clustered_count(&self) -> usize {
        self.labels.iter().flatten().count()
    }

    /// Labels as integers with `-1` for unclustered nodes.
    pub fn signed_labels(&self) -> Vec<i64> {
        self.labels.iter().map(|l| l.map_or(-1, |v| v as i64)).collect()
    }

    pub fn from_signed_labels(labels: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            out.push(match l {
                -1 => None,
                l if l >= 0 => Some(l as usize),
                l => {
                    return Err(Error::InvalidParameter(format!("label {l} is neither -1 nor non-negative")))
                }
            });
        }
        let k = out.iter().flatten().max().map_or(0, |&l| l + 1);
        Ok(Partition { labels: out, k })
    }

    /// Partition of `n` nodes placing `labels[r]` on node `ids[r]` and
    /// leaving all other nodes unclustered.
    pub fn scatter(n: usize, ids: &[usize], labels: &Partition) -> Partition {
        let mut out = vec![None; n];
        for (&id, &l) in ids.iter().zip(&labels.labels) {
            out[id] = l;
        }
        Partition { labels: out, k: labels.k }
    }

    /// Sub-partition on `ids`, in that order.
    pub fn gather(&self, ids: &[usize]) -> Partition {
        Partition { labels: ids.iter().map(|&i| self.labels[i]).collect(), k: self.k }
    }

    /// Node lists per label.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.k];
        for (node, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                parts[*l].push(node);
            }
        }
        parts
    }
}

/// Relabels so labels appear in order of first occurrence.
pub(crate) fn canonicalize(labels: &mut [usize]) -> usize {
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut next = 0;
    for l in labels.iter_mut() {
        if *l >= map.len() {
            map.resize(*l + 1, None);
        }
        *l = *map[*l].get_or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    next
}
