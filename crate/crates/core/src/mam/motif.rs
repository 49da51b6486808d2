//! Catalog of motifs on two and three vertices.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::Error;

/// Names of the supported motifs: the fifteen simple motifs on at most three
/// vertices plus the anchored collider and expander.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MotifName {
    Ms,
    Md,
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    M7,
    M8,
    M9,
    M10,
    M11,
    M12,
    M13,
    Coll,
    Expa,
}

impl MotifName {
    pub const ALL: [MotifName; 17] = [
        MotifName::Ms,
        MotifName::Md,
        MotifName::M1,
        MotifName::M2,
        MotifName::M3,
        MotifName::M4,
        MotifName::M5,
        MotifName::M6,
        MotifName::M7,
        MotifName::M8,
        MotifName::M9,
        MotifName::M10,
        MotifName::M11,
        MotifName::M12,
        MotifName::M13,
        MotifName::Coll,
        MotifName::Expa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MotifName::Ms => "Ms",
            MotifName::Md => "Md",
            MotifName::M1 => "M1",
            MotifName::M2 => "M2",
            MotifName::M3 => "M3",
            MotifName::M4 => "M4",
            MotifName::M5 => "M5",
            MotifName::M6 => "M6",
            MotifName::M7 => "M7",
            MotifName::M8 => "M8",
            MotifName::M9 => "M9",
            MotifName::M10 => "M10",
            MotifName::M11 => "M11",
            MotifName::M12 => "M12",
            MotifName::M13 => "M13",
            MotifName::Coll => "Mcoll",
            MotifName::Expa => "Mexpa",
        }
    }

    pub fn motif(self) -> &'static Motif {
        &catalog()[self as usize]
    }
}

impl fmt::Display for MotifName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MotifName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        let alias = match key.as_str() {
            "coll" | "collider" => Some(MotifName::Coll),
            "expa" | "expander" => Some(MotifName::Expa),
            _ => None,
        };
        alias
            .or_else(|| MotifName::ALL.into_iter().find(|m| m.as_str().eq_ignore_ascii_case(&key)))
            .ok_or_else(|| Error::UnknownMotif(s.to_string()))
    }
}

/// Relation between an unordered vertex pair `(u, v)`, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairRelation {
    Missing,
    /// Only `u -> v`.
    Forward,
    /// Only `v -> u`.
    Backward,
    Double,
}

/// A motif `(M, A)`: a weakly connected pattern on vertices `0..m` with an
/// anchor set of at least two vertices.
#[derive(Debug, Clone)]
pub struct Motif {
    pub name: MotifName,
    pub m: usize,
    /// Directed edges on `0..m`.
    pub edges: Vec<(usize, usize)>,
    pub anchors: Vec<usize>,
    /// One permutation per anchored automorphism class; `perm[u]` is the
    /// position (0 = first anchored vertex `i`, `m - 1` = second anchored
    /// vertex `j`) that motif vertex `u` maps to.
    pub anchored_automorphism_reps: Vec<Vec<usize>>,
}

impl Motif {
    fn new(name: MotifName, m: usize, edges_1based: &[(usize, usize)], anchors_1based: &[usize]) -> Self {
        let edges: Vec<(usize, usize)> = edges_1based.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
        let anchors: Vec<usize> = anchors_1based.iter().map(|&a| a - 1).collect();
        let mut motif = Motif { name, m, edges, anchors, anchored_automorphism_reps: Vec::new() };
        motif.anchored_automorphism_reps = motif.compute_anchored_classes();
        motif
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_simple(&self) -> bool {
        self.anchors.len() == self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn relation(&self, u: usize, v: usize) -> PairRelation {
        debug_assert!(u < v);
        match (self.has_edge(u, v), self.has_edge(v, u)) {
            (false, false) => PairRelation::Missing,
            (true, false) => PairRelation::Forward,
            (false, true) => PairRelation::Backward,
            (true, true) => PairRelation::Double,
        }
    }

    pub fn is_weakly_connected(&self) -> bool {
        let mut seen = vec![false; self.m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex permutations preserving the edge set.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        permutations(self.m)
            .into_iter()
            .filter(|p| self.edges.iter().all(|&(u, v)| self.has_edge(p[u], p[v])))
            .collect()
    }

    /// Permutations sending some anchor to position 0 and some anchor to
    /// position `m - 1`, modulo right composition with automorphisms.
    fn compute_anchored_classes(&self) -> Vec<Vec<usize>> {
        let autos = self.automorphisms();
        let last = self.m - 1;
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for sigma in permutations(self.m) {
            let hits = |pos: usize| self.anchors.iter().any(|&a| sigma[a] == pos);
            if !(hits(0) && hits(last)) {
                continue;
            }
            // sigma ~ tau iff sigma = tau . alpha for an automorphism alpha
            let equivalent = reps
                .iter()
                .any(|tau| autos.iter().any(|alpha| (0..self.m).all(|u| sigma[u] == tau[alpha[u]])));
            if !equivalent {
                reps.push(sigma);
            }
        }
        reps
    }
}

/// All permutations of `0..m` in lexicographic order.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

fn catalog() -> &'static [Motif] {
    static CATALOG: OnceLock<Vec<Motif>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        use MotifName::*;
        let full2 = [1, 2];
        let full3 = [1, 2, 3];
        vec![
            Motif::new(Ms, 2, &[(1, 2)], &full2),
            Motif::new(Md, 2, &[(1, 2), (2, 1)], &full2),
            Motif::new(M1, 3, &[(1, 2), (2, 3), (3, 1)], &full3),
            Motif::new(M2, 3, &[(1, 2), (2, 1), (2, 3), (3, 1)], &full3),
            Motif::new(M3, 3, &[(1, 2), (2, 1), (2, 3), (3, 2), (3, 1)], &full3),
            Motif::new(M4, 3, &[(1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)], &full3),
            Motif::new(M5, 3, &[(1, 2), (2, 3), (1, 3)], &full3),
            Motif::new(M6, 3, &[(1, 2), (2, 1), (3, 1), (3, 2)], &full3),
            Motif::new(M7, 3, &[(1, 2), (2, 1), (1, 3), (2, 3)], &full3),
            Motif::new(M8, 3, &[(1, 2), (1, 3)], &full3),
            Motif::new(M9, 3, &[(1, 2), (2, 3)], &full3),
            Motif::new(M10, 3, &[(1, 3), (2, 3)], &full3),
            Motif::new(M11, 3, &[(1, 2), (2, 1), (1, 3)], &full3),
            Motif::new(M12, 3, &[(1, 2), (2, 1), (3, 1)], &full3),
            Motif::new(M13, 3, &[(1, 2), (2, 1), (2, 3), (3, 2)], &full3),
            Motif::new(Coll, 3, &[(1, 2), (3, 2)], &[1, 3]),
            Motif::new(Expa, 3, &[(2, 1), (2, 3)], &[1, 3]),
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_order_matches_enum() {
        for name in MotifName::ALL {
            assert_eq!(name.motif().name, name);
        }
    }

    #[test]
    fn motifs_are_connected_with_valid_anchors() {
        for name in MotifName::ALL {
            let m = name.motif();
            assert!(m.is_weakly_connected(), "{name}");
            assert!(m.anchors.len() >= 2);
            match name {
                MotifName::Coll | MotifName::Expa => assert_eq!(m.anchors, vec![0, 2]),
                _ => assert!(m.is_simple()),
            }
        }
    }

    #[test]
    fn anchored_class_counts() {
        // |S_m| / |Aut| for simple motifs; a single class for collider/expander.
        let expected = [
            (MotifName::Ms, 2),
            (MotifName::Md, 1),
            (MotifName::M1, 2),
            (MotifName::M2, 6),
            (MotifName::M3, 6),
            (MotifName::M4, 1),
            (MotifName::M5, 6),
            (MotifName::M6, 3),
            (MotifName::M7, 3),
            (MotifName::M8, 3),
            (MotifName::M9, 6),
            (MotifName::M10, 3),
            (MotifName::M11, 6),
            (MotifName::M12, 6),
            (MotifName::M13, 3),
            (MotifName::Coll, 1),
            (MotifName::Expa, 1),
        ];
        for (name, count) in expected {
            assert_eq!(name.motif().anchored_automorphism_reps.len(), count, "{name}");
        }
    }

    #[test]
    fn parses_names() {
        assert_eq!("M10".parse::<MotifName>().unwrap(), MotifName::M10);
        assert_eq!("ms".parse::<MotifName>().unwrap(), MotifName::Ms);
        assert_eq!("Mcoll".parse::<MotifName>().unwrap(), MotifName::Coll);
        assert_eq!("expa".parse::<MotifName>().unwrap(), MotifName::Expa);
        assert!(matches!("M99".parse::<MotifName>(), Err(Error::UnknownMotif(_))));
    }
}
