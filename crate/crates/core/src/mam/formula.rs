//! Symbolic MAM formulae.
//!
//! A formula is a sum of terms `H`, or `H ∘ (L R)`, over the indicator and
//! adjacency matrices of a graph. Two sources produce formulae: the
//! hand-written functional mean-weighted table (with closure and weighting
//! rewrites applied on top), and a generic construction driven by a motif's
//! anchored automorphism classes. Both are evaluated by the dense and sparse
//! back ends in [`super::dense`] and [`super::sparse_eval`].

use super::motif::{Motif, MotifName, PairRelation};
use super::{Closure, Weighting};

/// The eight matrices a formula may reference. `Jn` and `J0` are implicit in
/// the sparse back end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    J,
    Js,
    Jd,
    G,
    Gs,
    Gd,
    Jn,
    J0,
}

impl Base {
    pub fn is_symmetric(self) -> bool {
        matches!(self, Base::Jd | Base::Gd | Base::Jn | Base::J0)
    }

    pub fn is_implicit(self) -> bool {
        matches!(self, Base::Jn | Base::J0)
    }

    fn structural(self) -> Base {
        match self {
            Base::J => Base::Js,
            Base::G => Base::Gs,
            Base::Jn => Base::J0,
            other => other,
        }
    }

    fn weighted(self) -> Base {
        match self {
            Base::J => Base::G,
            Base::Js => Base::Gs,
            Base::Jd => Base::Gd,
            other => other,
        }
    }
}

/// A base matrix, possibly transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub base: Base,
    pub transposed: bool,
}

impl Factor {
    pub fn new(base: Base, transposed: bool) -> Self {
        Factor { base, transposed: transposed && !base.is_symmetric() }
    }

    fn t(self) -> Factor {
        Factor::new(self.base, !self.transposed)
    }

    fn map(self, f: impl Fn(Base) -> Base) -> Factor {
        Factor::new(f(self.base), self.transposed)
    }
}

/// `Pair(H)` evaluates to `H`; `Path { h, l, r }` to `H ∘ (L R)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Pair(Factor),
    Path { h: Factor, l: Factor, r: Factor },
}

impl Term {
    pub fn transpose(self) -> Term {
        match self {
            Term::Pair(h) => Term::Pair(h.t()),
            Term::Path { h, l, r } => Term::Path { h: h.t(), l: r.t(), r: l.t() },
        }
    }

    fn map(self, f: impl Fn(Base) -> Base + Copy) -> Term {
        match self {
            Term::Pair(h) => Term::Pair(h.map(f)),
            Term::Path { h, l, r } => Term::Path { h: h.map(f), l: l.map(f), r: r.map(f) },
        }
    }

    pub fn factors(&self) -> Vec<Factor> {
        match *self {
            Term::Pair(h) => vec![h],
            Term::Path { h, l, r } => vec![h, l, r],
        }
    }
}

/// `M = scale * (C [+ C^T] + C')`.
#[derive(Debug, Clone, PartialEq)]
pub struct Formula {
    pub scale: f64,
    pub c: Vec<Term>,
    pub add_c_transpose: bool,
    pub c_prime: Vec<Term>,
}

impl Formula {
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.c.iter().chain(&self.c_prime)
    }

    /// Every term as a standalone matrix summand (transposes expanded).
    fn expanded_terms(&self) -> Vec<Term> {
        let mut all = self.c.clone();
        if self.add_c_transpose {
            all.extend(self.c.iter().map(|t| t.transpose()));
        }
        all.extend(self.c_prime.iter().copied());
        all
    }
}

// Shorthands for writing the table.
const fn f(base: Base) -> Factor {
    Factor { base, transposed: false }
}
const fn ft(base: Base) -> Factor {
    Factor { base, transposed: true }
}
const J: Factor = f(Base::J);
const JT: Factor = ft(Base::J);
const G: Factor = f(Base::G);
const GT: Factor = ft(Base::G);
const JD: Factor = f(Base::Jd);
const GD: Factor = f(Base::Gd);
const JN: Factor = f(Base::Jn);

fn p(h: Factor, l: Factor, r: Factor) -> Term {
    Term::Path { h, l, r }
}

/// Functional mean-weighted formula for each motif, written term by term.
pub fn functional_mean_table(name: MotifName) -> Formula {
    use MotifName::*;
    let (scale, c, add_c_transpose, c_prime) = match name {
        Ms => (1.0, vec![Term::Pair(G)], true, vec![]),
        Md => (0.5, vec![Term::Pair(GD)], false, vec![]),
        M1 => (1.0 / 3.0, vec![p(JT, J, G), p(JT, G, J), p(GT, J, J)], true, vec![]),
        M2 => (
            0.25,
            vec![
                p(JT, JD, G),
                p(JT, GD, J),
                p(GT, JD, J),
                p(JT, J, GD),
                p(JT, G, JD),
                p(GT, J, JD),
                p(JD, J, G),
                p(JD, G, J),
                p(GD, J, J),
            ],
            true,
            vec![],
        ),
        M3 => (
            0.2,
            vec![
                p(J, JD, GD),
                p(J, GD, JD),
                p(G, JD, JD),
                p(JD, JD, G),
                p(JD, GD, J),
                p(GD, JD, J),
                p(JD, J, GD),
                p(JD, G, JD),
                p(GD, J, JD),
            ],
            true,
            vec![],
        ),
        M4 => (1.0 / 6.0, vec![p(JD, JD, GD), p(JD, GD, JD), p(GD, JD, JD)], false, vec![]),
        M5 => (
            1.0 / 3.0,
            vec![
                p(J, J, G),
                p(J, G, J),
                p(G, J, J),
                p(J, J, GT),
                p(J, G, JT),
                p(G, J, JT),
                p(J, JT, G),
                p(J, GT, J),
                p(G, JT, J),
            ],
            true,
            vec![],
        ),
        M6 => (0.25, vec![p(J, J, GD), p(J, G, JD), p(G, J, JD), p(JD, JT, G)], true, vec![p(GD, JT, J)]),
        M7 => (
            0.25,
            vec![p(J, JD, G), p(J, GD, J), p(G, JD, J)],
            true,
            vec![p(JD, J, GT), p(JD, G, JT), p(GD, J, JT)],
        ),
        M8 => (0.5, vec![p(J, G, JN), p(G, J, JN)], true, vec![p(JN, JT, G), p(JN, GT, J)]),
        M9 => (
            0.5,
            vec![p(J, JN, GT), p(G, JN, JT), p(JN, J, G), p(JN, G, J), p(J, GT, JN), p(G, JT, JN)],
            true,
            vec![],
        ),
        M10 => (0.5, vec![p(J, JN, G), p(G, JN, J)], true, vec![p(JN, J, GT), p(JN, G, JT)]),
        M11 => (
            1.0 / 3.0,
            vec![p(JD, G, JN), p(GD, J, JN), p(JN, JD, G), p(JN, GD, J), p(J, GD, JN), p(G, JD, JN)],
            true,
            vec![],
        ),
        M12 => (
            1.0 / 3.0,
            vec![p(JD, JN, G), p(GD, JN, J), p(JN, J, GD), p(JN, G, JD), p(J, JN, GD), p(G, JN, JD)],
            true,
            vec![],
        ),
        M13 => (0.25, vec![p(JD, GD, JN), p(GD, JD, JN), p(JN, JD, GD)], true, vec![]),
        Coll => (0.5, vec![p(JN, J, GT)], true, vec![]),
        Expa => (0.5, vec![p(JN, JT, G)], true, vec![]),
    };
    Formula { scale, c, add_c_transpose, c_prime }
}

/// The formula evaluated by `build_mam`: the functional mean table with the
/// structural substitution (`J -> Js`, `G -> Gs`, `Jn -> J0`) and the product
/// rewrite applied as requested. Unweighted MAMs use the mean formula on a
/// unit-weight graph, so they map to [`Weighting::Mean`] here.
pub fn table_formula(name: MotifName, closure: Closure, weighting: Weighting) -> Formula {
    let mut formula = functional_mean_table(name);
    if closure == Closure::Structural {
        let sub = |t: &Term| t.map(Base::structural);
        formula.c = formula.c.iter().map(sub).collect();
        formula.c_prime = formula.c_prime.iter().map(sub).collect();
    }
    match weighting {
        Weighting::Mean | Weighting::Unweighted => formula,
        Weighting::Product => product_rewrite(&formula),
    }
}

/// Turns a mean formula into the product-weighted one: every indicator factor
/// becomes its weighted matrix, so the per-edge variants of one instance
/// pattern coincide and are kept once. The `1/|E_M|` scale is dropped.
fn product_rewrite(mean: &Formula) -> Formula {
    let mut seen: Vec<Term> = Vec::new();
    for term in mean.expanded_terms() {
        let weighted = term.map(Base::weighted);
        if !seen.contains(&weighted) {
            seen.push(weighted);
        }
    }
    Formula { scale: 1.0, c: seen, add_c_transpose: false, c_prime: Vec::new() }
}

fn indicator(rel: PairRelation, closure: Closure) -> Factor {
    let single = match closure {
        Closure::Functional => Base::J,
        Closure::Structural => Base::Js,
    };
    match rel {
        PairRelation::Missing => f(match closure {
            Closure::Functional => Base::Jn,
            Closure::Structural => Base::J0,
        }),
        PairRelation::Forward => f(single),
        PairRelation::Backward => ft(single),
        PairRelation::Double => f(Base::Jd),
    }
}

/// Formula derived directly from the motif definition: one pattern per
/// anchored automorphism class, with positions `(i, k, j)` for three-vertex
/// motifs and `(i, j)` for two-vertex motifs.
pub fn generic_formula(motif: &Motif, closure: Closure, weighting: Weighting) -> Formula {
    let mut terms = Vec::new();
    for sigma in &motif.anchored_automorphism_reps {
        let mut inverse = vec![0; motif.m];
        for (u, &pos) in sigma.iter().enumerate() {
            inverse[pos] = u;
        }
        // Relation between the motif vertices sitting at positions a < b,
        // oriented from position a to position b.
        let at = |a: usize, b: usize| {
            let (u, v) = (inverse[a], inverse[b]);
            let rel = if u < v {
                motif.relation(u, v)
            } else {
                match motif.relation(v, u) {
                    PairRelation::Forward => PairRelation::Backward,
                    PairRelation::Backward => PairRelation::Forward,
                    other => other,
                }
            };
            (indicator(rel, closure), rel != PairRelation::Missing)
        };

        let slots: Vec<(Factor, bool)> = if motif.m == 2 {
            vec![at(0, 1)]
        } else {
            // h = (i, j), l = (i, k), r = (k, j)
            vec![at(0, 2), at(0, 1), at(1, 2)]
        };
        let build = |fs: &[Factor]| match fs {
            [h] => Term::Pair(*h),
            [h, l, r] => Term::Path { h: *h, l: *l, r: *r },
            _ => unreachable!("motifs have two or three vertices"),
        };
        let factors: Vec<Factor> = slots.iter().map(|s| s.0).collect();
        match weighting {
            Weighting::Mean | Weighting::Unweighted => {
                for (idx, &(_, is_edge)) in slots.iter().enumerate() {
                    if is_edge {
                        let mut fs = factors.clone();
                        fs[idx] = fs[idx].map(Base::weighted);
                        terms.push(build(&fs));
                    }
                }
            }
            Weighting::Product => {
                let fs: Vec<Factor> = factors.iter().map(|x| x.map(Base::weighted)).collect();
                terms.push(build(&fs));
            }
        }
    }
    let scale = match weighting {
        Weighting::Product => 1.0,
        _ => 1.0 / motif.edge_count() as f64,
    };
    Formula { scale, c: terms, add_c_transpose: false, c_prime: Vec::new() }
}
