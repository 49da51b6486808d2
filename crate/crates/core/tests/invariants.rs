use motif_spectral::eval::{ari, cir_matrix, ncut, nmi, sweep_profile};
use motif_spectral::graph::{connected_components, largest_component, restrict};
use motif_spectral::spectral::rw_laplacian;
use motif_spectral::{
    build_mam, cluster, sample_ba, sample_dsbm, Closure, ClusterConfig, DirectedGraph, DsbmParams, Edge,
    MamSpec, MotifName, Partition, SymmetricSparseMatrix, Weighting,
};
use proptest::prelude::*;

const WEIGHTINGS: [Weighting; 3] = [Weighting::Unweighted, Weighting::Mean, Weighting::Product];

fn arb_graph(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
    (3usize..=max_n, 0.1f64..0.9).prop_flat_map(|(n, p)| {
        let weight = prop_oneof![(1u32..=10).prop_map(f64::from), 0.05f64..10.0];
        proptest::collection::vec((proptest::bool::weighted(p), weight), n * n).prop_map(move |cells| {
            let edges = cells.into_iter().enumerate().filter_map(|(idx, (keep, w))| {
                let (s, t) = (idx / n, idx % n);
                (keep && s != t).then(|| Edge::new(s, t, w))
            });
            DirectedGraph::new(n, edges).unwrap()
        })
    })
}

fn arb_similarity(max_n: usize) -> impl Strategy<Value = SymmetricSparseMatrix> {
    (2usize..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(prop_oneof![Just(0.0), 0.1f64..5.0], n * (n - 1) / 2).prop_map(
            move |vals| {
                let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
                SymmetricSparseMatrix::from_triplets(
                    n,
                    pairs.zip(vals).filter(|(_, v)| *v > 0.0).map(|((i, j), v)| (i, j, v)),
                )
                .unwrap()
            },
        )
    })
}

fn arb_labels(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..k, n)
}

fn mam(g: &DirectedGraph, name: MotifName, closure: Closure, weighting: Weighting) -> SymmetricSparseMatrix {
    build_mam(g, &MamSpec::single(name, closure, weighting)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mams_are_symmetric_nonnegative_with_zero_diagonal(g in arb_graph(7)) {
        for name in MotifName::ALL {
            for closure in [Closure::Functional, Closure::Structural] {
                for weighting in WEIGHTINGS {
                    let d = mam(&g, name, closure, weighting).to_dense();
                    prop_assert_eq!(&d, &d.t());
                    prop_assert!(d.diag().iter().all(|&v| v == 0.0));
                    prop_assert!(d.iter().all(|&v| v >= 0.0));
                }
            }
        }
    }

    #[test]
    fn structural_is_dominated_by_functional(g in arb_graph(7)) {
        for name in MotifName::ALL {
            for weighting in [Weighting::Unweighted, Weighting::Mean] {
                let f = mam(&g, name, Closure::Functional, weighting).to_dense();
                let s = mam(&g, name, Closure::Structural, weighting).to_dense();
                for (s, f) in s.iter().zip(f.iter()) {
                    prop_assert!(*s <= *f + 1e-12 * (1.0 + f));
                }
            }
        }
    }

    #[test]
    fn unweighted_entries_count_instances(g in arb_graph(7)) {
        for name in MotifName::ALL {
            for closure in [Closure::Functional, Closure::Structural] {
                let d = mam(&g, name, closure, Weighting::Unweighted).to_dense();
                prop_assert!(d.iter().all(|v| v.fract() == 0.0));
            }
        }
    }

    #[test]
    fn all_double_motifs_ignore_the_closure(g in arb_graph(7)) {
        for name in [MotifName::Md, MotifName::M4] {
            for weighting in WEIGHTINGS {
                prop_assert_eq!(
                    mam(&g, name, Closure::Functional, weighting),
                    mam(&g, name, Closure::Structural, weighting)
                );
            }
        }
    }

    #[test]
    fn mean_weighting_scales_linearly(g in arb_graph(6), c in 0.5f64..4.0) {
        let scaled = DirectedGraph::new(
            g.n(),
            g.edges().iter().map(|e| Edge::new(e.source, e.target, e.weight * c)),
        ).unwrap();
        for name in MotifName::ALL {
            let a = mam(&g, name, Closure::Functional, Weighting::Mean).scaled(c);
            let b = mam(&scaled, name, Closure::Functional, Weighting::Mean);
            prop_assert!(a.max_abs_diff(&b) <= 1e-9 * (1.0 + a.max_abs()));
        }
    }

    #[test]
    fn laplacian_rows_sum_to_zero(m in arb_similarity(9)) {
        let comp = largest_component(&m);
        prop_assume!(comp.len() >= 2);
        let l = rw_laplacian(&restrict(&m, &comp).unwrap()).unwrap();
        prop_assert!(l.row_sums().iter().all(|s| s.abs() <= 1e-12));
    }

    #[test]
    fn cir_is_antisymmetric_and_bounded(g in arb_graph(7), labels in arb_labels(7, 3)) {
        let p = Partition::from_labels(labels[..g.n()].to_vec());
        let c = cir_matrix(&g, &p).unwrap();
        prop_assert_eq!(&c.ratio, &c.ratio.t().mapv(|v| -v));
        prop_assert!(c.ratio.iter().all(|v| (-0.5..=0.5).contains(v)));
    }

    #[test]
    fn agreement_scores_ignore_label_names(
        a in arb_labels(12, 3),
        b in arb_labels(12, 4),
        shift in 1usize..3,
    ) {
        let pa = Partition::from_labels(a.clone());
        let pb = Partition::from_labels(b);
        let renamed = Partition::from_labels(a.iter().map(|l| (l + shift) % 3).collect());
        prop_assert_eq!(ari(&pa, &pa).unwrap(), 1.0);
        prop_assert_eq!(ari(&pa, &pb).unwrap(), ari(&renamed, &pb).unwrap());
        prop_assert_eq!(ari(&pa, &pb).unwrap(), ari(&pb, &pa).unwrap());
        prop_assert_eq!(nmi(&pa, &pb).unwrap(), nmi(&renamed, &pb).unwrap());
        let v = nmi(&pa, &pb).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn ncut_is_scale_invariant(m in arb_similarity(8), labels in arb_labels(8, 2), c in 0.1f64..10.0) {
        let p = Partition::from_labels(labels[..m.n()].to_vec());
        if let Ok(a) = ncut(&m, &p) {
            let b = ncut(&m.scaled(c), &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
        }
    }

    #[test]
    fn sweep_never_beats_the_best_bipartition(m in arb_similarity(9)) {
        prop_assume!(connected_components(&m).iter().all(|&c| c == 0));
        let s = sweep_profile(&m).unwrap();
        let n = m.n();
        prop_assert_eq!(s.ncut.len(), n - 1);
        prop_assert!(s.ncut.iter().all(|&v| v >= 0.0));
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << (n - 1)) {
            let p = Partition::from_labels((0..n).map(|v| ((mask >> v) & 1) as usize).collect());
            best = best.min(ncut(&m, &p).unwrap());
        }
        prop_assert!(s.min >= best - 1e-12);
        let mut prefix = vec![0usize; n];
        for &v in &s.order[..s.argmin] {
            prefix[v] = 1;
        }
        let direct = ncut(&m, &Partition::from_labels(prefix)).unwrap();
        prop_assert!((direct - s.min).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn clustering_ignores_uniform_scaling(seed in 0u64..1000, c in 0.01f64..100.0) {
        let (g, _) = sample_dsbm(&DsbmParams {
            block_sizes: vec![25, 25],
            connection: vec![vec![0.3, 0.05], vec![0.05, 0.3]],
            weights: None,
            seed,
        }).unwrap();
        let m = mam(&g, MotifName::Ms, Closure::Functional, Weighting::Mean);
        let sub = restrict(&m, &largest_component(&m)).unwrap();
        let cfg = ClusterConfig::new(2, 2, seed);
        let a = cluster(&sub, &cfg).unwrap();
        let b = cluster(&sub.scaled(c), &cfg).unwrap();
        prop_assert_eq!(ari(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn samplers_are_reproducible(seed in any::<u64>()) {
        let p = DsbmParams {
            block_sizes: vec![20, 30],
            connection: vec![vec![0.2, 0.1], vec![0.3, 0.4]],
            weights: Some(vec![vec![2.0, 0.5], vec![1.0, 3.0]]),
            seed,
        };
        let (g1, t1) = sample_dsbm(&p).unwrap();
        let (g2, t2) = sample_dsbm(&p).unwrap();
        prop_assert_eq!(&g1, &g2);
        prop_assert_eq!(&t1, &t2);
        prop_assert_eq!(t1.parts().iter().map(Vec::len).collect::<Vec<_>>(), vec![20, 30]);
        prop_assert!(g1.edges().iter().all(|e| e.weight >= 1.0 && e.weight.fract() == 0.0));
        prop_assert_eq!(sample_ba(60, 3, seed).unwrap(), sample_ba(60, 3, seed).unwrap());
    }
}

#[test]
fn dsbm_block_densities_match_connection_probabilities() {
    let f = [[0.9, 0.3], [0.05, 0.5]];
    let sizes = [60usize, 40];
    let mut counts = [[0usize; 2]; 2];
    let seeds = 10;
    for seed in 0..seeds {
        let (g, truth) = sample_dsbm(&DsbmParams {
            block_sizes: sizes.to_vec(),
            connection: f.iter().map(|r| r.to_vec()).collect(),
            weights: None,
            seed,
        })
        .unwrap();
        for e in g.edges() {
            counts[truth.label(e.source).unwrap()][truth.label(e.target).unwrap()] += 1;
        }
    }
    for a in 0..2 {
        for b in 0..2 {
            let trials = (seeds as usize * sizes[a] * (sizes[b] - usize::from(a == b))) as f64;
            let p = f[a][b];
            let sd = (trials * p * (1.0 - p)).sqrt();
            assert!(
                (counts[a][b] as f64 - trials * p).abs() <= 4.0 * sd,
                "block ({a}, {b}): {} edges, expected {}",
                counts[a][b],
                trials * p
            );
        }
    }
}

#[test]
fn weighted_bipartite_densities_account_for_zero_draws() {
    use motif_spectral::{sample_bsbm, BsbmParams};
    let fb = [[0.9, 0.3, 0.0], [0.0, 0.3, 0.9]];
    let lambda = [[3.0, 1.0, 0.0], [0.0, 1.0, 3.0]];
    let s = sample_bsbm(&BsbmParams {
        source_sizes: vec![200, 200],
        destination_sizes: vec![200, 200, 200],
        connection: fb.iter().map(|r| r.to_vec()).collect(),
        weights: Some(lambda.iter().map(|r| r.to_vec()).collect()),
        seed: 5,
    })
    .unwrap();
    let mut counts = [[0usize; 3]; 2];
    let ns = s.sources.len();
    for e in s.graph.edges() {
        let a = s.source_truth.label(e.source).unwrap();
        let b = s.destination_truth.label(e.target - ns).unwrap();
        counts[a][b] += 1;
    }
    for a in 0..2 {
        for b in 0..3 {
            let p = fb[a][b] * (1.0 - (-lambda[a][b]).exp());
            let trials = 200.0 * 200.0;
            let sd = (trials * p * (1.0 - p)).sqrt();
            assert!((counts[a][b] as f64 - trials * p).abs() <= 4.0 * sd + 1e-9);
        }
    }
}
