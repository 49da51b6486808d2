mod bench;
mod files;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use motif_spectral::graph::{
    largest_component, load_edge_list, restrict, write_edge_list, write_id_mapping, LoadOptions,
};
use motif_spectral::mam::{infer_sources, write_matrix_market};
use motif_spectral::spectral::{bipartite_cluster, cluster_similarity, BipartiteDims};
use motif_spectral::{
    aat_similarity, ari, build_mam, cir_matrix, ncut, nmi, sample_ba, sample_bsbm, sample_dsbm, sample_er,
    sweep_profile, BsbmParams, Closure, ClusterConfig, DirectedGraph, DsbmParams, Error, MamSpec, Method,
    MotifName, Partition, SymmetricSparseMatrix, Tau, Weighting,
};
use serde_json::json;

use crate::files::{
    create, parse_matrix, read_partition_for, read_partition_pair, read_vertex_list, write_partition,
};

/// A problem with the command line or the input files rather than with the
/// computation; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(
    name = "motif-spectral",
    version,
    about = "Motif adjacency matrices and motif-based spectral clustering"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "MOTIF_SPECTRAL_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build a motif adjacency matrix and write it in Matrix Market format.
    Mam(MamArgs),
    /// Motif-based spectral clustering of a directed graph.
    Cluster(ClusterArgs),
    /// Cluster both sides of a bipartite graph via collider and expander MAMs.
    Bipartite(BipartiteArgs),
    /// Sample a random graph.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Compare partitions or score cuts.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Time MAM construction over a grid of random graphs.
    Bench(bench::BenchArgs),
    #[command(hide = true)]
    BenchCell(bench::CellArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Edge list: `source target [weight]` per line.
    #[arg(short, long)]
    input: PathBuf,
    /// Skip self-loops instead of rejecting the file.
    #[arg(long)]
    drop_self_loops: bool,
    /// Clamp edge weights to this value.
    #[arg(long)]
    weight_cap: Option<f64>,
}

impl InputArgs {
    fn load(&self) -> Result<DirectedGraph> {
        let opts = LoadOptions { drop_self_loops: self.drop_self_loops, weight_cap: self.weight_cap };
        Ok(load_edge_list(&self.input, opts)?)
    }
}

#[derive(Debug, Args)]
struct MotifArgs {
    /// Comma-separated motifs; their MAMs are summed.
    #[arg(short, long, value_delimiter = ',', required = true)]
    motifs: Vec<MotifName>,
    #[arg(long, default_value = "func")]
    closure: Closure,
    #[arg(long, default_value = "mean")]
    weighting: Weighting,
    #[arg(long, default_value = "auto")]
    method: Method,
}

impl MotifArgs {
    fn spec(&self) -> Result<MamSpec> {
        let spec = MamSpec::new(self.motifs.clone(), self.closure, self.weighting)?;
        Ok(spec.with_method(self.method))
    }
}

#[derive(Debug, Args)]
struct MamArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    motif: MotifArgs,
    /// Matrix Market output (`-` for stdout).
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
    /// Also write the `external_id,internal_id` table; matrix indices are
    /// internal ids plus one.
    #[arg(long)]
    mapping: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KmeansArgs {
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 300)]
    max_iters: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    motif: MotifArgs,
    #[arg(short)]
    k: usize,
    /// Eigenvectors to compute (defaults to max(k, 2)).
    #[arg(short)]
    l: Option<usize>,
    #[command(flatten)]
    kmeans: KmeansArgs,
    /// Regularization: a non-negative number or `mean-degree`. When positive
    /// every vertex is clustered.
    #[arg(long)]
    tau: Option<Tau>,
    /// Planted `node,cluster` CSV; adds ARI and NMI to the summary.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Partition CSV output.
    #[arg(short, long)]
    output: PathBuf,
    /// Summary JSON output (`-` for stdout).
    #[arg(long, default_value = "-")]
    summary: PathBuf,
    /// Debug dump of the embedding columns as CSV.
    #[arg(long)]
    embedding: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BipartiteArgs {
    #[command(flatten)]
    input: InputArgs,
    /// File of source vertex ids, or `auto` for vertices with only out-edges.
    #[arg(long, default_value = "auto")]
    sources: String,
    /// Source clusters.
    #[arg(long)]
    ks: usize,
    /// Source eigenvectors (defaults to max(ks, 2)).
    #[arg(long)]
    ls: Option<usize>,
    /// Destination clusters.
    #[arg(long)]
    kd: usize,
    /// Destination eigenvectors (defaults to max(kd, 2)).
    #[arg(long)]
    ld: Option<usize>,
    #[arg(long, default_value = "mean")]
    weighting: Weighting,
    /// Cluster sources by the `AA^T` baseline instead of the collider MAM.
    #[arg(long)]
    aat: bool,
    #[command(flatten)]
    kmeans: KmeansArgs,
    /// Planted `node,cluster` CSV covering either side.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    source_output: PathBuf,
    #[arg(long)]
    destination_output: PathBuf,
    #[arg(long, default_value = "-")]
    summary: PathBuf,
}

#[derive(Debug, Args)]
struct GenOutput {
    /// Edge list output.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum GenerateCmd {
    /// Directed stochastic block model.
    Dsbm {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Edge probabilities, rows separated by `;`.
        #[arg(long, value_parser = parse_matrix)]
        connection: Matrix,
        /// Poisson weight means, rows separated by `;`.
        #[arg(long, value_parser = parse_matrix)]
        weights: Option<Matrix>,
        #[command(flatten)]
        out: GenOutput,
        /// Planted partition CSV.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Bipartite stochastic block model; sources get the lowest ids.
    Bsbm {
        #[arg(long, value_delimiter = ',', required = true)]
        source_sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        destination_sizes: Vec<usize>,
        #[arg(long, value_parser = parse_matrix)]
        connection: Matrix,
        #[arg(long, value_parser = parse_matrix)]
        weights: Option<Matrix>,
        #[command(flatten)]
        out: GenOutput,
        /// Planted partition CSV; destination blocks are numbered after the
        /// source blocks.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Source id list usable with `bipartite --sources`.
        #[arg(long)]
        sources_output: Option<PathBuf>,
    },
    /// Directed Erdos-Renyi graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: GenOutput,
    },
    /// Barabasi-Albert graph with reciprocated edges.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: GenOutput,
    },
}

type Matrix = Vec<Vec<f64>>;

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum EvalCmd {
    /// Adjusted Rand index over commonly clustered nodes.
    Ari(CompareArgs),
    /// Normalized mutual information over commonly clustered nodes.
    Nmi(CompareArgs),
    /// Ncut of a partition of the MAM, over its clustered nodes.
    Ncut {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        motif: MotifArgs,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cut imbalance ratios between clusters as a CSV matrix.
    Cir {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        pred: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sweep profile of the largest component of the MAM.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        motif: MotifArgs,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
}

fn write_json(path: &Path, v: &serde_json::Value) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_mam(a: &MamArgs) -> Result<()> {
    let g = a.input.load()?;
    let spec = a.motif.spec()?;
    let m = build_mam(&g, &spec)?;
    let mut w = create(&a.output)?;
    write_matrix_market(&m, &mut w)?;
    w.flush()?;
    if let Some(path) = &a.mapping {
        let mut w = create(path)?;
        write_id_mapping(&g, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn cluster_config(k: usize, l: Option<usize>, km: &KmeansArgs) -> ClusterConfig {
    let mut cfg = ClusterConfig::new(k, l.unwrap_or(k.max(2)), km.seed);
    cfg.restarts = km.restarts;
    cfg.max_iters = km.max_iters;
    cfg
}

fn agreement(pred: &Partition, truth: &Partition) -> Result<serde_json::Value> {
    Ok(json!({ "ari": ari(pred, truth)?, "nmi": nmi(pred, truth)? }))
}

fn cmd_cluster(a: &ClusterArgs) -> Result<()> {
    let g = a.input.load()?;
    let spec = a.motif.spec()?;
    let mut cfg = cluster_config(a.k, a.l, &a.kmeans);
    cfg.tau = a.tau;
    let mam = build_mam(&g, &spec)?;
    let c = cluster_similarity(&mam, &cfg)?;
    write_partition(&a.output, g.external_ids(), &c.partition)?;

    if let Some(path) = &a.embedding {
        let mut w = csv::Writer::from_writer(create(path)?);
        let cols = c.embedding.vectors.ncols();
        let mut header = vec!["node".to_string()];
        header.extend((0..cols).map(|j| format!("h{j}")));
        w.write_record(&header)?;
        for (r, &v) in c.component.iter().enumerate() {
            let mut row = vec![g.external_id(v).to_string()];
            row.extend(c.embedding.vectors.row(r).iter().map(f64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
    }

    let local = c.partition.gather(&c.component);
    let mut summary = json!({
        "motifs": spec.motifs().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "closure": spec.closure.to_string(),
        "weighting": spec.weighting.to_string(),
        "method": spec.resolve_method(&g).to_string(),
        "vertices": g.n(),
        "edges": g.edge_count(),
        "component_size": c.component.len(),
        "clustered": c.partition.clustered_count(),
        "k": cfg.k,
        "l": cfg.l,
        "restarts": cfg.restarts,
        "seed": cfg.seed,
        "tau": c.tau,
        "tau_spec": a.tau.map(|t| t.to_string()),
        "ncut": ncut(&c.mam, &local).ok(),
        "wcss": c.wcss,
        "eigenvalues": c.embedding.eigenvalues,
    });
    if let Some(path) = &a.truth {
        let truth = read_partition_for(path, &g)?;
        summary["truth"] = agreement(&c.partition, &truth)?;
    }
    write_json(&a.summary, &summary)
}

fn cmd_bipartite(a: &BipartiteArgs) -> Result<()> {
    let g = a.input.load()?;
    let (sources, destinations) = if a.sources == "auto" {
        infer_sources(&g)
    } else {
        let sources = read_vertex_list(Path::new(&a.sources), &g)?;
        let mut is_source = vec![false; g.n()];
        for &s in &sources {
            is_source[s] = true;
        }
        let destinations = (0..g.n()).filter(|&v| !is_source[v]).collect();
        (sources, destinations)
    };
    let dims = BipartiteDims {
        ks: a.ks,
        ls: a.ls.unwrap_or(a.ks.max(2)),
        kd: a.kd,
        ld: a.ld.unwrap_or(a.kd.max(2)),
    };
    let cfg = cluster_config(a.ks, Some(dims.ls), &a.kmeans);
    let mut b = bipartite_cluster(&g, &sources, &destinations, dims, a.weighting, &cfg)?;
    if a.aat {
        let m = aat_similarity(&g, &b.sources, &b.destinations)?;
        b.source_partition = cluster_similarity(&m, &cfg)?.partition;
    }
    let ids = |vs: &[usize]| vs.iter().map(|&v| g.external_id(v)).collect::<Vec<_>>();
    write_partition(&a.source_output, &ids(&b.sources), &b.source_partition)?;
    write_partition(&a.destination_output, &ids(&b.destinations), &b.destination_partition)?;

    let mut summary = json!({
        "weighting": a.weighting.to_string(),
        "source_similarity": if a.aat { "aat" } else { "collider" },
        "sources": b.sources.len(),
        "destinations": b.destinations.len(),
        "clustered_sources": b.source_partition.clustered_count(),
        "clustered_destinations": b.destination_partition.clustered_count(),
        "ks": dims.ks, "ls": dims.ls, "kd": dims.kd, "ld": dims.ld,
        "seed": cfg.seed,
    });
    if let Some(path) = &a.truth {
        let truth = read_partition_for(path, &g)?;
        summary["source_truth"] = agreement(&b.source_partition, &truth.gather(&b.sources))?;
        summary["destination_truth"] = agreement(&b.destination_partition, &truth.gather(&b.destinations))?;
    }
    write_json(&a.summary, &summary)
}

fn save_graph(g: &DirectedGraph, out: &GenOutput) -> Result<()> {
    let mut w = create(&out.output)?;
    write_edge_list(g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_generate(c: &GenerateCmd) -> Result<()> {
    match c {
        GenerateCmd::Dsbm { sizes, connection, weights, out, truth } => {
            let (g, planted) = sample_dsbm(&DsbmParams {
                block_sizes: sizes.clone(),
                connection: connection.clone(),
                weights: weights.clone(),
                seed: out.seed,
            })?;
            save_graph(&g, out)?;
            if let Some(path) = truth {
                write_partition(path, g.external_ids(), &planted)?;
            }
        }
        GenerateCmd::Bsbm {
            source_sizes,
            destination_sizes,
            connection,
            weights,
            out,
            truth,
            sources_output,
        } => {
            let s = sample_bsbm(&BsbmParams {
                source_sizes: source_sizes.clone(),
                destination_sizes: destination_sizes.clone(),
                connection: connection.clone(),
                weights: weights.clone(),
                seed: out.seed,
            })?;
            save_graph(&s.graph, out)?;
            if let Some(path) = truth {
                let shift = source_sizes.len();
                let labels: Vec<usize> = s
                    .source_truth
                    .labels()
                    .iter()
                    .flatten()
                    .copied()
                    .chain(s.destination_truth.labels().iter().flatten().map(|l| l + shift))
                    .collect();
                write_partition(path, s.graph.external_ids(), &Partition::from_labels(labels))?;
            }
            if let Some(path) = sources_output {
                let mut w = create(path)?;
                for &v in &s.sources {
                    writeln!(w, "{}", s.graph.external_id(v))?;
                }
                w.flush()?;
            }
        }
        GenerateCmd::Er { n, p, out } => {
            if !(0.0..=1.0).contains(p) {
                bail!(UsageError(format!("--p {p} outside [0, 1]")));
            }
            save_graph(&sample_er(*n, *p, out.seed)?, out)?;
        }
        GenerateCmd::Ba { n, m, out } => save_graph(&sample_ba(*n, *m, out.seed)?, out)?,
    }
    Ok(())
}

fn print_metric(name: &str, value: f64, extra: serde_json::Value, as_json: bool) -> Result<()> {
    if as_json {
        let mut v = extra;
        v[name] = json!(value);
        println!("{}", serde_json::to_string(&v)?);
    } else {
        println!("{name}={value}");
        if let Some(obj) = extra.as_object() {
            for (k, v) in obj {
                println!("{k}={v}");
            }
        }
    }
    Ok(())
}

fn component_mam(input: &InputArgs, motif: &MotifArgs) -> Result<(DirectedGraph, SymmetricSparseMatrix)> {
    let g = input.load()?;
    let m = build_mam(&g, &motif.spec()?)?;
    Ok((g, m))
}

fn cmd_eval(c: &EvalCmd) -> Result<()> {
    match c {
        EvalCmd::Ari(a) | EvalCmd::Nmi(a) => {
            let (pred, truth) = read_partition_pair(&a.pred, &a.truth)?;
            let (name, value) = match c {
                EvalCmd::Ari(_) => ("ari", ari(&pred, &truth)?),
                _ => ("nmi", nmi(&pred, &truth)?),
            };
            let common =
                pred.labels().iter().zip(truth.labels()).filter(|(x, y)| x.is_some() && y.is_some()).count();
            print_metric(name, value, json!({ "common_nodes": common }), a.json)
        }
        EvalCmd::Ncut { input, motif, pred, json: as_json } => {
            let (g, m) = component_mam(input, motif)?;
            let p = read_partition_for(pred, &g)?;
            let clustered: Vec<usize> = (0..g.n()).filter(|&v| p.label(v).is_some()).collect();
            let sub = restrict(&m, &clustered)?;
            let value = ncut(&sub, &p.gather(&clustered))?;
            print_metric("ncut", value, json!({ "clustered": clustered.len() }), *as_json)
        }
        EvalCmd::Cir { input, pred, output, json: as_json } => {
            let g = input.load()?;
            let p = read_partition_for(pred, &g)?;
            let cir = cir_matrix(&g, &p)?;
            let mut w = create(output)?;
            if *as_json {
                let rows: Vec<Vec<f64>> = cir.ratio.rows().into_iter().map(|r| r.to_vec()).collect();
                let cuts: Vec<Vec<f64>> = cir.cut.rows().into_iter().map(|r| r.to_vec()).collect();
                serde_json::to_writer(&mut w, &json!({ "cir": rows, "cut": cuts }))?;
                writeln!(w)?;
            } else {
                let mut cw = csv::Writer::from_writer(&mut w);
                let k = cir.ratio.nrows();
                let mut header = vec!["cluster".to_string()];
                header.extend((0..k).map(|j| j.to_string()));
                cw.write_record(&header)?;
                for i in 0..k {
                    let mut row = vec![i.to_string()];
                    row.extend(cir.ratio.row(i).iter().map(f64::to_string));
                    cw.write_record(&row)?;
                }
                cw.flush()?;
            }
            w.flush()?;
            Ok(())
        }
        EvalCmd::Sweep { input, motif, output } => {
            let (g, m) = component_mam(input, motif)?;
            let comp = largest_component(&m);
            let s = sweep_profile(&restrict(&m, &comp)?)?;
            let mut w = csv::Writer::from_writer(create(output)?);
            w.write_record(["prefix", "node", "ncut"])?;
            for (i, &v) in s.order.iter().enumerate() {
                let value = s.ncut.get(i).map_or(String::new(), f64::to_string);
                w.write_record([(i + 1).to_string(), g.external_id(comp[v]).to_string(), value])?;
            }
            w.flush()?;
            eprintln!("argmin={}", s.argmin);
            eprintln!("min_ncut={}", s.min);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!(UsageError("--threads must be at least 1".into()));
        }
        // Bench cells run in child processes and read the same variable.
        std::env::set_var("MOTIF_SPECTRAL_THREADS", t.to_string());
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    match &cli.command {
        Cmd::Mam(a) => cmd_mam(a),
        Cmd::Cluster(a) => cmd_cluster(a),
        Cmd::Bipartite(a) => cmd_bipartite(a),
        Cmd::Generate(c) => cmd_generate(c),
        Cmd::Eval(c) => cmd_eval(c),
        Cmd::Bench(a) => bench::run(a),
        Cmd::BenchCell(a) => bench::run_cell(a),
    }
}

fn is_usage(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        if e.is::<UsageError>() {
            return true;
        }
        matches!(
            e.downcast_ref::<Error>(),
            Some(
                Error::Parse { .. }
                    | Error::DuplicateEdge { .. }
                    | Error::SelfLoop(_)
                    | Error::InvalidWeight { .. }
                    | Error::VertexOutOfRange { .. }
                    | Error::UnsortedIds
                    | Error::UnknownMotif(_)
                    | Error::InvalidSpec(_)
                    | Error::NotBipartite { .. }
                    | Error::InvalidParameter(_)
                    | Error::DimensionMismatch(_)
            )
        )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
