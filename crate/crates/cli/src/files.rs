//! Partition CSVs, vertex lists and matrix flags.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use motif_spectral::{DirectedGraph, Partition};

use crate::UsageError;

/// Opens `path` for writing, or stdout for `-`.
pub fn create(path: &Path) -> Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

/// Writes `node,cluster` rows with external node ids and -1 for unclustered
/// nodes.
pub fn write_partition(path: &Path, ids: &[u64], p: &Partition) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["node", "cluster"])?;
    for (id, label) in ids.iter().zip(p.signed_labels()) {
        w.write_record([id.to_string(), label.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `node,cluster` CSV into `(external id, label)` rows; -1 marks an
/// unclustered node.
pub fn read_partition_rows(path: &Path) -> Result<Vec<(u64, i64)>> {
    let mut r = csv::Reader::from_reader(open(path)?);
    let mut rows = Vec::new();
    let mut seen = HashMap::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let field = |i: usize| {
            rec.get(i)
                .map(str::trim)
                .ok_or_else(|| UsageError(format!("{}: row {} has too few fields", path.display(), line + 2)))
        };
        let node: u64 = field(0)?
            .parse()
            .map_err(|_| UsageError(format!("{}: row {}: bad node id", path.display(), line + 2)))?;
        let label: i64 = field(1)?
            .parse()
            .map_err(|_| UsageError(format!("{}: row {}: bad cluster label", path.display(), line + 2)))?;
        if label < -1 {
            bail!(UsageError(format!("{}: row {}: label {label} below -1", path.display(), line + 2)));
        }
        if seen.insert(node, ()).is_some() {
            bail!(UsageError(format!("{}: node {node} listed twice", path.display())));
        }
        rows.push((node, label));
    }
    Ok(rows)
}

/// Partition over the vertices of `g`; vertices missing from the file are
/// unclustered and file rows naming unknown vertices are ignored.
pub fn read_partition_for(path: &Path, g: &DirectedGraph) -> Result<Partition> {
    let index: HashMap<u64, usize> = g.external_ids().iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut labels = vec![-1i64; g.n()];
    for (node, label) in read_partition_rows(path)? {
        if let Some(&v) = index.get(&node) {
            labels[v] = label;
        }
    }
    Ok(Partition::from_signed_labels(&labels)?)
}

/// Aligns two partition files on the union of their node ids.
pub fn read_partition_pair(a: &Path, b: &Path) -> Result<(Partition, Partition)> {
    let (ra, rb) = (read_partition_rows(a)?, read_partition_rows(b)?);
    let mut nodes: Vec<u64> = ra.iter().chain(&rb).map(|r| r.0).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let pos: HashMap<u64, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let fill = |rows: &[(u64, i64)]| {
        let mut labels = vec![-1i64; nodes.len()];
        for &(node, label) in rows {
            labels[pos[&node]] = label;
        }
        Partition::from_signed_labels(&labels)
    };
    Ok((fill(&ra)?, fill(&rb)?))
}

/// Reads one external vertex id per line (`#` comments and blank lines
/// skipped) and maps them to internal ids of `g`.
pub fn read_vertex_list(path: &Path, g: &DirectedGraph) -> Result<Vec<usize>> {
    let index: HashMap<u64, usize> = g.external_ids().iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut out = Vec::new();
    for (no, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let id: u64 = t
            .parse()
            .map_err(|_| UsageError(format!("{}:{}: bad vertex id `{t}`", path.display(), no + 1)))?;
        match index.get(&id) {
            Some(&v) => out.push(v),
            None => bail!(UsageError(format!(
                "{}:{}: vertex {id} does not occur in the graph",
                path.display(),
                no + 1
            ))),
        }
    }
    Ok(out)
}

/// Parses `a,b;c,d` into rows.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<f64>>, String> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    let x = x.trim();
                    x.parse::<f64>().map_err(|_| format!("`{x}` is not a number"))
                })
                .collect()
        })
        .collect()
}
