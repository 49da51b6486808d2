use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{DirectedGraph, Edge};
use crate::error::{Error, Result};

/// Options for [`load_edge_list`].
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Silently skip `v v w` lines instead of failing.
    pub drop_self_loops: bool,
    /// Weights above the cap are replaced by the cap.
    pub weight_cap: Option<f64>,
}

/// Reads an edge-list file: one `source target [weight]` edge per line,
/// separated by tabs or spaces. Lines starting with `#` and blank lines are
/// ignored. Vertex ids are remapped to `0..n` in ascending numeric order.
pub fn load_edge_list(path: impl AsRef<Path>, opts: LoadOptions) -> Result<DirectedGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), opts).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_edge_list(reader: impl BufRead, opts: LoadOptions) -> Result<DirectedGraph> {
    if let Some(cap) = opts.weight_cap {
        if !(cap.is_finite() && cap > 0.0) {
            return Err(Error::InvalidParameter(format!("weight cap must be positive, got {cap}")));
        }
    }

    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<edge list>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 2 or 3 fields, found {}", fields.len()),
            });
        }
        let parse_id = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| Error::Parse { line: lineno, message: format!("invalid vertex id `{s}`") })
        };
        let src = parse_id(fields[0])?;
        let dst = parse_id(fields[1])?;
        let mut weight = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| Error::Parse { line: lineno, message: format!("invalid weight `{s}`") })?,
            None => 1.0,
        };
        if src == dst {
            if opts.drop_self_loops {
                continue;
            }
            return Err(Error::SelfLoop(src));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidWeight { source_id: src, target_id: dst, weight });
        }
        if let Some(cap) = opts.weight_cap {
            weight = weight.min(cap);
        }
        if !seen.insert((src, dst)) {
            return Err(Error::DuplicateEdge { source_id: src, target_id: dst });
        }
        raw.push((src, dst, weight));
    }

    let ids: Vec<u64> =
        raw.iter().flat_map(|&(s, t, _)| [s, t]).collect::<BTreeSet<_>>().into_iter().collect();
    let index = |id: u64| ids.binary_search(&id).expect("id collected above");
    let edges: Vec<Edge> = raw.iter().map(|&(s, t, w)| Edge::new(index(s), index(t), w)).collect();
    DirectedGraph::with_external_ids(ids.len(), edges, ids)
}

/// Writes the graph in edge-list format using external ids. Weights are
/// printed with the shortest representation that parses back bit-identically.
pub fn write_edge_list(g: &DirectedGraph, mut out: impl Write) -> std::io::Result<()> {
    for e in g.edges() {
        writeln!(out, "{}\t{}\t{}", g.external_id(e.source), g.external_id(e.target), e.weight)?;
    }
    Ok(())
}

/// Writes the `external_id,internal_id` mapping table.
pub fn write_id_mapping(g: &DirectedGraph, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "external_id,internal_id")?;
    for (internal, external) in g.external_ids().iter().enumerate() {
        writeln!(out, "{external},{internal}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str, opts: LoadOptions) -> Result<DirectedGraph> {
        parse_edge_list(text.as_bytes(), opts)
    }

    #[test]
    fn reads_weighted_pairs() {
        let g = parse("0\t1\t2.5\n1\t0\t1.0\n", LoadOptions::default()).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges()[0], Edge::new(0, 1, 2.5));
    }

    #[test]
    fn comments_blanks_and_default_weight() {
        let g = parse("# header\n\n10 30\n", LoadOptions::default()).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges()[0].weight, 1.0);
        assert_eq!(g.external_ids(), &[10, 30]);
    }

    #[test]
    fn ids_are_remapped_in_numeric_order() {
        let g = parse("100 7 1\n7 42 1\n", LoadOptions::default()).unwrap();
        assert_eq!(g.external_ids(), &[7, 42, 100]);
        assert_eq!(g.edges()[0], Edge::new(0, 1, 1.0));
        assert_eq!(g.edges()[1], Edge::new(2, 0, 1.0));
    }

    #[test]
    fn self_loops_error_or_drop() {
        let text = "0 1 1.0\n3 3 1.0\n";
        assert!(matches!(parse(text, LoadOptions::default()), Err(Error::SelfLoop(3))));
        let g = parse(text, LoadOptions { drop_self_loops: true, ..Default::default() }).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.n(), 2);
    }

    #[test]
    fn weight_cap_clamps() {
        let g = parse(
            "0 1 5\n1 2 20000\n2 0 7\n",
            LoadOptions { weight_cap: Some(10_000.0), ..Default::default() },
        )
        .unwrap();
        let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![5.0, 10_000.0, 7.0]);
    }

    #[test]
    fn malformed_lines_report_line_number() {
        match parse("0 1\n0 x 1\n", LoadOptions::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0 1 2 3\n", LoadOptions::default()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("0 1 1\n0 1 2\n", LoadOptions::default()), Err(Error::DuplicateEdge { .. })));
        assert!(matches!(parse("0 1 -2\n", LoadOptions::default()), Err(Error::InvalidWeight { .. })));
    }

    #[test]
    fn id_mapping_csv() {
        let g = parse("5 9 1\n", LoadOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_id_mapping(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "external_id,internal_id\n5,0\n9,1\n");
    }

    proptest! {
        #[test]
        fn serialization_round_trips_exactly(
            edges in proptest::collection::btree_map(
                (0u64..50, 0u64..50),
                prop_oneof![1e-6f64..1e6, (1u32..100).prop_map(f64::from)],
                1..40,
            )
        ) {
            let text: String = edges
                .iter()
                .filter(|((s, t), _)| s != t)
                .map(|((s, t), w)| format!("{s}\t{t}\t{w}\n"))
                .collect();
            prop_assume!(!text.is_empty());
            let g = parse(&text, LoadOptions::default()).unwrap();
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).unwrap();
            let back = parse(std::str::from_utf8(&buf).unwrap(), LoadOptions::default()).unwrap();
            prop_assert_eq!(&back, &g);
            for (e, b) in g.edges().iter().zip(back.edges()) {
                prop_assert_eq!(e.weight.to_bits(), b.weight.to_bits());
            }
        }
    }
}
