//! Matrix Market coordinate files for symmetric matrices.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sparse::SymmetricSparseMatrix;

/// Writes `m` as `coordinate real symmetric`, lower triangle, 1-based,
/// column by column.
pub fn write_matrix_market(m: &SymmetricSparseMatrix, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", m.n(), m.n(), m.nnz_stored())?;
    // Upper-triangle row r is lower-triangle column r.
    for (r, c, v) in m.iter_upper() {
        writeln!(out, "{} {} {}", c + 1, r + 1, v)?;
    }
    Ok(())
}

/// Reads a square `coordinate` file with `symmetric` or `general` symmetry
/// and a `real`, `integer` or `pattern` field. General files must be
/// symmetric.
pub fn read_matrix_market(reader: impl BufRead) -> Result<SymmetricSparseMatrix> {
    let mut lines = reader.lines().enumerate();
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let header = header.map_err(|e| Error::io("<matrix market>", e))?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "missing %%MatrixMarket matrix header".into()));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format `{}`", tokens[2])));
    }
    let pattern = match tokens[3].as_str() {
        "real" | "integer" => false,
        "pattern" => true,
        other => return Err(parse_err(1, format!("unsupported field `{other}`"))),
    };
    let symmetric = match tokens[4].as_str() {
        "symmetric" => true,
        "general" => false,
        other => return Err(parse_err(1, format!("unsupported symmetry `{other}`"))),
    };

    let mut size: Option<(usize, usize)> = None;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<matrix market>", e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        let num =
            |s: &str| s.parse::<usize>().map_err(|_| parse_err(lineno, format!("invalid integer `{s}`")));
        let Some((n, nnz)) = size else {
            if fields.len() != 3 {
                return Err(parse_err(lineno, "expected `rows cols entries`".into()));
            }
            let (r, c) = (num(fields[0])?, num(fields[1])?);
            if r != c {
                return Err(parse_err(lineno, format!("matrix is {r}x{c}, not square")));
            }
            size = Some((r, num(fields[2])?));
            entries.reserve(num(fields[2])?);
            continue;
        };
        let want = if pattern { 2 } else { 3 };
        if fields.len() != want {
            return Err(parse_err(lineno, format!("expected {want} fields")));
        }
        let (i, j) = (num(fields[0])?, num(fields[1])?);
        if i == 0 || j == 0 || i > n || j > n {
            return Err(parse_err(lineno, format!("index ({i}, {j}) out of range")));
        }
        let v = if pattern {
            1.0
        } else {
            fields[2]
                .parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("invalid value `{}`", fields[2])))?
        };
        if entries.len() == nnz {
            return Err(parse_err(lineno, "more entries than declared".into()));
        }
        entries.push((i - 1, j - 1, v));
    }
    let (n, nnz) = size.ok_or_else(|| parse_err(1, "missing size line".into()))?;
    if entries.len() != nnz {
        return Err(parse_err(0, format!("declared {nnz} entries, found {}", entries.len())));
    }
    if symmetric {
        return SymmetricSparseMatrix::from_triplets(n, entries);
    }
    let mut lower: Vec<(usize, usize, f64)> = Vec::new();
    let mut upper: Vec<(usize, usize, f64)> = Vec::new();
    for (i, j, v) in entries {
        if i > j {
            lower.push((j, i, v));
        } else {
            upper.push((i, j, v));
        }
    }
    lower.sort_by_key(|&(i, j, _)| (i, j));
    let mut off_upper: Vec<(usize, usize, f64)> = upper.iter().copied().filter(|&(i, j, _)| i != j).collect();
    off_upper.sort_by_key(|&(i, j, _)| (i, j));
    if lower != off_upper {
        return Err(Error::InvalidParameter("general matrix is not symmetric".into()));
    }
    SymmetricSparseMatrix::from_triplets(n, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = SymmetricSparseMatrix::from_triplets(3, [(0, 1, 7.0), (1, 2, 0.25)]).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n2 1 7\n3 2 0.25\n");
        assert_eq!(read_matrix_market(text.as_bytes()).unwrap(), m);
    }

    #[test]
    fn reads_general_symmetric_pattern() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n% c\n2 2 2\n1 2\n2 1\n";
        let m = read_matrix_market(text.as_bytes()).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        let bad = "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n";
        assert!(read_matrix_market(bad.as_bytes()).is_err());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_matrix_market("%%MatrixMarket matrix array real general\n".as_bytes()).is_err());
        let short = "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1.0\n";
        assert!(read_matrix_market(short.as_bytes()).is_err());
    }
}
