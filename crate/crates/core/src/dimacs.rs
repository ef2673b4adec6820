//! DIMACS-style edge lists.
//!
//! ```text
//! c optional comments
//! p edge <n> <m>
//! e <u> <v>        (m lines, 1-based, u != v, each pair at most once)
//! ```

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::graph::{Builder, Graph, MAX_VERTICES};
use crate::{Error, Result};

/// Parses a DIMACS edge list. Errors carry the 1-based line number.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(Builder, usize)> = None;
    let mut seen_edges = 0usize;
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut fields = line.split_ascii_whitespace();
        match fields.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "second problem line"));
                }
                if fields.next() != Some("edge") {
                    return Err(Error::parse(line_no, "expected `p edge <n> <m>`"));
                }
                let n = number(fields.next(), line_no, "vertex count")?;
                let m = number(fields.next(), line_no, "edge count")?;
                if fields.next().is_some() {
                    return Err(Error::parse(line_no, "trailing fields on problem line"));
                }
                if n > MAX_VERTICES {
                    return Err(Error::parse(
                        line_no,
                        format!("{n} vertices exceeds the supported maximum of {MAX_VERTICES}"),
                    ));
                }
                if m > n * n.saturating_sub(1) / 2 {
                    return Err(Error::parse(
                        line_no,
                        format!("{m} edges cannot fit in a simple graph on {n} vertices"),
                    ));
                }
                header = Some((Builder::new(n), m));
            }
            Some("e") => {
                let Some((builder, m)) = header.as_mut() else {
                    return Err(Error::parse(line_no, "edge before problem line"));
                };
                let u = number(fields.next(), line_no, "endpoint")?;
                let v = number(fields.next(), line_no, "endpoint")?;
                if fields.next().is_some() {
                    return Err(Error::parse(line_no, "trailing fields on edge line"));
                }
                let n = builder.n;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(Error::parse(
                        line_no,
                        format!("edge ({u}, {v}) out of range 1..={n}"),
                    ));
                }
                if u == v {
                    return Err(Error::parse(line_no, format!("self-loop at vertex {u}")));
                }
                if builder.has_edge(u - 1, v - 1) {
                    return Err(Error::parse(line_no, format!("duplicate edge ({u}, {v})")));
                }
                seen_edges += 1;
                if seen_edges > *m {
                    return Err(Error::parse(
                        line_no,
                        format!("more edge lines than the declared {m}"),
                    ));
                }
                builder.add_edge(u - 1, v - 1);
            }
            Some(other) => {
                return Err(Error::parse(
                    line_no,
                    format!("unknown line type `{other}`"),
                ));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }

    let Some((builder, m)) = header else {
        return Err(Error::parse(last_line.max(1), "missing problem line"));
    };
    if seen_edges != m {
        return Err(Error::parse(
            last_line.max(1),
            format!("declared {m} edges but found {seen_edges}"),
        ));
    }
    Ok(builder.finish())
}

fn number(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let field = field.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{field}`")))
}

/// Writes `g` as DIMACS: the problem line, then edges in row-major order.
pub fn write_dimacs_to<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "p edge {} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1)?;
    }
    out.flush()
}

pub fn to_dimacs_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_dimacs_to(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

pub fn read_dimacs(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    parse_dimacs(&text).map_err(|e| e.in_file(path))
}

pub fn write_dimacs(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::from(e).in_file(path))?;
    write_dimacs_to(g, io::BufWriter::new(file)).map_err(|e| Error::from(e).in_file(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rado_prefix;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_path() {
        let g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_dimacs("c hello\n\np edge 2 1\nc mid\ne 2 1\n").unwrap();
        assert_eq!(g, Graph::complete(2));
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(line_of(parse_dimacs("p edge 3 1\ne 1 9\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_dimacs("p edge 3 1\ne 0 1\n").unwrap_err()), 2);
    }

    #[test]
    fn rejects_duplicates_and_loops() {
        assert_eq!(
            line_of(parse_dimacs("p edge 3 2\ne 1 2\ne 2 1\n").unwrap_err()),
            3
        );
        assert_eq!(line_of(parse_dimacs("p edge 3 1\ne 2 2\n").unwrap_err()), 2);
    }

    #[test]
    fn rejects_malformed_headers() {
        assert_eq!(line_of(parse_dimacs("p col 3 0\n").unwrap_err()), 1);
        assert_eq!(
            line_of(parse_dimacs("c x\np edge three 0\n").unwrap_err()),
            2
        );
        assert_eq!(
            line_of(parse_dimacs("p edge 3 0\np edge 3 0\n").unwrap_err()),
            2
        );
        assert_eq!(line_of(parse_dimacs("e 1 2\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_dimacs("").unwrap_err()), 1);
        assert_eq!(line_of(parse_dimacs("p edge 3 5\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_dimacs("p edge 99999999 0\n").unwrap_err()), 1);
    }

    #[test]
    fn rejects_edge_count_mismatch() {
        assert_eq!(line_of(parse_dimacs("p edge 3 2\ne 1 2\n").unwrap_err()), 2);
        assert_eq!(
            line_of(parse_dimacs("p edge 3 1\ne 1 2\ne 2 3\n").unwrap_err()),
            3
        );
    }

    #[test]
    fn file_round_trip() {
        let g = rado_prefix(4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rado4.dimacs");
        write_dimacs(&g, &path).unwrap();
        assert_eq!(read_dimacs(&path).unwrap(), g);
    }

    #[test]
    fn file_errors_carry_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.dimacs");
        std::fs::write(&path, "p edge 3 1\ne 1 9\n").unwrap();
        let msg = read_dimacs(&path).unwrap_err().to_string();
        assert!(
            msg.contains("bad.dimacs") && msg.contains("line 2"),
            "{msg}"
        );
    }
}
