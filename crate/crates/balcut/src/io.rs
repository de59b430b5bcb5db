//! Reading and writing graphs in two plain-text formats.
//!
//! **Edge list**: one edge per line as `u v` or `u v w` with 0-based vertex
//! ids; `w` defaults to 1. Lines starting with `#` are comments and blank
//! lines are skipped. A comment of the form `# vertices: N` fixes the
//! vertex count, which is otherwise inferred as the largest endpoint plus
//! one; the writer always emits it so isolated vertices survive a round
//! trip.
//!
//! **METIS**: header line `n m [fmt]` followed by `n` adjacency rows with
//! 1-based neighbor ids, `%` comments. Supported fmt values are 0 (plain)
//! and 1 (edge weights, rows hold `neighbor weight` pairs). Every edge
//! must appear in both endpoint rows with the same weight.

use crate::graph::{Graph, GraphError};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Edgelist,
    Metis,
}

impl std::str::FromStr for GraphFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" => Ok(GraphFormat::Edgelist),
            "metis" => Ok(GraphFormat::Metis),
            other => Err(format!("unknown graph format {other:?}")),
        }
    }
}

pub fn read_graph(path: &Path, format: GraphFormat) -> Result<Graph, IoError> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text, format)
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, IoError> {
    match format {
        GraphFormat::Edgelist => parse_edgelist(text),
        GraphFormat::Metis => parse_metis(text),
    }
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Edgelist => write_edgelist(g),
        GraphFormat::Metis => write_metis(g),
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn parse_edgelist(text: &str) -> Result<Graph, IoError> {
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut max_id: u32 = 0;
    let mut any = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("vertices:") {
                match v.trim().parse::<usize>() {
                    Ok(n) => declared_n = Some(n),
                    Err(_) => return parse_err(lineno, "bad vertex count in directive"),
                }
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let u = it.next().and_then(|t| t.parse::<u32>().ok());
        let v = it.next().and_then(|t| t.parse::<u32>().ok());
        let (u, v) = match (u, v) {
            (Some(u), Some(v)) => (u, v),
            _ => return parse_err(lineno, format!("expected `u v [w]`, got {line:?}")),
        };
        let w = match it.next() {
            None => 1.0,
            Some(t) => match t.parse::<f64>() {
                Ok(w) => w,
                Err(_) => return parse_err(lineno, format!("bad weight {t:?}")),
            },
        };
        if it.next().is_some() {
            return parse_err(lineno, "trailing tokens after `u v w`");
        }
        max_id = max_id.max(u).max(v);
        any = true;
        edges.push((u, v, w));
    }
    let inferred = if any { max_id as usize + 1 } else { 0 };
    let n = declared_n.unwrap_or(inferred).max(inferred);
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn write_edgelist(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("# vertices: {}\n", g.n()));
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            out.push_str(&format!("{u} {v}\n"));
        } else {
            out.push_str(&format!("{u} {v} {w}\n"));
        }
    }
    out
}

pub fn parse_metis(text: &str) -> Result<Graph, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('%'));

    let (header_line, header) = match lines.next() {
        Some(x) => x,
        None => return parse_err(0, "empty file"),
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 || head.len() > 3 {
        return parse_err(header_line, "header must be `n m [fmt]`");
    }
    let n: usize = match head[0].parse() {
        Ok(v) => v,
        Err(_) => return parse_err(header_line, "bad vertex count"),
    };
    let m: usize = match head[1].parse() {
        Ok(v) => v,
        Err(_) => return parse_err(header_line, "bad edge count"),
    };
    let weighted = match head.get(2).copied().unwrap_or("0") {
        "0" | "00" | "000" => false,
        "1" | "01" | "001" => true,
        other => return parse_err(header_line, format!("unsupported fmt {other:?}")),
    };

    // (neighbor, weight) rows, 0-based after conversion
    let mut rows: Vec<Vec<(u32, f64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let (lineno, line) = match lines.next() {
            Some(x) => x,
            None => return parse_err(0, format!("expected {n} adjacency rows, got {i}")),
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let mut row = Vec::new();
        if weighted {
            if toks.len() % 2 != 0 {
                return parse_err(lineno, "weighted row must hold neighbor/weight pairs");
            }
            for pair in toks.chunks(2) {
                let v: u64 = match pair[0].parse() {
                    Ok(v) => v,
                    Err(_) => return parse_err(lineno, format!("bad neighbor {:?}", pair[0])),
                };
                let w: f64 = match pair[1].parse() {
                    Ok(w) => w,
                    Err(_) => return parse_err(lineno, format!("bad weight {:?}", pair[1])),
                };
                if v == 0 || v > n as u64 {
                    return parse_err(lineno, format!("neighbor {v} outside 1..={n}"));
                }
                row.push((v as u32 - 1, w));
            }
        } else {
            for tok in toks {
                let v: u64 = match tok.parse() {
                    Ok(v) => v,
                    Err(_) => return parse_err(lineno, format!("bad neighbor {tok:?}")),
                };
                if v == 0 || v > n as u64 {
                    return parse_err(lineno, format!("neighbor {v} outside 1..={n}"));
                }
                row.push((v as u32 - 1, 1.0));
            }
        }
        rows.push(row);
    }
    if let Some((lineno, line)) = lines.next() {
        if !line.trim().is_empty() {
            return parse_err(lineno, "unexpected content after adjacency rows");
        }
    }

    // symmetry check, then keep each edge once
    let mut edges = Vec::new();
    for (u, row) in rows.iter().enumerate() {
        for &(v, w) in row {
            let back = rows[v as usize]
                .iter()
                .find(|&&(x, _)| x == u as u32)
                .map(|&(_, bw)| bw);
            match back {
                Some(bw) if bw == w => {}
                Some(bw) => {
                    return parse_err(
                        0,
                        format!("edge ({u}, {v}) weight mismatch: {w} vs {bw}"),
                    )
                }
                None => return parse_err(0, format!("edge ({u}, {v}) missing reverse entry")),
            }
            if (u as u32) < v {
                edges.push((u as u32, v, w));
            }
        }
    }
    if edges.len() != m {
        return parse_err(0, format!("header claims {m} edges, rows hold {}", edges.len()));
    }
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn write_metis(g: &Graph) -> String {
    let weighted = g.edges().any(|(_, _, w)| w != 1.0);
    let mut out = String::new();
    out.push_str(&format!(
        "{} {}{}\n",
        g.n(),
        g.m(),
        if weighted { " 1" } else { "" }
    ));
    for i in 0..g.n() as u32 {
        let mut first = true;
        for (v, w) in g.neighbors(i) {
            if !first {
                out.push(' ');
            }
            first = false;
            if weighted {
                out.push_str(&format!("{} {}", v + 1, w));
            } else {
                out.push_str(&format!("{}", v + 1));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgelist_roundtrip() {
        let g = Graph::from_edges(5, &[(0, 1, 1.0), (1, 2, 2.5), (3, 0, 1.0)]).unwrap();
        let text = write_edgelist(&g);
        let back = parse_edgelist(&text).unwrap();
        assert_eq!(back.n(), 5); // isolated vertex 4 preserved by directive
        assert_eq!(back.m(), 3);
        assert_eq!(back.degree(1), 3.5);
    }

    #[test]
    fn edgelist_defaults_and_comments() {
        let g = parse_edgelist("# a comment\n\n0 1\n1 2 0.5\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.degree(1), 1.5);
    }

    #[test]
    fn edgelist_rejects_garbage() {
        assert!(matches!(
            parse_edgelist("0 x\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edgelist("0 1 2 3\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edgelist("0 0\n"),
            Err(IoError::Graph(GraphError::SelfLoop(0)))
        ));
    }

    #[test]
    fn metis_roundtrip_unweighted() {
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
            .unwrap();
        let text = write_metis(&g);
        assert!(text.starts_with("4 4\n"));
        let back = parse_metis(&text).unwrap();
        assert_eq!(back.n(), 4);
        assert_eq!(back.m(), 4);
    }

    #[test]
    fn metis_roundtrip_weighted() {
        let g = Graph::from_edges(3, &[(0, 1, 2.0), (1, 2, 1.0)]).unwrap();
        let text = write_metis(&g);
        assert!(text.starts_with("3 2 1\n"));
        let back = parse_metis(&text).unwrap();
        assert_eq!(back.degree(1), 3.0);
    }

    #[test]
    fn metis_detects_asymmetry() {
        // vertex 1 lists vertex 2 but not vice versa
        let text = "3 2\n2\n1 3\n\n";
        assert!(matches!(text_result(text), Err(IoError::Parse { .. })));
    }

    fn text_result(t: &str) -> Result<Graph, IoError> {
        parse_metis(t)
    }

    #[test]
    fn metis_isolated_vertex_row() {
        let g = parse_metis("3 1\n2\n1\n\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.neighbor_count(2), 0);
    }
}
