//! Edge-list text format.
//!
//! ```text
//! # comments start with '#'
//! D=2
//! 1 -1 2
//! 1 +1 3
//! ```
//!
//! The header fixes the coin dimension. Each edge line is
//! `source label target` with 1-based vertex labels and a signed coin label
//! from the `D`-dimensional index set. The vertex count is the largest
//! vertex label mentioned.

use std::collections::BTreeMap;

use super::{Edge, Graph, GraphKind};
use crate::coin::{coin_labels, label_index};
use crate::error::{Error, Result};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_header(body: &str, line: usize, column: usize) -> Result<usize> {
    let (key, value) = body
        .split_once('=')
        .ok_or_else(|| parse_error(line, column, "expected header `D=<int>`"))?;
    if key.trim() != "D" {
        return Err(parse_error(
            line,
            column,
            format!("expected header `D=<int>`, found `{body}`"),
        ));
    }
    let dim: usize = value.trim().parse().map_err(|_| {
        parse_error(
            line,
            column,
            format!("invalid coin dimension `{}`", value.trim()),
        )
    })?;
    if dim < 2 {
        return Err(parse_error(
            line,
            column,
            "coin dimension must be at least 2",
        ));
    }
    Ok(dim)
}

fn parse_vertex(tok: &Token<'_>, line: usize) -> Result<usize> {
    match tok.text.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(parse_error(
            line,
            tok.column,
            format!(
                "vertex label must be a positive integer, found `{}`",
                tok.text
            ),
        )),
    }
}

/// Parses the edge-list format into a graph of kind [`GraphKind::Custom`].
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut dim = None;
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut max_vertex = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(first) = toks.first() else { continue };

        let Some(d) = dim else {
            dim = Some(parse_header(body.trim(), line_no, first.column)?);
            continue;
        };

        if toks.len() != 3 {
            let column = toks.get(3).map_or(first.column, |t| t.column);
            return Err(parse_error(
                line_no,
                column,
                format!(
                    "expected `source label target`, found {} fields",
                    toks.len()
                ),
            ));
        }
        let source = parse_vertex(&toks[0], line_no)?;
        let label: i32 = toks[1].text.parse().map_err(|_| {
            parse_error(
                line_no,
                toks[1].column,
                format!("invalid coin label `{}`", toks[1].text),
            )
        })?;
        let target = parse_vertex(&toks[2], line_no)?;
        let j = label_index(d, label).ok_or(Error::LabelOutOfRange {
            line: line_no,
            label,
            dim: d,
        })?;
        if edges.insert((source - 1, j), target - 1).is_some() {
            return Err(Error::DuplicateEdge {
                line: line_no,
                source_vertex: source,
                label,
            });
        }
        max_vertex = max_vertex.max(source).max(target);
    }

    let dim = dim.ok_or_else(|| parse_error(1, 1, "missing header `D=<int>`"))?;
    if edges.is_empty() {
        return Err(parse_error(
            text.lines().count().max(1),
            1,
            "graph has no edges",
        ));
    }
    Graph::from_edges(
        max_vertex,
        dim,
        edges.into_iter().map(|((source, label), target)| Edge {
            source,
            label,
            target,
        }),
        GraphKind::Custom,
    )
}

pub(super) fn write_graph(graph: &Graph) -> String {
    let labels = coin_labels(graph.coin_dim());
    let mut out = format!("D={}\n", graph.coin_dim());
    for e in graph.edges() {
        let label = labels[e.label];
        let label = if label > 0 {
            format!("+{label}")
        } else {
            label.to_string()
        };
        out.push_str(&format!("{} {} {}\n", e.source + 1, label, e.target + 1));
    }
    out
}
