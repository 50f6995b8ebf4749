//! Plain-text formats for graphs, trees and certificates.
//!
//! Graph: `n m`, then `m` lines `u v`. Tree: `n`, then `n − 1` lines `u v`.
//! Certificate: one `t_vertex g_vertex` line per mapped pair, sorted by tree vertex.
//! Blank lines are ignored; every error carries its 1-based line number.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::embedding::PartialEmbedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::Tree;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers<const N: usize>(line: usize, s: &str) -> Result<[usize; N]> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() != N {
        return Err(perr(
            line,
            format!("expected {N} integers, found {}", fields.len()),
        ));
    }
    let mut out = [0; N];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f
            .parse()
            .map_err(|_| perr(line, format!("not a non-negative integer: {f:?}")))?;
    }
    Ok(out)
}

/// Reads `count` edge lines over `n` vertices, rejecting loops, duplicates and range errors.
fn edges<'a>(
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    n: usize,
    count: usize,
    last: usize,
) -> Result<Vec<(usize, usize)>> {
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (line, s) = it
            .next()
            .ok_or_else(|| perr(last, format!("expected {count} edges, found {i}")))?;
        let [u, v] = numbers::<2>(line, s)?;
        if u >= n || v >= n {
            return Err(perr(line, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(perr(line, format!("loop at {u}")));
        }
        let e = (u.min(v), u.max(v));
        if !seen.insert(e) {
            return Err(perr(line, format!("duplicate edge {} {}", e.0, e.1)));
        }
        out.push(e);
    }
    if let Some((line, _)) = it.next() {
        return Err(perr(line, "trailing content after the last edge"));
    }
    Ok(out)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let last = text.lines().count().max(1);
    let mut it = lines(text);
    let (line, header) = it.next().ok_or_else(|| perr(1, "missing header `n m`"))?;
    let [n, m] = numbers::<2>(line, header)?;
    if n == 0 {
        return Err(perr(line, "graph must have at least one vertex"));
    }
    let es = edges(&mut it, n, m, last)?;
    Graph::from_edges(n, &es)
}

pub fn parse_tree(text: &str) -> Result<Tree> {
    let last = text.lines().count().max(1);
    let mut it = lines(text);
    let (line, header) = it.next().ok_or_else(|| perr(1, "missing header `n`"))?;
    let [n] = numbers::<1>(line, header)?;
    if n == 0 {
        return Err(perr(line, "tree must have at least one vertex"));
    }
    let es = edges(&mut it, n, n - 1, last)?;
    Tree::from_edges(n, &es).map_err(|e| match e {
        Error::InvalidTree(msg) => perr(line, msg),
        other => other,
    })
}

/// Reads a certificate for a tree on `t_n` vertices and a graph on `g_n` vertices.
pub fn parse_certificate(text: &str, t_n: usize, g_n: usize) -> Result<PartialEmbedding> {
    let mut e = PartialEmbedding::new(t_n, g_n);
    for (line, s) in lines(text) {
        let [x, v] = numbers::<2>(line, s)?;
        if x >= t_n || v >= g_n {
            return Err(perr(line, format!("pair {x} {v} out of range")));
        }
        if e.is_mapped(x) || e.is_used(v) {
            return Err(perr(line, format!("pair {x} {v} repeats a vertex")));
        }
        e.set(x, v);
    }
    Ok(e)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn write_tree(t: &Tree) -> String {
    let mut s = format!("{}\n", t.n());
    for &(u, v) in t.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn write_certificate(e: &PartialEmbedding) -> String {
    let mut s = String::new();
    for (x, v) in e.pairs() {
        writeln!(s, "{x} {v}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::petersen();
        let text = write_graph(&g);
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
        assert!(text.starts_with("10 15\n"));
    }

    #[test]
    fn graph_errors_name_lines() {
        assert_eq!(parse_graph("3 2\n0 1\n1 1\n"), Err(perr(3, "loop at 1")));
        assert_eq!(
            parse_graph("3 2\n0 1\n1 0\n"),
            Err(perr(3, "duplicate edge 0 1"))
        );
        assert!(matches!(
            parse_graph("3 2\n0 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_graph(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn tree_round_trip_and_errors() {
        let t = Tree::spider(3, 2);
        let text = write_tree(&t);
        assert_eq!(write_tree(&parse_tree(&text).unwrap()), text);
        assert!(matches!(
            parse_tree("4\n0 1\n1 2\n2 0\n"),
            Err(Error::Parse { .. })
        ));
        assert_eq!(parse_tree("1\n").unwrap().n(), 1);
    }

    #[test]
    fn certificate_round_trip() {
        let e = PartialEmbedding::from_pairs(3, 5, &[(2, 4), (0, 1), (1, 0)]).unwrap();
        let text = write_certificate(&e);
        assert_eq!(text, "0 1\n1 0\n2 4\n");
        assert_eq!(parse_certificate(&text, 3, 5).unwrap(), e);
        assert!(matches!(
            parse_certificate("0 1\n1 1\n", 3, 5),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
