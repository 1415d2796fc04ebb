//! Text formats.
//!
//! Rotation map: header `rotg n d`, then one `v i w j` line per slot, meaning
//! `v[i] = w` arriving with label `j`. Edge list: header `ug n`, then `u v`
//! lines (repeat a line for a parallel edge, `u u` for a loop). Tokens are
//! whitespace separated, body lines may come in any order, blank lines and
//! `#` comments are ignored.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::graph::{GraphError, RotationGraph, UndirectedGraph};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: slot ({v},{i}) given twice")]
    DuplicateSlot { line: usize, v: usize, i: usize },
    #[error("slot ({v},{i}) missing")]
    MissingSlot { v: usize, i: usize },
    #[error("empty input")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let body = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((k + 1, toks))
    })
}

fn num(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| ParseError::Syntax { line, msg: format!("expected a non-negative integer, found {tok:?}") })
}

fn header<'a>(
    it: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    tag: &str,
    arity: usize,
) -> Result<Vec<usize>, ParseError> {
    let (line, toks) = it.next().ok_or(ParseError::Empty)?;
    if toks[0] != tag || toks.len() != arity + 1 {
        return Err(ParseError::Syntax { line, msg: format!("expected header `{tag}` with {arity} numbers") });
    }
    toks[1..].iter().map(|t| num(line, t)).collect()
}

fn fields<const K: usize>(line: usize, toks: &[&str]) -> Result<[usize; K], ParseError> {
    if toks.len() != K {
        return Err(ParseError::Syntax { line, msg: format!("expected {K} fields, found {}", toks.len()) });
    }
    let mut out = [0; K];
    for (o, t) in out.iter_mut().zip(toks) {
        *o = num(line, t)?;
    }
    Ok(out)
}

/// Parses a rotation map. The graph is flagged undirected when its rotation
/// is an involution.
pub fn parse_rotation_map(text: &str) -> Result<RotationGraph, ParseError> {
    let mut it = lines(text);
    let h = header(&mut it, "rotg", 2)?;
    let (n, d) = (h[0], h[1]);
    let slots = n
        .checked_mul(d)
        .filter(|&s| s <= u32::MAX as usize)
        .ok_or(ParseError::Syntax { line: 1, msg: String::from("n*d too large") })?;
    let mut out = vec![u32::MAX; slots];
    let mut inl = vec![u32::MAX; slots];
    for (line, toks) in it {
        let [v, i, w, j] = fields::<4>(line, &toks)?;
        if v >= n || w >= n || i >= d || j >= d {
            return Err(ParseError::Syntax { line, msg: format!("entry outside {n} vertices of degree {d}") });
        }
        if out[v * d + i] != u32::MAX {
            return Err(ParseError::DuplicateSlot { line, v, i });
        }
        out[v * d + i] = w as u32;
        inl[v * d + i] = j as u32;
    }
    if let Some(s) = out.iter().position(|&w| w == u32::MAX) {
        return Err(ParseError::MissingSlot { v: s / d, i: s % d });
    }
    let back = |s: usize| out[s] as usize * d + inl[s] as usize;
    let involution = (0..slots).all(|s| back(back(s)) == s);
    Ok(RotationGraph::new(n, d, out, inl, involution)?)
}

/// Canonical rotation-map text, slots in `(v, i)` order.
pub fn emit_rotation_map(g: &RotationGraph) -> String {
    let mut s = format!("rotg {} {}\n", g.n(), g.degree());
    for v in 0..g.n() {
        for i in 0..g.degree() {
            let (w, j) = g.rotate(v, i);
            let _ = writeln!(s, "{v} {i} {w} {j}");
        }
    }
    s
}

pub fn parse_edge_list(text: &str) -> Result<UndirectedGraph, ParseError> {
    let mut it = lines(text);
    let n = header(&mut it, "ug", 1)?[0];
    let mut edges = Vec::new();
    for (line, toks) in it {
        let [a, b] = fields::<2>(line, &toks)?;
        if a >= n || b >= n {
            return Err(ParseError::Syntax { line, msg: format!("endpoint outside {n} vertices") });
        }
        edges.push((a, b));
    }
    Ok(UndirectedGraph::new(n, edges)?)
}

/// Edge-list text with edges in stored order.
pub fn emit_edge_list(g: &UndirectedGraph) -> String {
    let mut s = format!("ug {}\n", g.n());
    for &(a, b) in g.edges() {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_edge_list() {
        let g = parse_edge_list("ug 3\n0 1\n1 2 # closing edge next\n\n2 0\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(emit_edge_list(&g), "ug 3\n0 1\n1 2\n2 0\n");
    }

    #[test]
    fn errors_cite_lines() {
        let e = parse_edge_list("ug 3\n0 1\na b c\n").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 3, .. }), "{e}");
        assert!(matches!(parse_edge_list("ug 2\n0 5\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_edge_list("rotg 2 1\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert_eq!(parse_edge_list("# nothing\n"), Err(ParseError::Empty));
    }

    #[test]
    fn rotation_map_slots() {
        let text = "rotg 2 1\n1 0 0 0\n0 0 1 0\n";
        let g = parse_rotation_map(text).unwrap();
        assert!(g.is_undirected());
        assert_eq!(emit_rotation_map(&g), "rotg 2 1\n0 0 1 0\n1 0 0 0\n");
        let dup = parse_rotation_map("rotg 2 1\n0 0 1 0\n0 0 1 0\n").unwrap_err();
        assert_eq!(dup, ParseError::DuplicateSlot { line: 3, v: 0, i: 0 });
        assert_eq!(parse_rotation_map("rotg 2 1\n0 0 1 0\n"), Err(ParseError::MissingSlot { v: 1, i: 0 }));
        assert!(matches!(parse_rotation_map("rotg 2 1\n0 0 0 0\n1 0 0 0\n"), Err(ParseError::Graph(_))));
    }
}
