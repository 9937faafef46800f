//! Text formats.
//!
//! Hypergraphs: a line `v <n>`, then `e <v1> <v2> …` per edge with 1-based
//! vertices, and optionally `u <r>` to declare the uniformity of an
//! instance without edges. `#` starts a comment.
//!
//! Colorings: whitespace-separated 1-based colors, one per vertex.

use crate::error::{Error, Result};
use crate::hypergraph::{Coloring, Hypergraph};
use crate::vset::VertexSet;

fn strip(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("expected a number, found `{tok}`") })
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut n = None;
    let mut r = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip(raw);
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let kind = toks.next().unwrap();
        let args: Vec<usize> = toks.map(|t| parse_num(t, line)).collect::<Result<_>>()?;
        match kind {
            "v" => {
                if n.is_some() {
                    return Err(Error::Parse { line, msg: "vertex count given twice".into() });
                }
                let [count] = args[..] else {
                    return Err(Error::Parse { line, msg: "`v` takes one number".into() });
                };
                n = Some(count);
            }
            "u" => {
                let [u] = args[..] else {
                    return Err(Error::Parse { line, msg: "`u` takes one number".into() });
                };
                r = Some(u);
            }
            "e" => {
                let Some(count) = n else {
                    return Err(Error::Parse { line, msg: "edge before the `v` line".into() });
                };
                if args.is_empty() {
                    return Err(Error::Parse { line, msg: "empty edge".into() });
                }
                let mut e = VertexSet::EMPTY;
                for &v in &args {
                    if v == 0 || v > count {
                        return Err(Error::Parse { line, msg: format!("vertex {v} outside 1..={count}") });
                    }
                    if e.contains(v - 1) {
                        return Err(Error::Parse { line, msg: format!("vertex {v} repeated") });
                    }
                    e.insert(v - 1);
                }
                edges.push(e);
            }
            other => return Err(Error::Parse { line, msg: format!("unknown line type `{other}`") }),
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "missing `v` line".into() })?;
    let h = Hypergraph::from_sets(n, edges)?;
    match r {
        Some(r) => h.with_uniformity(r),
        None => Ok(h),
    }
}

pub fn hypergraph_to_text(h: &Hypergraph) -> String {
    let mut out = format!("v {}\n", h.n());
    if h.num_edges() == 0 {
        if let Some(r) = h.uniformity() {
            out.push_str(&format!("u {r}\n"));
        }
    }
    for e in h.edges() {
        let vs: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&format!("e {}\n", vs.join(" ")));
    }
    out
}

pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring> {
    let mut colors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        for tok in strip(raw).split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let c = parse_num(tok, i + 1)?;
            if c == 0 {
                return Err(Error::Parse { line: i + 1, msg: "colors are 1-based".into() });
            }
            colors.push(c - 1);
        }
    }
    if colors.len() != n {
        return Err(Error::PartialColoring { got: colors.len(), n });
    }
    Ok(Coloring::from_colors(colors))
}

pub fn coloring_to_text(c: &Coloring) -> String {
    let cs: Vec<String> = c.colors().iter().map(|k| (k + 1).to_string()).collect();
    cs.join(" ") + "\n"
}

/// 1-based vertex list.
pub fn one_based(s: VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let text = "# a path\nv 4\ne 1 2\ne 2 3 # middle\n\ne 3 4\n";
        let h = parse_hypergraph(text).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.num_edges(), 3);
        assert_eq!(h.uniformity(), Some(2));
        let back = parse_hypergraph(&hypergraph_to_text(&h)).unwrap();
        assert_eq!(back.edges(), h.edges());
    }

    #[test]
    fn edgeless_keeps_declared_uniformity() {
        let h = parse_hypergraph("v 3\nu 3\n").unwrap();
        assert_eq!(h.uniformity(), Some(3));
        assert_eq!(parse_hypergraph(&hypergraph_to_text(&h)).unwrap().uniformity(), Some(3));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_hypergraph("v 3\ne 1 4\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_hypergraph("e 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_hypergraph("v 3\nx 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_hypergraph("v 3\ne 1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_hypergraph("v 3\ne 1 2\ne 1 2 3\n").unwrap().uniformity(), None);
    }

    #[test]
    fn colorings() {
        let c = parse_coloring("1 2\n3, 1 # last\n", 4).unwrap();
        assert_eq!(c.colors(), &[0, 1, 2, 0]);
        assert_eq!(coloring_to_text(&c), "1 2 3 1\n");
        assert!(parse_coloring("1 2", 3).is_err());
        assert!(parse_coloring("0 1", 2).is_err());
    }
}
