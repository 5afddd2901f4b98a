//! Weighted graphs: a vertex count, then one `i j w` line per edge
//! (1-based, `i < j`). Weights use the same encodings as problem files.

use std::fmt::Write as _;

use super::text::{format_interval, lines, Ctx};
use crate::equicut::WeightedGraph;
use crate::error::Result;

pub fn parse_graph(src: &str, path: &str) -> Result<WeightedGraph> {
    let ctx = Ctx { path };
    let ls = lines(src);
    let Some(first) = ls.first() else {
        return Err(ctx.err(1, 1, "empty file"));
    };
    if first.tokens.len() != 1 {
        return Err(ctx.at(&first.tokens[0], "expected the vertex count alone on the first line"));
    }
    let n = ctx.usize(&first.tokens[0])?;
    let mut edges = Vec::new();
    for line in &ls[1..] {
        let t = &line.tokens;
        if t.len() != 3 {
            return Err(ctx.at(&t[0], "expected `i j w`"));
        }
        let i = ctx.index(&t[0], n, "vertex")?;
        let j = ctx.index(&t[1], n, "vertex")?;
        if i >= j {
            return Err(ctx.at(&t[0], "edges must be listed with i < j"));
        }
        edges.push((i, j, ctx.interval(&t[2])?));
    }
    WeightedGraph::from_edges(n, &edges).map_err(|e| ctx.at(&first.tokens[0], e.to_string()))
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            let w = g.weight(i, j);
            if w != crate::interval::Interval::ZERO {
                let _ = writeln!(out, "{} {} {}", i + 1, j + 1, format_interval(w));
            }
        }
    }
    out
}
