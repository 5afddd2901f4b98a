//! Native problem format.
//!
//! ```text
//! conic v1
//! sdp 2 | soc 3 | lin 2
//! m 2
//! b 1 0x1.8p+1
//! c s1 1 1 1.0          # semidefinite block 1, entry (1,1)
//! c q1 3 2              # second-order block 1, coordinate 3
//! c l 2 -1              # orthant coordinate 2
//! a 1 s1 2 1 0.5        # constraint 1; (2,1) and (1,2) name the same entry
//! a 2 l 1 [0.1,0.2]
//! ```
//!
//! Indices are 1-based. Values are decimals (enclosed), hexadecimal floats
//! (exact) or `[lo,hi]` intervals. Absent entries are zero; repeated entries
//! are rejected. The writer emits hexadecimal floats in a canonical order, so
//! writing a parsed hexadecimal file reproduces it byte for byte.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::text::{format_interval, lines, Ctx, Token};
use crate::cones::{BlockVector, ConeSpec};
use crate::error::Result;
use crate::interval::Interval;
use crate::problem::ConicProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum BlockRef {
    Sdp(usize),
    Soc(usize),
    Lin,
}

pub(crate) fn block_ref(ctx: &Ctx<'_>, t: &Token<'_>, spec: &ConeSpec) -> Result<BlockRef> {
    let (kind, num) = t.text.split_at(1.min(t.text.len()));
    let idx = |count: usize, what: &str| -> Result<usize> {
        let k: usize = num.parse().map_err(|_| ctx.at(t, format!("bad block reference {:?}", t.text)))?;
        if k == 0 || k > count {
            return Err(ctx.at(t, format!("{what} block {k} does not exist")));
        }
        Ok(k - 1)
    };
    match kind {
        "s" => Ok(BlockRef::Sdp(idx(spec.sdp_orders.len(), "semidefinite")?)),
        "q" => Ok(BlockRef::Soc(idx(spec.soc_dims.len(), "second-order")?)),
        "l" if num.is_empty() => {
            if spec.lin_dim == 0 {
                return Err(ctx.at(t, "there is no orthant block"));
            }
            Ok(BlockRef::Lin)
        }
        _ => Err(ctx.at(t, format!("bad block reference {:?} (expected s<k>, q<k> or l)", t.text))),
    }
}

/// Reads `<block> <index...> <value>` starting at `toks[0]`; returns the
/// block, the canonical position inside the block and the value token.
pub(crate) fn entry<'a>(
    ctx: &Ctx<'_>,
    toks: &[Token<'a>],
    spec: &ConeSpec,
    anchor: &Token<'_>,
) -> Result<(BlockRef, (usize, usize), Token<'a>)> {
    let Some(bt) = toks.first() else {
        return Err(ctx.at(anchor, "missing block reference"));
    };
    let b = block_ref(ctx, bt, spec)?;
    let need = match b {
        BlockRef::Sdp(_) => 4,
        _ => 3,
    };
    if toks.len() != need {
        return Err(ctx.at(bt, format!("expected {} fields after the block reference, found {}", need - 1, toks.len() - 1)));
    }
    let pos = match b {
        BlockRef::Sdp(k) => {
            let s = spec.sdp_orders[k];
            let i = ctx.index(&toks[1], s, "row")?;
            let j = ctx.index(&toks[2], s, "column")?;
            (i.max(j), i.min(j))
        }
        BlockRef::Soc(k) => (ctx.index(&toks[1], spec.soc_dims[k], "coordinate")?, 0),
        BlockRef::Lin => (ctx.index(&toks[1], spec.lin_dim, "coordinate")?, 0),
    };
    Ok((b, pos, toks[need - 1]))
}

pub(crate) fn set_entry<T: Copy>(v: &mut BlockVector<T>, b: BlockRef, (i, j): (usize, usize), val: T) {
    match b {
        BlockRef::Sdp(k) => v.sdp[k].set(i, j, val),
        BlockRef::Soc(k) => v.soc[k][i] = val,
        BlockRef::Lin => v.lin[i] = val,
    }
}

fn header<'a>(ctx: &Ctx<'_>, ls: &'a [super::text::Line<'a>], magic: &str) -> Result<()> {
    let Some(first) = ls.first() else {
        return Err(ctx.err(1, 1, "empty file"));
    };
    let words: Vec<&str> = first.tokens.iter().map(|t| t.text).collect();
    if words != [magic, "v1"] {
        return Err(ctx.at(&first.tokens[0], format!("expected header `{magic} v1`")));
    }
    Ok(())
}

pub fn parse_problem(src: &str, path: &str) -> Result<ConicProblem> {
    let ctx = Ctx { path };
    let ls = lines(src);
    header(&ctx, &ls, "conic")?;
    let Some(spec_line) = ls.get(1) else {
        return Err(ctx.err(1, 1, "missing cone specification line"));
    };
    let spec_text: Vec<&str> = spec_line.tokens.iter().map(|t| t.text).collect();
    let spec: ConeSpec = spec_text
        .join(" ")
        .parse()
        .map_err(|e: crate::Error| ctx.at(&spec_line.tokens[0], e.to_string()))?;

    let Some(m_line) = ls.get(2) else {
        return Err(ctx.err(spec_line.number, 1, "missing `m` line"));
    };
    if m_line.tokens[0].text != "m" || m_line.tokens.len() != 2 {
        return Err(ctx.at(&m_line.tokens[0], "expected `m <count>`"));
    }
    let m = ctx.usize(&m_line.tokens[1])?;
    if m == 0 {
        return Err(ctx.at(&m_line.tokens[1], "at least one constraint is required"));
    }

    let mut b: Option<Vec<Interval>> = None;
    let mut c = BlockVector::filled(&spec, Interval::ZERO);
    let mut rows = vec![BlockVector::filled(&spec, Interval::ZERO); m];
    let mut seen: HashSet<(usize, BlockRef, (usize, usize))> = HashSet::new();
    for line in &ls[3..] {
        let t0 = &line.tokens[0];
        match t0.text {
            "b" => {
                if b.is_some() {
                    return Err(ctx.at(t0, "duplicate `b` line"));
                }
                if line.tokens.len() != m + 1 {
                    return Err(ctx.at(t0, format!("`b` needs {m} values, found {}", line.tokens.len() - 1)));
                }
                b = Some(line.tokens[1..].iter().map(|t| ctx.interval(t)).collect::<Result<_>>()?);
            }
            "c" | "a" => {
                let (row, rest) = if t0.text == "a" {
                    let Some(rt) = line.tokens.get(1) else {
                        return Err(ctx.at(t0, "missing constraint number"));
                    };
                    (ctx.index(rt, m, "constraint")? + 1, &line.tokens[2..])
                } else {
                    (0, &line.tokens[1..])
                };
                let (blk, pos, vt) = entry(&ctx, rest, &spec, t0)?;
                if !seen.insert((row, blk, pos)) {
                    return Err(ctx.at(t0, "duplicate entry"));
                }
                let v = ctx.interval(&vt)?;
                let target = if row == 0 { &mut c } else { &mut rows[row - 1] };
                set_entry(target, blk, pos, v);
            }
            other => return Err(ctx.at(t0, format!("unknown record {other:?}"))),
        }
    }
    let Some(b) = b else {
        return Err(ctx.err(ls.last().map_or(1, |l| l.number), 1, "missing `b` line"));
    };
    ConicProblem::new(spec, rows, b, c).map_err(|e| ctx.err(1, 1, e.to_string()))
}

pub(crate) fn write_entries(out: &mut String, prefix: &str, v: &BlockVector<Interval>) {
    for (k, m) in v.sdp.iter().enumerate() {
        for (p, &val) in m.packed().iter().enumerate() {
            if val != Interval::ZERO {
                let (i, j) = m.coords_of(p);
                let _ = writeln!(out, "{prefix}s{} {} {} {}", k + 1, i + 1, j + 1, format_interval(val));
            }
        }
    }
    for (k, s) in v.soc.iter().enumerate() {
        for (i, &val) in s.iter().enumerate() {
            if val != Interval::ZERO {
                let _ = writeln!(out, "{prefix}q{} {} {}", k + 1, i + 1, format_interval(val));
            }
        }
    }
    for (i, &val) in v.lin.iter().enumerate() {
        if val != Interval::ZERO {
            let _ = writeln!(out, "{prefix}l {} {}", i + 1, format_interval(val));
        }
    }
}

pub fn write_problem(p: &ConicProblem) -> String {
    let mut out = String::from("conic v1\n");
    let _ = writeln!(out, "{}", p.spec());
    let _ = writeln!(out, "m {}", p.m());
    let bs: Vec<String> = p.b().iter().map(|&v| format_interval(v)).collect();
    let _ = writeln!(out, "b {}", bs.join(" "));
    write_entries(&mut out, "c ", p.c());
    for (i, r) in p.rows().iter().enumerate() {
        write_entries(&mut out, &format!("a {} ", i + 1), r);
    }
    out
}
