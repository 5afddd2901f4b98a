//! Approximate solutions and caps.
//!
//! ```text
//! solution v1
//! y 1.5 -0.25           # approximate dual, one value per constraint
//! x s1 1 1 0.5          # approximate primal, sparse like the problem file
//! x l 2 3
//! xbar s1 10            # eigenvalue cap for semidefinite block 1
//! xbar q1 4             # apex cap for second-order block 1
//! xbar l * 7            # the same cap for every orthant coordinate
//! xbar l 2 inf          # ... except coordinate 2
//! ybar * 100            # or `ybar v1 ... vm`
//! ```
//!
//! Approximations are rounded to nearest (they need not be exact); caps are
//! rounded up. Unlisted caps are `+inf`. The same layout carries rays: a dual
//! ray in `y`, a primal ray in `x`.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::problem_file::{block_ref, entry, set_entry, BlockRef};
use super::text::{format_hex, lines, Ctx};
use crate::cones::{BlockVector, ConeSpec, UpperBoundX, UpperBoundY};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolutionFile {
    pub y: Option<Vec<f64>>,
    pub x: Option<BlockVector<f64>>,
    pub x_bar: Option<UpperBoundX>,
    pub y_bar: Option<UpperBoundY>,
}

pub fn parse_solution(src: &str, path: &str, spec: &ConeSpec, m: usize) -> Result<SolutionFile> {
    let ctx = Ctx { path };
    let ls = lines(src);
    let Some(first) = ls.first() else {
        return Err(ctx.err(1, 1, "empty file"));
    };
    if first.tokens.iter().map(|t| t.text).ne(["solution", "v1"]) {
        return Err(ctx.at(&first.tokens[0], "expected header `solution v1`"));
    }
    let mut out = SolutionFile::default();
    let mut seen_x = HashSet::new();
    let mut seen_bar = HashSet::new();
    let mut lin_default: Option<f64> = None;
    let mut lin_caps: Vec<Option<f64>> = vec![None; spec.lin_dim];
    for line in &ls[1..] {
        let t0 = &line.tokens[0];
        let rest = &line.tokens[1..];
        match t0.text {
            "y" => {
                if out.y.is_some() {
                    return Err(ctx.at(t0, "duplicate `y` line"));
                }
                if rest.len() != m {
                    return Err(ctx.at(t0, format!("`y` needs {m} values, found {}", rest.len())));
                }
                out.y = Some(rest.iter().map(|t| ctx.approx(t)).collect::<Result<_>>()?);
            }
            "x" => {
                let (blk, pos, vt) = entry(&ctx, rest, spec, t0)?;
                if !seen_x.insert((blk, pos)) {
                    return Err(ctx.at(t0, "duplicate entry"));
                }
                let v = ctx.approx(&vt)?;
                set_entry(out.x.get_or_insert_with(|| BlockVector::zeros(spec)), blk, pos, v);
            }
            "xbar" => {
                let Some(bt) = rest.first() else {
                    return Err(ctx.at(t0, "missing block reference"));
                };
                let blk = block_ref(&ctx, bt, spec)?;
                let caps = out.x_bar.get_or_insert_with(|| UpperBoundX::unknown(spec));
                match blk {
                    BlockRef::Sdp(k) | BlockRef::Soc(k) => {
                        if rest.len() != 2 {
                            return Err(ctx.at(bt, "expected `xbar <block> <cap>`"));
                        }
                        if !seen_bar.insert((blk, None)) {
                            return Err(ctx.at(t0, "duplicate cap"));
                        }
                        let v = ctx.cap(&rest[1])?;
                        if matches!(blk, BlockRef::Sdp(_)) {
                            caps.sdp[k] = v;
                        } else {
                            caps.soc[k] = v;
                        }
                    }
                    BlockRef::Lin => {
                        if rest.len() != 3 {
                            return Err(ctx.at(bt, "expected `xbar l <index|*> <cap>`"));
                        }
                        let v = ctx.cap(&rest[2])?;
                        let key = if rest[1].text == "*" {
                            if lin_default.replace(v).is_some() {
                                return Err(ctx.at(&rest[1], "duplicate default cap"));
                            }
                            None
                        } else {
                            let i = ctx.index(&rest[1], spec.lin_dim, "coordinate")?;
                            lin_caps[i] = Some(v);
                            Some(i)
                        };
                        if key.is_some() && !seen_bar.insert((blk, key)) {
                            return Err(ctx.at(t0, "duplicate cap"));
                        }
                    }
                }
            }
            "ybar" => {
                if out.y_bar.is_some() {
                    return Err(ctx.at(t0, "duplicate `ybar` line"));
                }
                let caps = if rest.len() == 2 && rest[0].text == "*" {
                    vec![ctx.cap(&rest[1])?; m]
                } else if rest.len() == m {
                    rest.iter().map(|t| ctx.cap(t)).collect::<Result<_>>()?
                } else {
                    return Err(ctx.at(t0, format!("`ybar` needs {m} caps or `* <cap>`")));
                };
                out.y_bar = Some(UpperBoundY(caps));
            }
            other => return Err(ctx.at(t0, format!("unknown record {other:?}"))),
        }
    }
    if let Some(caps) = out.x_bar.as_mut() {
        for (i, c) in lin_caps.into_iter().enumerate() {
            caps.lin[i] = c.or(lin_default).unwrap_or(f64::INFINITY);
        }
    }
    Ok(out)
}

/// Serializes in hexadecimal; zero entries of `x` are omitted, except that an
/// all-zero `x` keeps its first entry so it still reads back as present.
pub fn write_solution(s: &SolutionFile) -> String {
    let mut out = String::from("solution v1\n");
    if let Some(y) = &s.y {
        let ys: Vec<String> = y.iter().map(|&v| format_hex(v)).collect();
        let _ = writeln!(out, "y {}", ys.join(" "));
    }
    if let Some(x) = &s.x {
        for (k, m) in x.sdp.iter().enumerate() {
            for (p, &v) in m.packed().iter().enumerate() {
                if v != 0.0 {
                    let (i, j) = m.coords_of(p);
                    let _ = writeln!(out, "x s{} {} {} {}", k + 1, i + 1, j + 1, format_hex(v));
                }
            }
        }
        for (k, q) in x.soc.iter().enumerate() {
            for (i, &v) in q.iter().enumerate() {
                if v != 0.0 {
                    let _ = writeln!(out, "x q{} {} {}", k + 1, i + 1, format_hex(v));
                }
            }
        }
        for (i, &v) in x.lin.iter().enumerate() {
            if v != 0.0 {
                let _ = writeln!(out, "x l {} {}", i + 1, format_hex(v));
            }
        }
        if !out.contains("\nx ") {
            let first = if !x.sdp.is_empty() {
                "s1 1 1"
            } else if !x.soc.is_empty() {
                "q1 1"
            } else {
                "l 1"
            };
            let _ = writeln!(out, "x {first} {}", format_hex(0.0));
        }
    }
    if let Some(c) = &s.x_bar {
        for (k, &v) in c.sdp.iter().enumerate() {
            let _ = writeln!(out, "xbar s{} {}", k + 1, format_hex(v));
        }
        for (k, &v) in c.soc.iter().enumerate() {
            let _ = writeln!(out, "xbar q{} {}", k + 1, format_hex(v));
        }
        for (i, &v) in c.lin.iter().enumerate() {
            let _ = writeln!(out, "xbar l {} {}", i + 1, format_hex(v));
        }
    }
    if let Some(c) = &s.y_bar {
        let cs: Vec<String> = c.0.iter().map(|&v| format_hex(v)).collect();
        let _ = writeln!(out, "ybar {}", cs.join(" "));
    }
    out
}
