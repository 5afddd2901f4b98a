//! SDPA sparse input (`.dat-s`).
//!
//! The file describes `min c^T x  s.t.  sum_i x_i F_i - F_0 psd`, whose dual
//! is `max <F_0, Y>  s.t.  <F_i, Y> = c_i, Y psd`. That dual is read as our
//! primal with `C = -F_0`, `A_i = F_i`, `b = c`, so our optimal value is the
//! negated SDPA objective.
//!
//! Blocks of negative size are diagonal; they are concatenated, in
//! declaration order, into the orthant block. Entries name the upper triangle
//! (`i <= j`). Braces, parentheses and commas count as whitespace; lines
//! starting with `"` or `*` are comments.

use std::collections::HashSet;

use super::text::{tokenize, Ctx, Token};
use crate::cones::{BlockVector, ConeSpec};
use crate::error::Result;
use crate::interval::Interval;
use crate::problem::ConicProblem;

enum Target {
    Sdp(usize, usize),
    Lin(usize, usize),
}

pub fn parse_sdpa(src: &str, path: &str) -> Result<ConicProblem> {
    let ctx = Ctx { path };
    let cleaned: Vec<String> = src
        .lines()
        .map(|l| l.chars().map(|ch| if "{}(),".contains(ch) { ' ' } else { ch }).collect())
        .collect();
    let mut header_lines: Vec<Vec<Token<'_>>> = Vec::new();
    for (k, l) in cleaned.iter().enumerate() {
        let t = l.trim_start();
        if t.is_empty() || t.starts_with('"') || t.starts_with('*') {
            continue;
        }
        header_lines.push(tokenize(l, k + 1));
    }
    let mut it = header_lines.iter();
    // `m` and `nblocks` sit on lines of their own and may carry trailing text.
    let m_line = it.next().ok_or_else(|| ctx.err(1, 1, "missing constraint count"))?;
    let m = ctx.usize(&m_line[0])?;
    if m == 0 {
        return Err(ctx.at(&m_line[0], "at least one constraint is required"));
    }
    let nb_line = it.next().ok_or_else(|| ctx.err(m_line[0].line, 1, "missing block count"))?;
    let nblocks = ctx.usize(&nb_line[0])?;
    if nblocks == 0 {
        return Err(ctx.at(&nb_line[0], "at least one block is required"));
    }
    // Block sizes and the objective vector are read line by line; text after
    // the last value on a line (`2 = bLOCKsTRUCT`) is ignored.
    let mut last_line = nb_line[0].line;
    let mut take = |count: usize, what: &str| -> Result<Vec<Token<'_>>> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let line = it.next().ok_or_else(|| ctx.err(last_line, 1, format!("unexpected end of file, expected {what}")))?;
            last_line = line[0].line;
            out.extend(line.iter().take(count - out.len()).copied());
        }
        Ok(out)
    };

    let mut targets = Vec::with_capacity(nblocks);
    let (mut orders, mut lin) = (Vec::new(), 0usize);
    for t in take(nblocks, "block sizes")? {
        let s: i64 = t.text.parse().map_err(|_| ctx.at(&t, format!("bad block size {:?}", t.text)))?;
        if s > 0 {
            targets.push(Target::Sdp(orders.len(), s as usize));
            orders.push(s as usize);
        } else if s < 0 {
            targets.push(Target::Lin(lin, s.unsigned_abs() as usize));
            lin += s.unsigned_abs() as usize;
        } else {
            return Err(ctx.at(&t, "block size 0"));
        }
    }
    let spec = ConeSpec::new(orders, vec![], lin).map_err(|e| ctx.err(nb_line[0].line, 1, e.to_string()))?;
    let b = take(m, "objective coefficients")?.iter().map(|t| ctx.interval(t)).collect::<Result<Vec<_>>>()?;
    let mut stream = it.flatten();

    let mut c = BlockVector::filled(&spec, Interval::ZERO);
    let mut rows = vec![BlockVector::filled(&spec, Interval::ZERO); m];
    let mut seen = HashSet::new();
    while let Some(t) = stream.next().copied() {
        let mut f = [t; 5];
        for slot in f.iter_mut().skip(1) {
            *slot = stream.next().copied().ok_or_else(|| ctx.at(&t, "incomplete entry"))?;
        }
        let mat = ctx.usize(&f[0])?;
        if mat > m {
            return Err(ctx.at(&f[0], format!("matrix number {mat} exceeds m = {m}")));
        }
        let blk = ctx.index(&f[1], nblocks, "block")?;
        let (i, j) = (ctx.usize(&f[2])?, ctx.usize(&f[3])?);
        if i == 0 || j == 0 {
            return Err(ctx.at(&f[2], "indices are 1-based"));
        }
        if i > j {
            return Err(ctx.at(&f[2], format!("entry ({i},{j}) is below the diagonal; only i <= j is accepted")));
        }
        if !seen.insert((mat, blk, i, j)) {
            return Err(ctx.at(&f[0], "duplicate entry"));
        }
        let v = ctx.interval(&f[4])?;
        let (target, v) = if mat == 0 { (&mut c, -v) } else { (&mut rows[mat - 1], v) };
        match targets[blk] {
            Target::Sdp(k, s) => {
                if j > s {
                    return Err(ctx.at(&f[3], format!("index {j} exceeds block order {s}")));
                }
                target.sdp[k].set(j - 1, i - 1, v);
            }
            Target::Lin(off, s) => {
                if i != j {
                    return Err(ctx.at(&f[2], "off-diagonal entry in a diagonal block"));
                }
                if j > s {
                    return Err(ctx.at(&f[3], format!("index {j} exceeds block size {s}")));
                }
                target.lin[off + i - 1] = v;
            }
        }
    }
    ConicProblem::new(spec, rows, b, c).map_err(|e| ctx.err(1, 1, e.to_string()))
}
