//! Stored certificates, bit-exact.
//!
//! ```text
//! certificate v1
//! kind primal_infeasible
//! y 0x1p+0 -0x1.8p+1
//! check b_dot_y_upper -0x1p+0
//! ```
//!
//! A dual infeasibility certificate stores the approximate ray (`x` lines),
//! `beta`, and the verified enclosure (`enc` lines, `[lo,hi]` intervals).
//! Every value is a hexadecimal float.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::problem_file::{entry, set_entry, write_entries};
use super::text::{format_hex, lines, parse_hex, Ctx};
use crate::certificates::{Certificate, CertificateKind, Check, Witness};
use crate::cones::{BlockVector, ConeSpec};
use crate::error::Result;
use crate::interval::Interval;

pub fn write_certificate(c: &Certificate) -> String {
    let mut out = String::from("certificate v1\n");
    let _ = writeln!(out, "kind {}", c.kind.as_str());
    match &c.witness {
        Witness::DualRay(y) => {
            let ys: Vec<String> = y.iter().map(|&v| format_hex(v)).collect();
            let _ = writeln!(out, "y {}", ys.join(" "));
        }
        Witness::PrimalRay { approx, beta, enclosure } => {
            write_entries(&mut out, "x ", &approx.to_interval());
            let _ = writeln!(out, "beta {}", format_hex(*beta));
            write_entries(&mut out, "enc ", enclosure);
        }
    }
    for ch in &c.checks {
        let _ = writeln!(out, "check {} {}", ch.name, format_hex(ch.value));
    }
    out
}

pub fn parse_certificate(src: &str, path: &str, spec: &ConeSpec, m: usize) -> Result<Certificate> {
    let ctx = Ctx { path };
    let ls = lines(src);
    let Some(first) = ls.first() else {
        return Err(ctx.err(1, 1, "empty file"));
    };
    if first.tokens.iter().map(|t| t.text).ne(["certificate", "v1"]) {
        return Err(ctx.at(&first.tokens[0], "expected header `certificate v1`"));
    }
    let hex = |t: &super::text::Token<'_>| -> Result<f64> {
        let v = parse_hex(t.text).map_err(|msg| ctx.at(t, msg))?;
        if v.is_nan() {
            return Err(ctx.at(t, "NaN is not a valid value"));
        }
        Ok(v)
    };
    let mut kind = None;
    let mut y = None;
    let mut beta = None;
    let mut approx: Option<BlockVector<f64>> = None;
    let mut enclosure: Option<BlockVector<Interval>> = None;
    let mut seen = HashSet::new();
    let mut checks = Vec::new();
    for line in &ls[1..] {
        let t0 = &line.tokens[0];
        let rest = &line.tokens[1..];
        match t0.text {
            "kind" if rest.len() == 1 => {
                let k = match rest[0].text {
                    "primal_infeasible" => CertificateKind::PrimalInfeasible,
                    "dual_infeasible" => CertificateKind::DualInfeasible,
                    other => return Err(ctx.at(&rest[0], format!("unknown certificate kind {other:?}"))),
                };
                if kind.replace(k).is_some() {
                    return Err(ctx.at(t0, "duplicate `kind` line"));
                }
            }
            "y" => {
                if rest.len() != m {
                    return Err(ctx.at(t0, format!("`y` needs {m} values, found {}", rest.len())));
                }
                if y.replace(rest.iter().map(hex).collect::<Result<Vec<_>>>()?).is_some() {
                    return Err(ctx.at(t0, "duplicate `y` line"));
                }
            }
            "beta" if rest.len() == 1 => {
                if beta.replace(hex(&rest[0])?).is_some() {
                    return Err(ctx.at(t0, "duplicate `beta` line"));
                }
            }
            "x" | "enc" => {
                let (blk, pos, vt) = entry(&ctx, rest, spec, t0)?;
                if !seen.insert((t0.text, blk, pos)) {
                    return Err(ctx.at(t0, "duplicate entry"));
                }
                if t0.text == "x" {
                    set_entry(approx.get_or_insert_with(|| BlockVector::zeros(spec)), blk, pos, hex(&vt)?);
                } else {
                    let v = ctx.interval(&vt)?;
                    set_entry(enclosure.get_or_insert_with(|| BlockVector::filled(spec, Interval::ZERO)), blk, pos, v);
                }
            }
            "check" if rest.len() == 2 => checks.push(Check {
                name: rest[0].text.to_string(),
                value: hex(&rest[1])?,
            }),
            other => return Err(ctx.at(t0, format!("unknown or malformed record {other:?}"))),
        }
    }
    let kind = kind.ok_or_else(|| ctx.err(first.number, 1, "missing `kind` line"))?;
    let witness = match kind {
        CertificateKind::PrimalInfeasible => Witness::DualRay(y.ok_or_else(|| ctx.err(first.number, 1, "missing `y` line"))?),
        CertificateKind::DualInfeasible => Witness::PrimalRay {
            approx: approx.unwrap_or_else(|| BlockVector::zeros(spec)),
            beta: beta.ok_or_else(|| ctx.err(first.number, 1, "missing `beta` line"))?,
            enclosure: enclosure.unwrap_or_else(|| BlockVector::filled(spec, Interval::ZERO)),
        },
    };
    Ok(Certificate { kind, witness, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{check_dual_infeasible, check_primal_infeasible};
    use crate::problem::ConicProblem;

    fn lin(v: &[f64]) -> BlockVector<f64> {
        BlockVector {
            sdp: vec![],
            soc: vec![],
            lin: v.to_vec(),
        }
    }

    #[test]
    fn round_trips_both_kinds() {
        let spec = ConeSpec::lp(2);
        let p = ConicProblem::from_points(spec.clone(), vec![lin(&[1.0, 1.0])], vec![-0.1], lin(&[0.0, 0.0])).unwrap();
        let c = check_primal_infeasible(&p, &[0.3]).unwrap().certificate().unwrap().clone();
        assert_eq!(parse_certificate(&write_certificate(&c), "c", &spec, 1).unwrap(), c);

        let q = ConicProblem::from_points(spec.clone(), vec![lin(&[1.0, -1.0])], vec![0.0], lin(&[-1.0, 0.0])).unwrap();
        let c = check_dual_infeasible(&q, &lin(&[0.7, 0.7])).unwrap().certificate().unwrap().clone();
        assert_eq!(parse_certificate(&write_certificate(&c), "c", &spec, 1).unwrap(), c);
    }
}
