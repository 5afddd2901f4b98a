//! Rigorous lower and upper bounds on the optimal value.
//!
//! Lower bound from an approximate dual `y~`: with `d = c - sum y~_i A_i`
//! and caps `x_bar` on primal optimal solutions,
//!
//! ```text
//!   f_p >= b^T y~ + sum over blocks of <d_minus, x_bar>
//! ```
//!
//! where the block terms are `<d-_lo, x_bar>` (orthant), `d-_n,lo * x_bar_n`
//! (second-order cone) and `l * d-_lo * x_bar` (semidefinite, `l` counting
//! possibly negative eigenvalues). Every term is nonpositive.
//!
//! Upper bound from an approximate primal `x~`: replace `x~` by a point `x+`
//! certified in `K`, bound its residual `r >= |A x+ - b|`, and with caps
//! `y_bar` on dual optimal solutions,
//!
//! ```text
//!   f_d <= <c, x+> + y_bar^T r.
//! ```

use rayon::prelude::*;

use crate::cones::{
    orthant_neg_lower, pos_part_upper, soc_contains, soc_neg_lower_last, verify_membership, BlockVector, UpperBoundX,
    UpperBoundY,
};
use crate::error::{Error, Result};
use crate::interval::{round, Interval};
use crate::linalg::{eig_enclose, is_psd_exact, psd_shift, EigEnclosure};
use crate::problem::ConicProblem;
use crate::sdpmat::SymMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Floating-point value of `b^T y~` or `<c, x~>` before any correction.
    pub approx_value: f64,
    /// Total correction added to the rounded base value.
    pub correction: f64,
    /// Smallest lower bound of a dual-slack negative part (0 if none).
    pub d_minus_min: f64,
    /// Total count of possibly negative eigenvalues over semidefinite blocks.
    pub neg_eig_count: usize,
    /// Smallest eigenvalue lower bound over semidefinite blocks.
    pub min_eig_lower: f64,
    /// Largest residual bound.
    pub residual_max: f64,
    /// Most negative shift applied to a semidefinite block.
    pub shift: f64,
    /// Widest enclosure among the problem data.
    pub input_max_width: f64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: f64,
    pub dual_feasible_proved: bool,
    pub primal_feasible_proved: bool,
    pub diagnostics: Diagnostics,
}

fn mul_cap_down(d_lo: f64, cap: f64) -> f64 {
    // d_lo <= 0 and cap >= 0; a zero factor wins over an infinite one.
    if d_lo == 0.0 || cap == 0.0 {
        0.0
    } else {
        round::mul_down(d_lo, cap)
    }
}

/// Rigorous lower bound on the primal optimal value.
///
/// `x_bar` must bound the primal optimal solutions (caller's responsibility).
/// Missing caps are treated as `+inf`, which makes the value `-inf` as soon as
/// the corresponding block of the dual slack is not proven in the cone.
pub fn lower_bound(p: &ConicProblem, y: &[f64], x_bar: Option<&UpperBoundX>) -> Result<BoundReport> {
    if y.len() != p.m() {
        return Err(Error::mismatch(format!("dual approximation has {} entries, expected {}", y.len(), p.m())));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("dual approximation".into()));
    }
    let spec = p.spec();
    let unknown = UpperBoundX::unknown(spec);
    let x_bar = x_bar.unwrap_or(&unknown);
    x_bar.validate(spec)?;

    let d = p.dual_slack(y)?;
    let by = p.b_dot(y)?;
    let encs: Vec<EigEnclosure> = d.sdp.par_iter().map(eig_enclose).collect::<Result<_>>()?;

    let mut terms = Vec::new();
    let mut d_min = 0.0f64;
    let mut uncapped = Vec::new();
    let mut neg_eig = 0;
    let mut min_eig = f64::INFINITY;
    for (k, e) in encs.iter().enumerate() {
        neg_eig += e.neg_count;
        min_eig = min_eig.min(e.min_lower());
        d_min = d_min.min(e.d_minus);
        if e.d_minus < 0.0 {
            let ld = round::mul_down(e.neg_count as f64, e.d_minus);
            terms.push(mul_cap_down(ld, x_bar.sdp[k]));
            if x_bar.sdp[k].is_infinite() {
                uncapped.push(format!("s{}", k + 1));
            }
        }
    }
    for (k, v) in d.soc.iter().enumerate() {
        let dn = soc_neg_lower_last(v);
        d_min = d_min.min(dn);
        if dn < 0.0 {
            terms.push(mul_cap_down(dn, x_bar.soc[k]));
            if x_bar.soc[k].is_infinite() {
                uncapped.push(format!("q{}", k + 1));
            }
        }
    }
    for (j, dn) in orthant_neg_lower(&d.lin).into_iter().enumerate() {
        d_min = d_min.min(dn);
        if dn < 0.0 {
            terms.push(mul_cap_down(dn, x_bar.lin[j]));
            if x_bar.lin[j].is_infinite() {
                uncapped.push(format!("l{}", j + 1));
            }
        }
    }
    let correction = terms.iter().fold(0.0, |s, &t| round::add_down(s, t));
    let value = round::add_down(by.lo(), correction);
    let note = if uncapped.is_empty() {
        None
    } else {
        Some(format!("dual slack not proven in the cone and no cap for block(s) {}", uncapped.join(",")))
    };
    Ok(BoundReport {
        kind: BoundKind::Lower,
        value,
        dual_feasible_proved: d_min == 0.0,
        primal_feasible_proved: false,
        diagnostics: Diagnostics {
            approx_value: p.b().iter().zip(y).map(|(b, y)| b.mid() * y).sum(),
            correction,
            d_minus_min: d_min,
            neg_eig_count: neg_eig,
            min_eig_lower: if encs.is_empty() { 0.0 } else { min_eig },
            input_max_width: p.max_input_width(),
            note,
            ..Default::default()
        },
    })
}

/// A constraint `<A_i, x> = 0` with `A_i` (or `-A_i`) a nonzero element of
/// the dual cone forces `x` onto a proper face of `K`: shifting `b_i` to the
/// wrong side by any amount makes the problem infeasible. Residual-based
/// upper bounds are not trusted for such problems.
pub fn zero_distance_row(p: &ConicProblem) -> Option<usize> {
    (0..p.m()).find(|&i| p.b()[i] == Interval::ZERO && (row_in_dual_cone(&p.rows()[i], 1.0) || row_in_dual_cone(&p.rows()[i], -1.0)))
}

fn row_in_dual_cone(row: &BlockVector<Interval>, sign: f64) -> bool {
    let flat = row.flatten();
    if flat.iter().all(|x| *x == Interval::ZERO) {
        return false;
    }
    let s = Interval::point(sign);
    if !row.lin.iter().all(|&v| (v * s).lo() >= 0.0) {
        return false;
    }
    if !row.soc.iter().all(|v| soc_contains(&v.iter().map(|&x| x * s).collect::<Vec<_>>())) {
        return false;
    }
    row.sdp.iter().all(|m| {
        let m = m.map(|&x| x * s);
        if eig_enclose(&m).map(|e| e.proves_psd()).unwrap_or(false) {
            return true;
        }
        m.packed().iter().all(|x| x.is_point()) && is_psd_exact(&m.map(|x| x.lo()))
    })
}

/// Rigorous upper bound on the dual optimal value.
///
/// `y_bar` must bound the dual optimal solutions (caller's responsibility).
/// The value is `+inf` when a residual remains and no cap is given, when a
/// semidefinite block cannot be shifted into the cone, or when a residual
/// remains on a problem at zero distance to primal infeasibility.
pub fn upper_bound(p: &ConicProblem, x: &BlockVector<f64>, y_bar: Option<&UpperBoundY>) -> Result<BoundReport> {
    let spec = p.spec();
    x.check_shape(spec, "primal approximation")?;
    if x.flatten().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("primal approximation".into()));
    }
    if let Some(yb) = y_bar {
        yb.validate(p.m())?;
    }
    let approx_value: f64 = p.c().flatten().iter().zip(p.flat_coefficients(&x.to_interval())).map(|(c, v)| c.mid() * v.mid()).sum();
    let mut diag = Diagnostics {
        approx_value,
        input_max_width: p.max_input_width(),
        ..Default::default()
    };
    let refuse = |mut diag: Diagnostics, note: String| BoundReport {
        kind: BoundKind::Upper,
        value: f64::INFINITY,
        dual_feasible_proved: false,
        primal_feasible_proved: false,
        diagnostics: {
            diag.note = Some(note);
            diag
        },
    };

    let shifts: Vec<Result<(SymMatrix<f64>, f64)>> = x.sdp.par_iter().map(psd_shift).collect();
    let mut sdp = Vec::with_capacity(shifts.len());
    for (k, s) in shifts.into_iter().enumerate() {
        match s {
            Ok((m, lo)) => {
                diag.shift = diag.shift.min(lo);
                sdp.push(m);
            }
            Err(Error::ShiftFailed) => {
                return Ok(refuse(diag, format!("could not certify block s{} positive semidefinite", k + 1)));
            }
            Err(e) => return Err(e),
        }
    }
    let rest = pos_part_upper(
        spec,
        &BlockVector {
            sdp: x.sdp.iter().map(|m| SymMatrix::zeros(m.order())).collect(),
            soc: x.soc.clone(),
            lin: x.lin.clone(),
        },
    )?;
    let xp = BlockVector {
        sdp,
        soc: rest.soc,
        lin: rest.lin,
    };

    let r = p.residual(&xp)?;
    diag.residual_max = r.iter().copied().fold(0.0, f64::max);
    let cx = p.objective(&xp)?;
    let exact = r.iter().all(|&v| v == 0.0);

    if !exact {
        if let Some(i) = zero_distance_row(p) {
            return Ok(refuse(
                diag,
                format!("residual is nonzero and constraint {} puts the problem at zero distance to infeasibility", i + 1),
            ));
        }
    }
    let mut terms = Vec::new();
    if !exact {
        let Some(yb) = y_bar else {
            return Ok(refuse(diag, "residual is nonzero and no y-bar was given".into()));
        };
        for (&ri, &yi) in r.iter().zip(&yb.0) {
            if ri != 0.0 && yi != 0.0 {
                terms.push(round::mul_up(ri, yi));
            }
        }
    }
    let correction = terms.iter().fold(0.0, |s, &t| round::add_up(s, t));
    let value = round::add_up(cx.hi(), correction);
    diag.correction = correction;
    let primal_feasible_proved = exact && verify_membership(spec, &xp.to_interval())?;
    Ok(BoundReport {
        kind: BoundKind::Upper,
        value,
        dual_feasible_proved: false,
        primal_feasible_proved,
        diagnostics: diag,
    })
}

/// `lower.value <= upper.value`; a `false` here means a soundness bug (or
/// caps `x_bar`/`y_bar` that do not actually bound the optimal solutions).
pub fn weak_duality_check(lower: &BoundReport, upper: &BoundReport) -> bool {
    lower.value <= upper.value
}
