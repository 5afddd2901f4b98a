//! Verified certificates of primal and dual infeasibility.
//!
//! Primal infeasibility: a `y` with `sum y_i A_i in K*` and `b^T y < 0`
//! rules out any `x in K` with `A x = b`. Dual infeasibility: an `x in K`
//! with `A x = 0` and `<c, x> < 0` rules out any dual feasible `y`. The
//! approximate ray for the dual case is replaced by an enclosure of an exact
//! solution of `[A; c^T] x = [0; beta]`, so the equations hold exactly for
//! some point that is then shown to lie in `K`.

use crate::cones::{orthant_contains, soc_contains, soc_tail_norm_upper, BlockVector};
use crate::error::{Error, Result};
use crate::interval::{IMatrix, Interval};
use crate::linalg::{eig_enclose, enclose_underdetermined, is_psd_exact};
use crate::problem::ConicProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    PrimalInfeasible,
    DualInfeasible,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::PrimalInfeasible => "primal_infeasible",
            CertificateKind::DualInfeasible => "dual_infeasible",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// The dual ray `y`, used exactly as given.
    DualRay(Vec<f64>),
    /// The approximate primal ray, the target `beta` and the verified enclosure.
    PrimalRay {
        approx: BlockVector<f64>,
        beta: f64,
        enclosure: BlockVector<Interval>,
    },
}

/// One verified inequality, `name` holding the rigorous bound that was tested.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub witness: Witness,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Certified(Certificate),
    Refused(String),
}

impl Verdict {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Refused(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }
}

fn check(name: &str, value: f64) -> Check {
    Check {
        name: name.to_string(),
        value,
    }
}

/// Membership of every member of `x` in `K`, recording the tested margins.
/// Semidefinite blocks with exact entries that the eigenvalue enclosure cannot
/// settle fall back to exact rational elimination.
fn cone_checks(x: &BlockVector<Interval>, checks: &mut Vec<Check>) -> Result<Option<String>> {
    for (k, m) in x.sdp.iter().enumerate() {
        let e = eig_enclose(m)?;
        checks.push(check(&format!("s{}_min_eig_lower", k + 1), e.min_lower()));
        if !e.proves_psd() {
            let exact = m.packed().iter().all(|v| v.is_point()) && is_psd_exact(&m.map(|v| v.lo()));
            if !exact {
                return Ok(Some(format!("block s{} not proven positive semidefinite", k + 1)));
            }
            checks.push(check(&format!("s{}_exact_psd", k + 1), 1.0));
        }
    }
    for (k, v) in x.soc.iter().enumerate() {
        checks.push(check(&format!("q{}_apex_lower", k + 1), v[v.len() - 1].lo()));
        checks.push(check(&format!("q{}_norm_upper", k + 1), soc_tail_norm_upper(v)));
        if !soc_contains(v) {
            return Ok(Some(format!("block q{} not proven in the second-order cone", k + 1)));
        }
    }
    if !x.lin.is_empty() {
        checks.push(check("lin_min_lower", x.lin.iter().map(|v| v.lo()).fold(f64::INFINITY, f64::min)));
        if !orthant_contains(&x.lin) {
            return Ok(Some("orthant block not proven nonnegative".into()));
        }
    }
    Ok(None)
}

/// Tries to certify primal infeasibility from an approximate dual ray.
pub fn check_primal_infeasible(p: &ConicProblem, y: &[f64]) -> Result<Verdict> {
    if y.len() != p.m() {
        return Err(Error::mismatch(format!("ray has {} entries, expected {}", y.len(), p.m())));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Ok(Verdict::Refused("ray has non-finite entries".into()));
    }
    let mut checks = Vec::new();
    let by = p.b_dot(y)?;
    checks.push(check("b_dot_y_upper", by.hi()));
    if !(by.hi() < 0.0) {
        return Ok(Verdict::Refused(format!("b^T y is not proven negative (upper bound {:e})", by.hi())));
    }
    let aty = p.adjoint(y)?;
    if let Some(reason) = cone_checks(&aty, &mut checks)? {
        return Ok(Verdict::Refused(format!("sum y_i A_i: {reason}")));
    }
    Ok(Verdict::Certified(Certificate {
        kind: CertificateKind::PrimalInfeasible,
        witness: Witness::DualRay(y.to_vec()),
        checks,
    }))
}

/// Tries to certify dual infeasibility from an approximate primal ray.
pub fn check_dual_infeasible(p: &ConicProblem, x: &BlockVector<f64>) -> Result<Verdict> {
    let spec = p.spec();
    x.check_shape(spec, "ray")?;
    let flat_x = x.flatten();
    if flat_x.iter().any(|v| !v.is_finite()) {
        return Ok(Verdict::Refused("ray has non-finite entries".into()));
    }
    let c_flat = p.flat_coefficients(p.c());
    let beta: f64 = c_flat.iter().zip(&flat_x).map(|(c, &v)| c.mid() * v).sum();
    if !(beta < 0.0) {
        return Ok(Verdict::Refused(format!("<c, x> is approximately {beta:e}, not negative")));
    }
    // Rows of A that vanish identically hold for every x and are dropped.
    let a = p.constraint_matrix();
    let mut data = Vec::new();
    let mut rows = 0;
    for i in 0..p.m() {
        if a.row(i).iter().any(|v| *v != Interval::ZERO) {
            data.extend_from_slice(a.row(i));
            rows += 1;
        }
    }
    data.extend_from_slice(&c_flat);
    let sys = IMatrix::new(rows + 1, spec.dim(), data)?;
    let mut rhs = vec![Interval::ZERO; rows];
    rhs.push(Interval::point(beta));
    let Some(enc) = enclose_underdetermined(&sys, &rhs, &flat_x) else {
        return Ok(Verdict::Refused("enclosure refused: could not verify a solution of [A; c^T] x = [0; beta]".into()));
    };
    let enclosure = BlockVector::from_flat(spec, &enc)?;
    let mut checks = vec![check("beta", beta)];
    if let Some(reason) = cone_checks(&enclosure, &mut checks)? {
        return Ok(Verdict::Refused(format!("enclosure: {reason}")));
    }
    let cx = p.objective(&enclosure)?;
    checks.push(check("c_dot_x_upper", cx.hi()));
    if !(cx.hi() < 0.0) {
        return Ok(Verdict::Refused(format!("<c, x> over the enclosure is not proven negative ({:e})", cx.hi())));
    }
    Ok(Verdict::Certified(Certificate {
        kind: CertificateKind::DualInfeasible,
        witness: Witness::PrimalRay {
            approx: x.clone(),
            beta,
            enclosure,
        },
        checks,
    }))
}

/// Re-runs the checks for a stored certificate; `true` iff the verdict and
/// every recorded value (and, for dual infeasibility, the enclosure) agree
/// bit for bit.
pub fn reverify(p: &ConicProblem, cert: &Certificate) -> Result<bool> {
    let fresh = match (&cert.kind, &cert.witness) {
        (CertificateKind::PrimalInfeasible, Witness::DualRay(y)) => check_primal_infeasible(p, y)?,
        (CertificateKind::DualInfeasible, Witness::PrimalRay { approx, .. }) => check_dual_infeasible(p, approx)?,
        _ => return Ok(false),
    };
    let Verdict::Certified(f) = fresh else {
        return Ok(false);
    };
    Ok(f.kind == cert.kind && bits_equal(&f, cert))
}

fn bits_equal(a: &Certificate, b: &Certificate) -> bool {
    let same = |x: f64, y: f64| x.to_bits() == y.to_bits();
    let checks = a.checks.len() == b.checks.len()
        && a.checks.iter().zip(&b.checks).all(|(x, y)| x.name == y.name && same(x.value, y.value));
    let witness = match (&a.witness, &b.witness) {
        (Witness::DualRay(x), Witness::DualRay(y)) => x.len() == y.len() && x.iter().zip(y).all(|(&u, &v)| same(u, v)),
        (
            Witness::PrimalRay {
                approx: ax,
                beta: ab,
                enclosure: ae,
            },
            Witness::PrimalRay {
                approx: bx,
                beta: bb,
                enclosure: be,
            },
        ) => {
            let fa = ax.flatten();
            let fb = bx.flatten();
            let ea = ae.flatten();
            let eb = be.flatten();
            same(*ab, *bb)
                && fa.len() == fb.len()
                && fa.iter().zip(&fb).all(|(&u, &v)| same(u, v))
                && ea.len() == eb.len()
                && ea.iter().zip(&eb).all(|(u, v)| same(u.lo(), v.lo()) && same(u.hi(), v.hi()))
        }
        _ => false,
    };
    checks && witness
}
