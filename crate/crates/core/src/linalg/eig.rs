use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::interval::{round, Interval};
use crate::sdpmat::SymMatrix;

/// Approximate eigendecomposition `D ~ Q diag(values) Q^T`, values ascending.
#[derive(Clone, Debug)]
pub struct ApproxEigen {
    pub values: Vec<f64>,
    /// Column-major: column `k` is the eigenvector for `values[k]`.
    pub vectors: DMatrix<f64>,
}

pub fn eig_approx(d: &SymMatrix<f64>) -> Result<ApproxEigen> {
    let n = d.order();
    if d.packed().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix passed to the eigensolver".into()));
    }
    let m = DMatrix::from_row_slice(n, n, &d.to_dense());
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(ApproxEigen { values, vectors })
}

/// Rigorous eigenvalue enclosure of a symmetric interval matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigEnclosure {
    /// `intervals[i]` contains the `i`-th smallest eigenvalue of every member.
    pub intervals: Vec<Interval>,
    /// Number of intervals whose lower end is negative.
    pub neg_count: usize,
    /// `min(0, smallest lower end)`.
    pub d_minus: f64,
    /// Perturbation radius used for the Weyl step (0 on the diagonal path).
    pub radius: f64,
}

impl EigEnclosure {
    fn from_intervals(intervals: Vec<Interval>, radius: f64) -> Self {
        let neg_count = intervals.iter().filter(|x| x.lo() < 0.0).count();
        let d_minus = intervals.iter().map(|x| x.lo()).fold(0.0, f64::min);
        EigEnclosure {
            intervals,
            neg_count,
            d_minus,
            radius,
        }
    }

    pub fn min_lower(&self) -> f64 {
        self.intervals.first().map_or(0.0, |x| x.lo())
    }

    /// Every member matrix is positive semidefinite.
    pub fn proves_psd(&self) -> bool {
        self.d_minus == 0.0
    }
}

fn is_diagonal(d: &SymMatrix<Interval>) -> bool {
    let n = d.order();
    (0..n).all(|j| (j + 1..n).all(|i| d.get(i, j) == Interval::ZERO))
}

/// Weyl-type enclosure of all eigenvalues of every matrix in `d`.
///
/// With `D~ = Q L Q^T` formed from an approximate decomposition, the error
/// `E = D - D~` is enclosed in interval arithmetic and `r >= ||E||_inf`. Since
/// the computed `Q` is not exactly orthogonal, `alpha >= ||Q^T Q - I||_inf`
/// bounds how far the eigenvalues of `D~` can drift from `L` (Ostrowski), so
/// the `i`-th eigenvalue lies within `r + alpha |L_i|` of `L_i`.
pub fn eig_enclose(d: &SymMatrix<Interval>) -> Result<EigEnclosure> {
    let n = d.order();
    if n == 0 {
        return Ok(EigEnclosure::from_intervals(Vec::new(), 0.0));
    }
    if is_diagonal(d) {
        // The eigenvalues of a diagonal matrix are its entries; sorting the
        // endpoints separately bounds every order statistic.
        let mut lo: Vec<f64> = (0..n).map(|i| d.get(i, i).lo()).collect();
        let mut hi: Vec<f64> = (0..n).map(|i| d.get(i, i).hi()).collect();
        lo.sort_by(f64::total_cmp);
        hi.sort_by(f64::total_cmp);
        let iv = lo.into_iter().zip(hi).map(|(a, b)| Interval::new(a, b).unwrap_or(Interval::ENTIRE)).collect();
        return Ok(EigEnclosure::from_intervals(iv, 0.0));
    }
    let mid = d.mid();
    if mid.packed().iter().any(|x| !x.is_finite()) || d.packed().iter().any(|x| !x.lo().is_finite() || !x.hi().is_finite()) {
        return Ok(EigEnclosure::from_intervals(vec![Interval::ENTIRE; n], f64::INFINITY));
    }
    let approx = eig_approx(&mid)?;
    let q = &approx.vectors;
    let lam = &approx.values;

    // r >= max_i sum_j |D_ij - (Q L Q^T)_ij|
    let ql: Vec<Vec<Interval>> = (0..n)
        .map(|i| (0..n).map(|k| Interval::point(q[(i, k)]) * lam[k]).collect())
        .collect();
    let mut r = 0.0f64;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            let qlq = Interval::sum((0..n).map(|k| ql[i][k] * q[(j, k)]));
            row = round::add_up(row, (d.get(i, j) - qlq).mag());
        }
        r = r.max(row);
    }

    // alpha >= ||Q^T Q - I||_inf
    let mut alpha = 0.0f64;
    for a in 0..n {
        let mut row = 0.0;
        for b in 0..n {
            let g = Interval::sum((0..n).map(|i| Interval::point(q[(i, a)]) * q[(i, b)]));
            let g = if a == b { g - 1.0 } else { g };
            row = round::add_up(row, g.mag());
        }
        alpha = alpha.max(row);
    }

    let intervals = lam
        .iter()
        .map(|&l| {
            let rad = if alpha >= 1.0 {
                f64::INFINITY
            } else {
                round::add_up(r, round::mul_up(alpha, l.abs()))
            };
            Interval::new(round::sub_down(l, rad), round::add_up(l, rad)).unwrap_or(Interval::ENTIRE)
        })
        .collect();
    Ok(EigEnclosure::from_intervals(intervals, r))
}

const SHIFT_ROUNDS: usize = 8;

/// Shifts `x` by a rigorous lower bound of `min(lambda_min, 0)` so that the
/// result is certified positive semidefinite. Returns the shifted matrix and
/// the (nonpositive) shift `x_lo`; the diagonal is raised by at least `-x_lo`.
pub fn psd_shift(x: &SymMatrix<f64>) -> Result<(SymMatrix<f64>, f64)> {
    let first = eig_enclose(&x.to_interval())?;
    if first.proves_psd() {
        return Ok((x.clone(), 0.0));
    }
    let shift_by = |s: f64| {
        let mut out = x.clone();
        for i in 0..x.order() {
            out.set(i, i, round::sub_up(x.get(i, i), s));
        }
        out
    };
    let x1 = first.d_minus;
    let shifted = shift_by(x1);
    let second = eig_enclose(&shifted.to_interval())?;
    if second.proves_psd() {
        return Ok((shifted, x1));
    }
    // x1 + 2 d2 is enough in exact arithmetic, but near a singular matrix
    // the margin is a few ulps of the diagonal and the enclosure radius
    // moves by as much. Keep doubling the extra shift for a few rounds.
    let mut factor = 2.0;
    for _ in 0..SHIFT_ROUNDS {
        let x2 = round::add_down(x1, round::mul_down(factor, second.d_minus));
        if !x2.is_finite() {
            break;
        }
        let shifted = shift_by(x2);
        if eig_enclose(&shifted.to_interval())?.proves_psd() {
            return Ok((shifted, x2));
        }
        factor *= 2.0;
    }
    Err(Error::ShiftFailed)
}
