use nalgebra::DMatrix;

use crate::interval::{IMatrix, IVector, Interval};

const INFLATE_REL: f64 = 1.01;
const INFLATE_ABS: f64 = 1e-300;
const MAX_SWEEPS: usize = 10;

fn inflate(x: Interval) -> Interval {
    // X * [2 - 1.01, 1.01] + [-1e-300, 1e-300], computed outward.
    let f = Interval::new(2.0 - INFLATE_REL, INFLATE_REL).expect("valid factor");
    x * f + Interval::new(-INFLATE_ABS, INFLATE_ABS).expect("valid pad")
}

/// Encloses the solutions of `A x = b` for every member of `(A, b)`.
///
/// Residual form of the Krawczyk test: with `R ~ mid(A)^-1`, `z = R(b - A x~)`
/// and `C = I - R A`, any box `X` with `z + C X` strictly inside `X` proves
/// that every member system is uniquely solvable with solution in `x~ + X`.
pub fn enclose_square(a: &IMatrix, b: &[Interval], x_approx: &[f64]) -> Option<IVector> {
    let n = a.rows();
    if a.cols() != n || b.len() != n || x_approx.len() != n {
        return None;
    }
    if n == 0 {
        return Some(IVector::new(Vec::new()));
    }
    if x_approx.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let mid = DMatrix::from_fn(n, n, |i, j| a[(i, j)].mid());
    let r = mid.try_inverse()?;
    if r.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let xt = IVector::from_points(x_approx);
    let ax = a.matvec(&xt).ok()?;
    let defect: Vec<Interval> = b.iter().zip(ax.iter()).map(|(&bi, &ai)| bi - ai).collect();
    let z: Vec<Interval> = (0..n)
        .map(|i| Interval::sum((0..n).map(|k| defect[k] * r[(i, k)])))
        .collect();
    let mut c = IMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let ra = Interval::sum((0..n).map(|k| a[(k, j)] * r[(i, k)]));
            let e = if i == j { Interval::ONE - ra } else { -ra };
            c.set(i, j, e);
        }
    }
    let mut x = z.clone();
    for _ in 0..MAX_SWEEPS {
        let xe: Vec<Interval> = x.iter().map(|&v| inflate(v)).collect();
        let cx = c.matvec(&xe).ok()?;
        let y: Vec<Interval> = z.iter().zip(cx.iter()).map(|(&zi, &ci)| zi + ci).collect();
        if y.iter().zip(&xe).all(|(yi, xi)| yi.interior_of(*xi)) {
            return Some(IVector::new(y.iter().zip(x_approx).map(|(&yi, &xi)| yi + xi).collect()));
        }
        x = y;
    }
    None
}

/// Encloses one exact solution of a wide system `A x = b` (`k <= n` rows).
///
/// `n - k` columns are frozen at their approximate values; the basic columns
/// are picked by Gaussian elimination with complete pivoting on `mid(A)`,
/// scoring candidates by `|a_ij| * w_j` where `w_j` grows with `|x~_j|`. Large
/// components of `x~` therefore tend to become basic, while small ones, which
/// are the delicate ones for cone membership, stay exactly at `x~`.
pub fn enclose_underdetermined(a: &IMatrix, b: &[Interval], x_approx: &[f64]) -> Option<IVector> {
    let (k, n) = (a.rows(), a.cols());
    if k > n || b.len() != k || x_approx.len() != n {
        return None;
    }
    if k == n {
        return enclose_square(a, b, x_approx);
    }
    let basic = pivot_columns(a, x_approx)?;
    let mut is_basic = vec![false; n];
    for &j in &basic {
        is_basic[j] = true;
    }
    let mut sub = IMatrix::zeros(k, k);
    for i in 0..k {
        for (t, &j) in basic.iter().enumerate() {
            sub.set(i, t, a[(i, j)]);
        }
    }
    let rhs: Vec<Interval> = (0..k)
        .map(|i| {
            let frozen = Interval::sum((0..n).filter(|&j| !is_basic[j]).map(|j| a[(i, j)] * x_approx[j]));
            b[i] - frozen
        })
        .collect();
    let xb: Vec<f64> = basic.iter().map(|&j| x_approx[j]).collect();
    let sol = enclose_square(&sub, &rhs, &xb)?;
    let mut out: Vec<Interval> = x_approx.iter().map(|&x| Interval::point(x)).collect();
    for (t, &j) in basic.iter().enumerate() {
        out[j] = sol[t];
    }
    Some(IVector::new(out))
}

fn pivot_columns(a: &IMatrix, x_approx: &[f64]) -> Option<Vec<usize>> {
    let (k, n) = (a.rows(), a.cols());
    let xmax = x_approx.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let weight: Vec<f64> = if xmax > 0.0 {
        x_approx.iter().map(|x| x.abs().max(1e-3 * xmax) / xmax).collect()
    } else {
        vec![1.0; n]
    };
    let mut m: Vec<Vec<f64>> = (0..k).map(|i| (0..n).map(|j| a[(i, j)].mid()).collect()).collect();
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut row_used = vec![false; k];
    let mut col_used = vec![false; n];
    let mut basic = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in (0..k).filter(|&i| !row_used[i]) {
            for j in (0..n).filter(|&j| !col_used[j]) {
                let s = m[i][j].abs() * weight[j];
                // Ties go to the later column so leading coordinates stay frozen.
                if best.is_none_or(|(_, _, bs)| s >= bs) {
                    best = Some((i, j, s));
                }
            }
        }
        let (pi, pj, s) = best?;
        if s <= 1e-13 * scale {
            return None;
        }
        row_used[pi] = true;
        col_used[pj] = true;
        basic.push(pj);
        let piv = m[pi][pj];
        for i in (0..k).filter(|&i| !row_used[i]) {
            let f = m[i][pj] / piv;
            if f != 0.0 {
                for j in 0..n {
                    m[i][j] -= f * m[pi][j];
                }
            }
        }
    }
    basic.sort_unstable();
    Some(basic)
}
