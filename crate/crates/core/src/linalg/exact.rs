use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::sdpmat::SymMatrix;

/// Exact positive-semidefiniteness test for a binary64 matrix, by symmetric
/// elimination in rational arithmetic. A zero pivot is allowed only when the
/// rest of its row is zero as well.
pub fn is_psd_exact(x: &SymMatrix<f64>) -> bool {
    let n = x.order();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match BigRational::from_float(x.get(i, j)) {
                    Some(v) => v,
                    None => BigRational::zero(),
                })
                .collect()
        })
        .collect();
    if x.packed().iter().any(|v| !v.is_finite()) {
        return false;
    }
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_negative() {
            return false;
        }
        if p.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            a[i][k] = BigRational::zero();
        }
    }
    true
}
