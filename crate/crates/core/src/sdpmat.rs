//! Symmetric matrices stored as packed lower triangles.
//!
//! Entry `(i, j)` with `i >= j` lives at `j*s - j*(j-1)/2 + (i - j)`, i.e. the
//! lower triangle is packed column by column. Off-diagonal entries are stored
//! once and unscaled; [`sym_inner`] counts them twice, which gives the trace
//! inner product without ever forming a `sqrt(2)`-scaled vector.

use crate::error::{Error, Result};
use crate::interval::{Interval, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    order: usize,
    data: Vec<T>,
}

#[inline]
pub fn packed_len(order: usize) -> usize {
    order * (order + 1) / 2
}

#[inline]
fn packed_index(order: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    debug_assert!(i < order);
    j * (2 * order - j + 1) / 2 + (i - j)
}

impl<T: Copy> SymMatrix<T> {
    pub fn from_packed(order: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != packed_len(order) {
            return Err(Error::mismatch(format!(
                "{} packed entries for order {order}",
                data.len()
            )));
        }
        Ok(SymMatrix { order, data })
    }

    pub fn filled(order: usize, v: T) -> Self {
        SymMatrix {
            order,
            data: vec![v; packed_len(order)],
        }
    }

    /// Builds from a function of `(i, j)` evaluated on the lower triangle.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(packed_len(order));
        for j in 0..order {
            for i in j..order {
                data.push(f(i, j));
            }
        }
        SymMatrix { order, data }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn packed(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[packed_index(self.order, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = packed_index(self.order, i, j);
        self.data[k] = v;
    }

    /// Position of `(i, j)` inside [`SymMatrix::packed`].
    pub fn index_of(&self, i: usize, j: usize) -> usize {
        packed_index(self.order, i, j)
    }

    /// `(i, j)` with `i >= j` for a packed position.
    pub fn coords_of(&self, mut k: usize) -> (usize, usize) {
        for j in 0..self.order {
            let len = self.order - j;
            if k < len {
                return (j + k, j);
            }
            k -= len;
        }
        panic!("packed index out of range");
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(&T) -> U) -> SymMatrix<U> {
        SymMatrix {
            order: self.order,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<T> {
        let n = self.order;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

impl SymMatrix<f64> {
    pub fn zeros(order: usize) -> Self {
        Self::filled(order, 0.0)
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Symmetrizes a dense row-major matrix by averaging.
    pub fn from_dense(order: usize, a: &[f64]) -> Self {
        Self::from_fn(order, |i, j| {
            if i == j {
                a[i * order + i]
            } else {
                0.5 * a[i * order + j] + 0.5 * a[j * order + i]
            }
        })
    }

    pub fn to_interval(&self) -> SymMatrix<Interval> {
        self.map(|&x| Interval::point(x))
    }
}

impl SymMatrix<Interval> {
    pub fn zeros_interval(order: usize) -> Self {
        Self::filled(order, Interval::ZERO)
    }

    pub fn mid(&self) -> SymMatrix<f64> {
        self.map(|x| x.mid())
    }

    /// `X + t I`.
    pub fn add_scaled_identity(&self, t: Interval) -> SymMatrix<Interval> {
        let mut out = self.clone();
        for i in 0..self.order {
            let k = packed_index(self.order, i, i);
            out.data[k] = out.data[k] + t;
        }
        out
    }
}

/// Enclosure of the trace inner product `<X, Y>`.
pub fn sym_inner<A: Scalar, B: Scalar>(x: &SymMatrix<A>, y: &SymMatrix<B>) -> Result<Interval> {
    if x.order != y.order {
        return Err(Error::mismatch(format!(
            "inner product of orders {} and {}",
            x.order, y.order
        )));
    }
    let n = x.order;
    let mut terms = Vec::with_capacity(x.data.len());
    let mut k = 0;
    for j in 0..n {
        for i in j..n {
            let p = x.data[k].to_interval() * y.data[k].to_interval();
            terms.push(if i == j { p } else { p * 2.0 });
            k += 1;
        }
    }
    Ok(Interval::sum(terms))
}

/// Enclosure of `sum_k coeffs[k] * mats[k]`.
pub fn lincomb<C: Scalar, M: Scalar>(coeffs: &[C], mats: &[&SymMatrix<M>]) -> Result<SymMatrix<Interval>> {
    if coeffs.len() != mats.len() || mats.is_empty() {
        return Err(Error::mismatch(format!(
            "{} coefficients for {} matrices",
            coeffs.len(),
            mats.len()
        )));
    }
    let order = mats[0].order;
    if mats.iter().any(|m| m.order != order) {
        return Err(Error::mismatch("linear combination of different orders"));
    }
    let mut out = SymMatrix::zeros_interval(order);
    for (c, m) in coeffs.iter().zip(mats) {
        let c = c.to_interval();
        if c == Interval::ZERO {
            continue;
        }
        for (o, v) in out.data.iter_mut().zip(&m.data) {
            *o = *o + c * v.to_interval();
        }
    }
    Ok(out)
}
