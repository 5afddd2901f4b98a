use std::ops::{Deref, Index};

use super::{round, Interval};
use crate::error::{Error, Result};

/// Upper bound on `|a|` over the whole interval.
#[inline]
pub fn mag_upper(a: Interval) -> f64 {
    a.mag()
}

/// Enclosure of `sum x_i y_i`.
pub fn dot(x: &[Interval], y: &[Interval]) -> Result<Interval> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "dot of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(Interval::sum(x.iter().zip(y).map(|(&a, &b)| a * b)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IVector(Vec<Interval>);

impl IVector {
    pub fn new(items: Vec<Interval>) -> Self {
        IVector(items)
    }

    pub fn from_points(xs: &[f64]) -> Self {
        IVector(xs.iter().map(|&x| Interval::point(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        IVector(vec![Interval::ZERO; n])
    }

    pub fn dot(&self, other: &IVector) -> Result<Interval> {
        dot(&self.0, &other.0)
    }

    /// Upper bound on `max_i |x_i|`.
    pub fn norm_inf_upper(&self) -> f64 {
        self.0.iter().map(|x| x.mag()).fold(0.0, f64::max)
    }

    /// Upper bound on the Euclidean norm.
    pub fn norm2_upper(&self) -> f64 {
        let mut s = 0.0;
        for x in &self.0 {
            let m = x.mag();
            s = round::add_up(s, round::mul_up(m, m));
        }
        round::sqrt_up(s)
    }

    pub fn into_inner(self) -> Vec<Interval> {
        self.0
    }
}

impl Deref for IVector {
    type Target = [Interval];
    fn deref(&self) -> &[Interval] {
        &self.0
    }
}

impl From<Vec<Interval>> for IVector {
    fn from(v: Vec<Interval>) -> Self {
        IVector(v)
    }
}

/// Dense row-major interval matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Interval>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMatrix {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn from_points(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Interval::point(x)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Interval) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matvec(&self, x: &[Interval]) -> Result<IVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok(IVector((0..self.rows).map(|i| Interval::sum(self.row(i).iter().zip(x).map(|(&a, &b)| a * b))).collect()))
    }

    /// Upper bound on the maximum absolute row sum of every member matrix.
    pub fn norm_inf_upper(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(0.0, |s, a| round::add_up(s, a.mag())))
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for IMatrix {
    type Output = Interval;
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}
