use crate::cones::{BlockVector, ConeSpec};
use crate::error::{Error, Result};
use crate::interval::{IMatrix, Interval, Scalar};
use crate::sdpmat::SymMatrix;

/// `min <c, x>  s.t.  <A_i, x> = b_i (i = 1..m),  x in K`, with dual
/// `max b^T y  s.t.  c - sum_i y_i A_i in K*`.
///
/// Data are intervals so that decimal inputs which are not representable in
/// binary64 are carried as enclosures; every statement about the problem is
/// made for all members simultaneously.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicProblem {
    spec: ConeSpec,
    rows: Vec<BlockVector<Interval>>,
    b: Vec<Interval>,
    c: BlockVector<Interval>,
}

fn all_finite(v: &BlockVector<Interval>) -> bool {
    v.flatten().iter().all(|x| x.lo().is_finite() && x.hi().is_finite())
}

impl ConicProblem {
    pub fn new(spec: ConeSpec, rows: Vec<BlockVector<Interval>>, b: Vec<Interval>, c: BlockVector<Interval>) -> Result<Self> {
        spec.validate()?;
        if rows.is_empty() {
            return Err(Error::InvalidProblem("a problem needs at least one constraint".into()));
        }
        if rows.len() != b.len() {
            return Err(Error::mismatch(format!("{} constraint rows but {} right-hand sides", rows.len(), b.len())));
        }
        for (i, r) in rows.iter().enumerate() {
            r.check_shape(&spec, &format!("constraint {}", i + 1))?;
            if !all_finite(r) {
                return Err(Error::NonFinite(format!("constraint {}", i + 1)));
            }
        }
        c.check_shape(&spec, "cost")?;
        if !all_finite(&c) {
            return Err(Error::NonFinite("cost".into()));
        }
        if b.iter().any(|x| !x.lo().is_finite() || !x.hi().is_finite()) {
            return Err(Error::NonFinite("right-hand side".into()));
        }
        Ok(ConicProblem { spec, rows, b, c })
    }

    /// Convenience constructor from exact binary64 data.
    pub fn from_points(spec: ConeSpec, rows: Vec<BlockVector<f64>>, b: Vec<f64>, c: BlockVector<f64>) -> Result<Self> {
        let finite = |v: &BlockVector<f64>| v.flatten().iter().all(|x| x.is_finite());
        if !rows.iter().all(finite) || !finite(&c) || !b.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("problem data".into()));
        }
        Self::new(
            spec,
            rows.iter().map(|r| r.to_interval()).collect(),
            b.iter().map(|&x| Interval::point(x)).collect(),
            c.to_interval(),
        )
    }

    pub fn spec(&self) -> &ConeSpec {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BlockVector<Interval>] {
        &self.rows
    }

    pub fn b(&self) -> &[Interval] {
        &self.b
    }

    pub fn c(&self) -> &BlockVector<Interval> {
        &self.c
    }

    /// Enclosures of `<A_i, x>`.
    pub fn apply<T: Scalar>(&self, x: &BlockVector<T>) -> Result<Vec<Interval>> {
        x.check_shape(&self.spec, "primal vector")?;
        self.rows.iter().map(|r| r.inner(x)).collect()
    }

    /// Enclosure of `<c, x>`.
    pub fn objective<T: Scalar>(&self, x: &BlockVector<T>) -> Result<Interval> {
        x.check_shape(&self.spec, "primal vector")?;
        self.c.inner(x)
    }

    /// Enclosure of `sum_i y_i A_i`.
    pub fn adjoint<T: Scalar>(&self, y: &[T]) -> Result<BlockVector<Interval>> {
        if y.len() != self.m() {
            return Err(Error::mismatch(format!("dual vector of length {}, expected {}", y.len(), self.m())));
        }
        let mut acc = BlockVector::filled(&self.spec, Interval::ZERO);
        for (row, yi) in self.rows.iter().zip(y) {
            let yi = yi.to_interval();
            if yi == Interval::ZERO {
                continue;
            }
            axpy(&mut acc, yi, row);
        }
        Ok(acc)
    }

    /// Enclosure of the dual slack `c - sum_i y_i A_i`.
    pub fn dual_slack<T: Scalar>(&self, y: &[T]) -> Result<BlockVector<Interval>> {
        let ay = self.adjoint(y)?;
        let mut d = self.c.clone();
        axpy(&mut d, Interval::point(-1.0), &ay);
        Ok(d)
    }

    /// Upper bounds `r_i >= |<A_i, x> - b_i|`.
    pub fn residual<T: Scalar>(&self, x: &BlockVector<T>) -> Result<Vec<f64>> {
        Ok(self.apply(x)?.iter().zip(&self.b).map(|(&ax, &bi)| (ax - bi).mag()).collect())
    }

    /// Upper bound on `b^T y`-style sums: enclosure of `b^T y`.
    pub fn b_dot<T: Scalar>(&self, y: &[T]) -> Result<Interval> {
        if y.len() != self.m() {
            return Err(Error::mismatch(format!("dual vector of length {}, expected {}", y.len(), self.m())));
        }
        Ok(Interval::sum(self.b.iter().zip(y).map(|(&bi, yi)| bi * yi.to_interval())))
    }

    /// Widest input datum; zero when every value is exactly representable.
    pub fn max_input_width(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.flatten())
            .chain(self.c.flatten())
            .chain(self.b.iter().copied())
            .map(|x| x.width())
            .fold(0.0, f64::max)
    }

    /// Coefficients of the linear map `x -> <v, x>` in flattened coordinates:
    /// off-diagonal entries of matrix blocks are counted twice.
    pub fn flat_coefficients(&self, v: &BlockVector<Interval>) -> Vec<Interval> {
        let mut out = Vec::with_capacity(self.spec.dim());
        for m in &v.sdp {
            let n = m.order();
            for (k, &a) in m.packed().iter().enumerate() {
                let (i, j) = m.coords_of(k);
                debug_assert!(i < n);
                out.push(if i == j { a } else { a * 2.0 });
            }
        }
        for s in &v.soc {
            out.extend_from_slice(s);
        }
        out.extend_from_slice(&v.lin);
        out
    }

    /// The `m x dim` matrix of the constraint map in flattened coordinates.
    pub fn constraint_matrix(&self) -> IMatrix {
        let dim = self.spec.dim();
        let data = self.rows.iter().flat_map(|r| self.flat_coefficients(r)).collect();
        IMatrix::new(self.m(), dim, data).expect("rows conform to the spec")
    }
}

fn axpy(acc: &mut BlockVector<Interval>, a: Interval, x: &BlockVector<Interval>) {
    for (m, xm) in acc.sdp.iter_mut().zip(&x.sdp) {
        let updated: Vec<Interval> = m.packed().iter().zip(xm.packed()).map(|(&u, &v)| u + a * v).collect();
        *m = SymMatrix::from_packed(m.order(), updated).expect("same order");
    }
    for (s, xs) in acc.soc.iter_mut().zip(&x.soc) {
        for (u, &v) in s.iter_mut().zip(xs) {
            *u = *u + a * v;
        }
    }
    for (u, &v) in acc.lin.iter_mut().zip(&x.lin) {
        *u = *u + a * v;
    }
}
