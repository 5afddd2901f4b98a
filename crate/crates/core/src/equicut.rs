//! Minimum-weight balanced bipartition of a graph and its semidefinite
//! relaxation
//!
//! ```text
//!   min <L/4, X>  s.t.  diag(X) = e,  <e e^T, X> = 0,  X psd.
//! ```
//!
//! The constraint `<e e^T, X> = 0` forces `X e = 0`, so the feasible set has
//! no interior and the relaxation sits at zero distance to infeasibility. A
//! rigorous lower bound is still available from any approximate dual `y`,
//! using `lambda_max(X) <= n` for every feasible `X`.

use rayon::prelude::*;

use crate::cones::{BlockVector, ConeSpec};
use crate::error::{Error, Result};
use crate::interval::{round, Interval};
use crate::linalg::eig_enclose;
use crate::problem::ConicProblem;
use crate::sdpmat::SymMatrix;

/// Largest vertex count accepted by [`brute_force`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    w: SymMatrix<Interval>,
}

impl WeightedGraph {
    /// Builds a graph from `(i, j, w)` triples with 0-based `i != j`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Interval)]) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGraph(format!("vertex count must be even and positive, got {n}")));
        }
        let mut w = SymMatrix::zeros_interval(n);
        for &(i, j, v) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidGraph(format!("bad edge ({}, {})", i + 1, j + 1)));
            }
            if !v.lo().is_finite() || !v.hi().is_finite() {
                return Err(Error::InvalidGraph(format!("non-finite weight on edge ({}, {})", i + 1, j + 1)));
            }
            if w.get(i, j) != Interval::ZERO {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", i + 1, j + 1)));
            }
            w.set(i, j, v);
        }
        Ok(WeightedGraph { n, w })
    }

    /// Builds a graph from a dense row-major integer matrix (symmetric, zero diagonal).
    pub fn from_dense(n: usize, w: &[f64]) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            if w[i * n + i] != 0.0 {
                return Err(Error::InvalidGraph("nonzero diagonal".into()));
            }
            for j in i + 1..n {
                if w[i * n + j] != w[j * n + i] {
                    return Err(Error::InvalidGraph("weights are not symmetric".into()));
                }
                if w[i * n + j] != 0.0 {
                    edges.push((i, j, Interval::point(w[i * n + j])));
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> Interval {
        if i == j {
            Interval::ZERO
        } else {
            self.w.get(i, j)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition(Vec<i8>);

impl Partition {
    pub fn new(x: Vec<i8>) -> Result<Self> {
        if x.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidGraph("partition entries must be +1 or -1".into()));
        }
        let s: i64 = x.iter().map(|&v| v as i64).sum();
        if s != 0 {
            return Err(Error::Parity(s));
        }
        Ok(Partition(x))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }
}

/// `L = Diag(W e) - W`.
pub fn laplacian(g: &WeightedGraph) -> SymMatrix<Interval> {
    let n = g.n;
    let deg: Vec<Interval> = (0..n).map(|i| Interval::sum((0..n).map(|j| g.weight(i, j)))).collect();
    SymMatrix::from_fn(n, |i, j| if i == j { deg[i] } else { -g.weight(i, j) })
}

/// The relaxation as a conic problem: `m = n + 1`, one semidefinite block.
pub fn relaxation(g: &WeightedGraph) -> ConicProblem {
    let n = g.n;
    let spec = ConeSpec {
        sdp_orders: vec![n],
        soc_dims: vec![],
        lin_dim: 0,
    };
    let block = |m: SymMatrix<Interval>| BlockVector {
        sdp: vec![m],
        soc: vec![],
        lin: vec![],
    };
    let mut rows: Vec<BlockVector<Interval>> = (0..n)
        .map(|k| block(SymMatrix::from_fn(n, |i, j| if i == k && j == k { Interval::ONE } else { Interval::ZERO })))
        .collect();
    rows.push(block(SymMatrix::filled(n, Interval::ONE)));
    let mut b = vec![Interval::ONE; n];
    b.push(Interval::ZERO);
    let c = block(laplacian(g).map(|&v| v * 0.25));
    ConicProblem::new(spec, rows, b, c).expect("relaxation data are finite and conforming")
}

/// Rigorous lower bound `sum_{i<=n} y_i + l * n * d_minus` on the equicut
/// optimum, from `D = L/4 - Diag(y_{1:n}) - y_{n+1} e e^T`.
pub fn rigorous_lower(g: &WeightedGraph, y: &[f64]) -> Result<f64> {
    let n = g.n;
    if y.len() != n + 1 {
        return Err(Error::mismatch(format!("dual approximation has {} entries, expected {}", y.len(), n + 1)));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("dual approximation".into()));
    }
    let l = laplacian(g);
    let yn = Interval::point(y[n]);
    let d = SymMatrix::from_fn(n, |i, j| {
        let v = l.get(i, j) * 0.25 - yn;
        if i == j {
            v - y[i]
        } else {
            v
        }
    });
    let e = eig_enclose(&d)?;
    let base = Interval::sum(y[..n].iter().map(|&v| Interval::point(v))).lo();
    if e.d_minus == 0.0 {
        return Ok(base);
    }
    let corr = round::mul_down(round::mul_down(e.neg_count as f64, n as f64), e.d_minus);
    Ok(round::add_down(base, corr))
}

/// Rigorous upper bound on the weight of the cut, `sum_{i<j, x_i != x_j} w_ij`.
pub fn cut_value(g: &WeightedGraph, p: &Partition) -> Result<f64> {
    Ok(cut_interval(g, p)?.hi())
}

fn cut_interval(g: &WeightedGraph, p: &Partition) -> Result<Interval> {
    let x = p.signs();
    if x.len() != g.n {
        return Err(Error::mismatch(format!("partition of length {} for {} vertices", x.len(), g.n)));
    }
    let mut terms = Vec::new();
    for j in 0..g.n {
        for i in j + 1..g.n {
            if x[i] != x[j] {
                terms.push(g.weight(i, j));
            }
        }
    }
    Ok(Interval::sum(terms))
}

fn signs_of(mask: u32, n: usize) -> Vec<i8> {
    (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect()
}

/// Exhaustive optimum over all balanced partitions (`n <= 20`). Ties go to
/// the lexicographically smallest sign vector, ordering `-1 < +1`.
pub fn brute_force(g: &WeightedGraph) -> Result<(f64, Partition)> {
    let n = g.n;
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let best = (0u32..1 << n)
        .into_par_iter()
        .filter(|m| m.count_ones() as usize == n / 2)
        .map(|m| {
            let x = signs_of(m, n);
            let v = cut_interval(g, &Partition(x.clone())).expect("valid partition").hi();
            (v, x)
        })
        .reduce_with(|a, b| match a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)) {
            std::cmp::Ordering::Greater => b,
            _ => a,
        })
        .expect("at least one balanced partition");
    Ok((best.0, Partition(best.1)))
}

/// A good balanced partition by pairwise-swap local search, for graphs too
/// large to enumerate. Deterministic.
pub fn local_search(g: &WeightedGraph) -> Partition {
    let n = g.n;
    let mut x: Vec<i8> = (0..n).map(|i| if i < n / 2 { -1 } else { 1 }).collect();
    let w = |i: usize, j: usize| g.weight(i, j).mid();
    // gain[i]: change in cut weight from moving i alone to the other side.
    let gain = |x: &[i8], i: usize| -> f64 {
        (0..n).filter(|&j| j != i).map(|j| if x[j] == x[i] { w(i, j) } else { -w(i, j) }).sum()
    };
    loop {
        let mut best = (0.0, 0, 0);
        for i in 0..n {
            for j in 0..n {
                if x[i] == -1 && x[j] == 1 {
                    let delta = gain(&x, i) + gain(&x, j) + 2.0 * w(i, j);
                    if delta < best.0 {
                        best = (delta, i, j);
                    }
                }
            }
        }
        if best.0 >= -1e-12 {
            break;
        }
        x[best.1] = 1;
        x[best.2] = -1;
    }
    Partition(x)
}

/// Relative accuracy `(a - b) / max(1, (|a| + |b|) / 2)`.
pub fn accuracy_mu(a: f64, b: f64) -> f64 {
    (a - b) / f64::max(1.0, (a.abs() + b.abs()) / 2.0)
}
