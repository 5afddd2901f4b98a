//! Cone structure and the verified cone operations.
//!
//! A [`ConeSpec`] is a product of semidefinite blocks, second-order
//! (ice-cream) cones `{x : x_n >= ||x_{1:n-1}||}`, and one nonnegative
//! orthant. All three are self-dual, so the same membership tests serve for
//! `K` and `K*`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::{round, Interval, Scalar};
use crate::linalg::{eig_enclose, psd_shift};
use crate::sdpmat::{packed_len, sym_inner, SymMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConeSpec {
    pub sdp_orders: Vec<usize>,
    pub soc_dims: Vec<usize>,
    pub lin_dim: usize,
}

impl ConeSpec {
    pub fn new(sdp_orders: Vec<usize>, soc_dims: Vec<usize>, lin_dim: usize) -> Result<Self> {
        let spec = ConeSpec {
            sdp_orders,
            soc_dims,
            lin_dim,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lp(n: usize) -> Self {
        ConeSpec {
            lin_dim: n,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sdp_orders.contains(&0) {
            return Err(Error::InvalidSpec("semidefinite block of order 0".into()));
        }
        if let Some(d) = self.soc_dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSpec(format!("second-order cone of dimension {d} (need >= 2)")));
        }
        if self.dim() == 0 {
            return Err(Error::InvalidSpec("total dimension is zero".into()));
        }
        Ok(())
    }

    /// Number of scalar unknowns (packed triangles for semidefinite blocks).
    pub fn dim(&self) -> usize {
        self.sdp_orders.iter().map(|&s| packed_len(s)).sum::<usize>() + self.soc_dims.iter().sum::<usize>() + self.lin_dim
    }
}

impl fmt::Display for ConeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let list = |name: &str, v: &[usize]| {
            let mut s = name.to_string();
            for x in v {
                s.push_str(&format!(" {x}"));
            }
            s
        };
        if !self.sdp_orders.is_empty() {
            parts.push(list("sdp", &self.sdp_orders));
        }
        if !self.soc_dims.is_empty() {
            parts.push(list("soc", &self.soc_dims));
        }
        if self.lin_dim > 0 {
            parts.push(format!("lin {}", self.lin_dim));
        }
        write!(f, "{}", parts.join(" | "))
    }
}

impl FromStr for ConeSpec {
    type Err = Error;

    /// Parses `sdp 2 3 | soc 3 | lin 4`; sections may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let mut spec = ConeSpec::default();
        let mut seen = [false; 3];
        for part in s.split('|') {
            let mut words = part.split_whitespace();
            let Some(kind) = words.next() else {
                return Err(Error::InvalidSpec(format!("empty section in {s:?}")));
            };
            let nums = words
                .map(|w| w.parse::<usize>().map_err(|_| Error::InvalidSpec(format!("bad size {w:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let slot = match kind {
                "sdp" => 0,
                "soc" => 1,
                "lin" => 2,
                other => return Err(Error::InvalidSpec(format!("unknown cone {other:?}"))),
            };
            if std::mem::replace(&mut seen[slot], true) {
                return Err(Error::InvalidSpec(format!("repeated section {kind:?}")));
            }
            match slot {
                0 => spec.sdp_orders = nums,
                1 => spec.soc_dims = nums,
                _ => {
                    if nums.len() > 1 {
                        return Err(Error::InvalidSpec("lin takes a single size".into()));
                    }
                    spec.lin_dim = nums.first().copied().unwrap_or(0);
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// An element of the product space, one entry per block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockVector<T> {
    pub sdp: Vec<SymMatrix<T>>,
    pub soc: Vec<Vec<T>>,
    pub lin: Vec<T>,
}

impl<T: Copy> BlockVector<T> {
    pub fn filled(spec: &ConeSpec, v: T) -> Self {
        BlockVector {
            sdp: spec.sdp_orders.iter().map(|&s| SymMatrix::filled(s, v)).collect(),
            soc: spec.soc_dims.iter().map(|&n| vec![v; n]).collect(),
            lin: vec![v; spec.lin_dim],
        }
    }

    pub fn conforms(&self, spec: &ConeSpec) -> bool {
        self.sdp.len() == spec.sdp_orders.len()
            && self.sdp.iter().zip(&spec.sdp_orders).all(|(m, &s)| m.order() == s)
            && self.soc.len() == spec.soc_dims.len()
            && self.soc.iter().zip(&spec.soc_dims).all(|(v, &n)| v.len() == n)
            && self.lin.len() == spec.lin_dim
    }

    pub fn check_shape(&self, spec: &ConeSpec, what: &str) -> Result<()> {
        if self.conforms(spec) {
            Ok(())
        } else {
            Err(Error::mismatch(format!("{what} does not match cone structure {spec}")))
        }
    }

    /// Concatenation: packed semidefinite blocks, then cones, then orthant.
    pub fn flatten(&self) -> Vec<T> {
        let mut out = Vec::new();
        for m in &self.sdp {
            out.extend_from_slice(m.packed());
        }
        for v in &self.soc {
            out.extend_from_slice(v);
        }
        out.extend_from_slice(&self.lin);
        out
    }

    pub fn from_flat(spec: &ConeSpec, flat: &[T]) -> Result<Self> {
        if flat.len() != spec.dim() {
            return Err(Error::mismatch(format!("{} values for dimension {}", flat.len(), spec.dim())));
        }
        let mut at = 0;
        let mut take = |k: usize| {
            let s = &flat[at..at + k];
            at += k;
            s.to_vec()
        };
        let sdp = spec
            .sdp_orders
            .iter()
            .map(|&s| SymMatrix::from_packed(s, take(packed_len(s))))
            .collect::<Result<Vec<_>>>()?;
        let soc = spec.soc_dims.iter().map(|&n| take(n)).collect();
        let lin = take(spec.lin_dim);
        Ok(BlockVector { sdp, soc, lin })
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(&T) -> U) -> BlockVector<U> {
        BlockVector {
            sdp: self.sdp.iter().map(|m| m.map(&mut f)).collect(),
            soc: self.soc.iter().map(|v| v.iter().map(&mut f).collect()).collect(),
            lin: self.lin.iter().map(&mut f).collect(),
        }
    }
}

impl<T: Scalar> BlockVector<T> {
    /// Enclosure of `<self, other>` with the trace product on matrix blocks.
    pub fn inner<U: Scalar>(&self, other: &BlockVector<U>) -> Result<Interval> {
        if self.sdp.len() != other.sdp.len() || self.soc.len() != other.soc.len() {
            return Err(Error::mismatch("inner product of differently shaped block vectors"));
        }
        let mut terms = Vec::new();
        for (a, b) in self.sdp.iter().zip(&other.sdp) {
            terms.push(sym_inner(a, b)?);
        }
        for (a, b) in self.soc.iter().zip(&other.soc) {
            terms.push(dot_mixed(a, b)?);
        }
        terms.push(dot_mixed(&self.lin, &other.lin)?);
        Ok(Interval::sum(terms))
    }

    pub fn to_interval(&self) -> BlockVector<Interval> {
        self.map(|x| x.to_interval())
    }
}

fn dot_mixed<A: Scalar, B: Scalar>(a: &[A], b: &[B]) -> Result<Interval> {
    if a.len() != b.len() {
        return Err(Error::mismatch(format!("dot of lengths {} and {}", a.len(), b.len())));
    }
    Ok(Interval::sum(a.iter().zip(b).map(|(x, y)| x.to_interval() * y.to_interval())))
}

impl BlockVector<f64> {
    pub fn zeros(spec: &ConeSpec) -> Self {
        Self::filled(spec, 0.0)
    }
}

/// Caps `x_bar` on primal solutions: one eigenvalue cap per semidefinite
/// block, one apex cap per second-order block, one cap per orthant
/// coordinate. `+inf` means "no cap known".
#[derive(Clone, Debug, PartialEq)]
pub struct UpperBoundX {
    pub sdp: Vec<f64>,
    pub soc: Vec<f64>,
    pub lin: Vec<f64>,
}

impl UpperBoundX {
    pub fn unknown(spec: &ConeSpec) -> Self {
        UpperBoundX {
            sdp: vec![f64::INFINITY; spec.sdp_orders.len()],
            soc: vec![f64::INFINITY; spec.soc_dims.len()],
            lin: vec![f64::INFINITY; spec.lin_dim],
        }
    }

    pub fn validate(&self, spec: &ConeSpec) -> Result<()> {
        if self.sdp.len() != spec.sdp_orders.len() || self.soc.len() != spec.soc_dims.len() || self.lin.len() != spec.lin_dim {
            return Err(Error::mismatch(format!("x-bar does not match cone structure {spec}")));
        }
        if self.sdp.iter().chain(&self.soc).chain(&self.lin).any(|&v| v.is_nan() || v < 0.0) {
            return Err(Error::InvalidProblem("x-bar caps must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Caps `y_bar >= |y|` on dual solutions; `+inf` means "no cap known".
#[derive(Clone, Debug, PartialEq)]
pub struct UpperBoundY(pub Vec<f64>);

impl UpperBoundY {
    pub fn validate(&self, m: usize) -> Result<()> {
        if self.0.len() != m {
            return Err(Error::mismatch(format!("y-bar has {} entries, expected {m}", self.0.len())));
        }
        if self.0.iter().any(|&v| v.is_nan() || v < 0.0) {
            return Err(Error::InvalidProblem("y-bar caps must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Lower bounds of `min(0, d_j)` over the enclosure.
pub fn orthant_neg_lower(d: &[Interval]) -> Vec<f64> {
    d.iter().map(|x| x.lo().min(0.0)).collect()
}

/// Upper bound on `||x_{1:n-1}||` over every member of the enclosure.
pub fn soc_tail_norm_upper<T: Scalar>(x: &[T]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for v in &x[..n - 1] {
        let m = v.to_interval().mag();
        s = round::add_up(s, round::mul_up(m, m));
    }
    round::sqrt_up(s)
}

fn soc_parts(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let xn = x[n - 1];
    let t = x[..n - 1].iter().map(|v| v * v).sum::<f64>().sqrt();
    if xn >= t {
        (x.to_vec(), vec![0.0; n])
    } else if xn <= -t {
        (vec![0.0; n], x.to_vec())
    } else {
        let a = (xn + t) / 2.0;
        let b = (xn - t) / 2.0;
        let mut pos: Vec<f64> = x[..n - 1].iter().map(|v| a * v / t).collect();
        let mut neg: Vec<f64> = x[..n - 1].iter().map(|v| -b * v / t).collect();
        pos.push(a);
        neg.push(b);
        (pos, neg)
    }
}

/// Projection onto the second-order cone (floating-point, three cases).
pub fn soc_pos_part(x: &[f64]) -> Vec<f64> {
    soc_parts(x).0
}

/// `x - soc_pos_part(x)`, the projection onto the polar cone.
pub fn soc_neg_part(x: &[f64]) -> Vec<f64> {
    soc_parts(x).1
}

/// Lower bound of the last coordinate of the negative part over every member
/// of `d`: `min{0, d_n, (d_n - ||d_{1:n-1}||)/2}`, which covers all three cases.
pub fn soc_neg_lower_last(d: &[Interval]) -> f64 {
    let dn = d[d.len() - 1].lo();
    let t = soc_tail_norm_upper(d);
    let half = round::mul_down(0.5, round::sub_down(dn, t));
    0.0f64.min(dn).min(half)
}

pub fn orthant_contains(x: &[Interval]) -> bool {
    x.iter().all(|v| v.lo() >= 0.0)
}

pub fn soc_contains<T: Scalar>(x: &[T]) -> bool {
    x[x.len() - 1].to_interval().lo() >= soc_tail_norm_upper(x)
}

pub fn sdp_contains(x: &SymMatrix<Interval>) -> Result<bool> {
    Ok(eig_enclose(x)?.proves_psd())
}

/// `true` only if every point of the enclosure lies in the cone.
pub fn verify_membership(spec: &ConeSpec, x: &BlockVector<Interval>) -> Result<bool> {
    x.check_shape(spec, "membership argument")?;
    if !orthant_contains(&x.lin) || !x.soc.iter().all(|v| soc_contains(v)) {
        return Ok(false);
    }
    for m in &x.sdp {
        if !sdp_contains(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A point inside `K` close to the projection of `x` onto `K`.
///
/// Fails only when a semidefinite block cannot be certified after shifting.
pub fn pos_part_upper(spec: &ConeSpec, x: &BlockVector<f64>) -> Result<BlockVector<f64>> {
    x.check_shape(spec, "approximate primal solution")?;
    let lin = x.lin.iter().map(|&v| v.max(0.0)).collect();
    let soc = x
        .soc
        .iter()
        .map(|v| {
            let mut p = if soc_contains(v) { v.clone() } else { soc_pos_part(v) };
            // Push the apex coordinate up until the rigorous test passes.
            let n = p.len();
            let t = soc_tail_norm_upper(&p);
            if !(p[n - 1] >= t) {
                p[n - 1] = t;
            }
            p
        })
        .collect();
    let sdp = x
        .sdp
        .iter()
        .map(|m| psd_shift(m).map(|(s, _)| s))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockVector { sdp, soc, lin })
}
