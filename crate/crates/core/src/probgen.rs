//! Deterministic generator of small conic instances with known answers.
//!
//! All data are small integers, so every product and sum formed during
//! generation is exact in binary64. Optimal instances are built from a
//! complementary pair `x* in K`, `s* in K*` with `<s*, x*> = 0`, taking
//! `b = A x*` and `c = A^T y* + s*`; then `x*` and `y*` are optimal and
//! `f* = <c, x*> = b^T y*` holds exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones::{BlockVector, ConeSpec, UpperBoundX, UpperBoundY};
use crate::error::Result;
use crate::interval::Interval;
use crate::problem::ConicProblem;
use crate::sdpmat::SymMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ray {
    /// `y` with `sum y_i A_i in K*` and `b^T y = -1`.
    Dual(Vec<f64>),
    /// `x in K` with `A x = 0` and `<c, x> = -1`.
    Primal(BlockVector<f64>),
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub problem: ConicProblem,
    pub spec: ConeSpec,
    /// Exact point data, identical to the (zero-width) intervals in `problem`.
    pub rows: Vec<BlockVector<f64>>,
    pub b: Vec<f64>,
    pub c: BlockVector<f64>,
    pub status: Status,
    /// Optimal (or, for dual-infeasible instances, merely feasible) primal point.
    pub x_star: Option<BlockVector<f64>>,
    pub y_star: Option<Vec<f64>>,
    pub f_star: Option<f64>,
    pub witness: Option<Ray>,
    /// Caps satisfied by `x_star` / `y_star`.
    pub x_cap: Option<UpperBoundX>,
    pub y_cap: Option<UpperBoundY>,
}

const MAX_ROWS: usize = 12;

fn int(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    rng.random_range(lo..=hi) as f64
}

fn random_block(spec: &ConeSpec, rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> BlockVector<f64> {
    BlockVector {
        sdp: spec.sdp_orders.iter().map(|&s| SymMatrix::from_fn(s, |_, _| int(rng, lo, hi))).collect(),
        soc: spec.soc_dims.iter().map(|&n| (0..n).map(|_| int(rng, lo, hi)).collect()).collect(),
        lin: (0..spec.lin_dim).map(|_| int(rng, lo, hi)).collect(),
    }
}

/// Integer point strictly inside the second-order cone of dimension `n`.
fn soc_interior(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n - 1).map(|_| int(rng, -3, 3)).collect();
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    v.push(norm2.sqrt().ceil() + int(rng, 1, 3));
    v
}

/// Integer strictly diagonally dominant (hence positive definite) matrix.
fn pd_matrix(rng: &mut ChaCha8Rng, s: usize) -> SymMatrix<f64> {
    let mut m = SymMatrix::from_fn(s, |i, j| if i == j { 0.0 } else { int(rng, -2, 2) });
    for i in 0..s {
        let off: f64 = (0..s).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum();
        m.set(i, i, off + int(rng, 1, 3));
    }
    m
}

fn rows_for(spec: &ConeSpec, rng: &mut ChaCha8Rng, max_rows: usize) -> usize {
    let cap = spec.dim().min(MAX_ROWS).min(max_rows).max(1);
    rng.random_range(1..=cap)
}

/// Exact `sum_k coef_k x_k` for point data (off-diagonals counted twice).
fn inner_exact(a: &BlockVector<f64>, x: &BlockVector<f64>) -> f64 {
    a.inner(x).expect("conforming blocks").lo()
}

fn assemble(spec: &ConeSpec, rows: &[BlockVector<f64>], b: &[f64], c: &BlockVector<f64>) -> ConicProblem {
    ConicProblem::from_points(spec.clone(), rows.to_vec(), b.to_vec(), c.clone()).expect("generated data are valid")
}

fn axpy(acc: &mut BlockVector<f64>, a: f64, x: &BlockVector<f64>) {
    let f: Vec<f64> = acc.flatten().iter().zip(x.flatten()).map(|(u, v)| u + a * v).collect();
    *acc = BlockVector::from_flat(&acc_spec(acc), &f).expect("same shape");
}

fn acc_spec(v: &BlockVector<f64>) -> ConeSpec {
    ConeSpec {
        sdp_orders: v.sdp.iter().map(|m| m.order()).collect(),
        soc_dims: v.soc.iter().map(|s| s.len()).collect(),
        lin_dim: v.lin.len(),
    }
}

/// A feasible instance with known optimal pair.
pub fn gen_optimal(spec: &ConeSpec, seed: u64) -> GeneratedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rows_for(spec, &mut rng, usize::MAX);

    let mut x = BlockVector::zeros(spec);
    let mut s = BlockVector::zeros(spec);
    for (k, &order) in spec.sdp_orders.iter().enumerate() {
        for i in 0..order {
            if rng.random_bool(0.5) {
                x.sdp[k].set(i, i, int(&mut rng, 1, 5));
            } else {
                s.sdp[k].set(i, i, int(&mut rng, 1, 5));
            }
        }
    }
    for (k, &n) in spec.soc_dims.iter().enumerate() {
        if rng.random_bool(0.5) {
            x.soc[k] = soc_interior(&mut rng, n);
        } else {
            s.soc[k] = soc_interior(&mut rng, n);
        }
    }
    for j in 0..spec.lin_dim {
        if rng.random_bool(0.5) {
            x.lin[j] = int(&mut rng, 1, 5);
        } else {
            s.lin[j] = int(&mut rng, 1, 5);
        }
    }

    let rows: Vec<BlockVector<f64>> = (0..m).map(|_| random_block(spec, &mut rng, -5, 5)).collect();
    let y: Vec<f64> = (0..m).map(|_| int(&mut rng, -5, 5)).collect();
    let b: Vec<f64> = rows.iter().map(|r| inner_exact(r, &x)).collect();
    let mut c = s.clone();
    for (r, &yi) in rows.iter().zip(&y) {
        axpy(&mut c, yi, r);
    }
    let f_star = inner_exact(&c, &x);
    debug_assert_eq!(f_star, b.iter().zip(&y).map(|(u, v)| u * v).sum::<f64>());

    let lin_cap = x.lin.iter().copied().fold(1.0, f64::max);
    let x_cap = UpperBoundX {
        sdp: x.sdp.iter().map(|m| (0..m.order()).map(|i| m.get(i, i)).fold(1.0, f64::max)).collect(),
        soc: x
            .soc
            .iter()
            .map(|v| {
                let n = v.len();
                let t: f64 = v[..n - 1].iter().map(|a| a * a).sum();
                (v[n - 1] + t.sqrt().ceil()).max(1.0)
            })
            .collect(),
        lin: vec![lin_cap; spec.lin_dim],
    };
    let y_cap = UpperBoundY(vec![y.iter().map(|v| v.abs()).fold(1.0, f64::max); m]);

    GeneratedInstance {
        problem: assemble(spec, &rows, &b, &c),
        spec: spec.clone(),
        rows,
        b,
        c,
        status: Status::Optimal,
        x_star: Some(x),
        y_star: Some(y),
        f_star: Some(f_star),
        witness: None,
        x_cap: Some(x_cap),
        y_cap: Some(y_cap),
    }
}

fn interior_point(spec: &ConeSpec, rng: &mut ChaCha8Rng) -> BlockVector<f64> {
    BlockVector {
        sdp: spec.sdp_orders.iter().map(|&s| pd_matrix(rng, s)).collect(),
        soc: spec.soc_dims.iter().map(|&n| soc_interior(rng, n)).collect(),
        lin: (0..spec.lin_dim).map(|_| int(rng, 1, 5)).collect(),
    }
}

/// An instance with an exact dual ray proving primal infeasibility.
pub fn gen_primal_infeasible(spec: &ConeSpec, seed: u64) -> GeneratedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rows_for(spec, &mut rng, usize::MAX);
    let mut y: Vec<f64> = (0..m - 1).map(|_| int(&mut rng, -3, 3)).collect();
    y.push(1.0);
    let mut rows: Vec<BlockVector<f64>> = (0..m - 1).map(|_| random_block(spec, &mut rng, -5, 5)).collect();
    let s = interior_point(spec, &mut rng);
    let mut last = s;
    for (r, &yi) in rows.iter().zip(&y) {
        axpy(&mut last, -yi, r);
    }
    rows.push(last);
    let mut b: Vec<f64> = (0..m - 1).map(|_| int(&mut rng, -5, 5)).collect();
    let partial: f64 = b.iter().zip(&y).map(|(u, v)| u * v).sum();
    b.push(-1.0 - partial);
    let c = random_block(spec, &mut rng, -5, 5);
    GeneratedInstance {
        problem: assemble(spec, &rows, &b, &c),
        spec: spec.clone(),
        rows,
        b,
        c,
        status: Status::PrimalInfeasible,
        x_star: None,
        y_star: None,
        f_star: None,
        witness: Some(Ray::Dual(y)),
        x_cap: None,
        y_cap: None,
    }
}

/// Position (block vector coordinates) of a unit entry of the ray whose
/// coefficient in `<a, x>` is not doubled.
#[derive(Clone, Copy)]
enum Pivot {
    Lin(usize),
    SocTail(usize),
    SdpDiag(usize),
}

fn coef_at(v: &BlockVector<f64>, p: Pivot) -> f64 {
    match p {
        Pivot::Lin(j) => v.lin[j],
        Pivot::SocTail(k) => v.soc[k][0],
        Pivot::SdpDiag(k) => v.sdp[k].get(0, 0),
    }
}

fn set_coef(v: &mut BlockVector<f64>, p: Pivot, val: f64) {
    match p {
        Pivot::Lin(j) => v.lin[j] = val,
        Pivot::SocTail(k) => v.soc[k][0] = val,
        Pivot::SdpDiag(k) => v.sdp[k].set(0, 0, val),
    }
}

/// Forces `<a, ray> = target` by adjusting `a` at the pivot (ray entry 1 there).
fn fix_at_pivot(a: &mut BlockVector<f64>, ray: &BlockVector<f64>, p: Pivot, target: f64) {
    set_coef(a, p, 0.0);
    let rest = inner_exact(a, ray);
    set_coef(a, p, target - rest);
}

/// An instance with an exact primal ray proving dual infeasibility.
pub fn gen_dual_infeasible(spec: &ConeSpec, seed: u64) -> GeneratedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // One more equation (for <c, x>) still has to leave a free column.
    let m = rows_for(spec, &mut rng, spec.dim().saturating_sub(1).max(1));
    let mut ray = interior_point(spec, &mut rng);
    let pivot = if spec.lin_dim > 0 {
        ray.lin[0] = 1.0;
        Pivot::Lin(0)
    } else if !spec.soc_dims.is_empty() {
        ray.soc[0][0] = 1.0;
        let v = &mut ray.soc[0];
        let n = v.len();
        let t: f64 = v[..n - 1].iter().map(|a| a * a).sum();
        v[n - 1] = t.sqrt().ceil() + 1.0;
        Pivot::SocTail(0)
    } else {
        let x = &mut ray.sdp[0];
        for j in 1..x.order() {
            x.set(j, 0, 0.0);
        }
        x.set(0, 0, 1.0);
        Pivot::SdpDiag(0)
    };
    debug_assert_eq!(coef_at(&ray, pivot), 1.0);
    let mut rows: Vec<BlockVector<f64>> = (0..m).map(|_| random_block(spec, &mut rng, -5, 5)).collect();
    for r in &mut rows {
        fix_at_pivot(r, &ray, pivot, 0.0);
    }
    let mut c = random_block(spec, &mut rng, -5, 5);
    fix_at_pivot(&mut c, &ray, pivot, -1.0);
    let x0 = interior_point(spec, &mut rng);
    let b: Vec<f64> = rows.iter().map(|r| inner_exact(r, &x0)).collect();
    GeneratedInstance {
        problem: assemble(spec, &rows, &b, &c),
        spec: spec.clone(),
        rows,
        b,
        c,
        status: Status::DualInfeasible,
        x_star: Some(x0),
        y_star: None,
        f_star: None,
        witness: Some(Ray::Primal(ray)),
        x_cap: None,
        y_cap: None,
    }
}

/// Adds independent uniform noise in `[-eps, eps]` to every coordinate.
pub fn perturb(x: &BlockVector<f64>, eps: f64, seed: u64) -> BlockVector<f64> {
    if eps == 0.0 {
        return x.clone();
    }
    let flat = perturb_vec(&x.flatten(), eps, seed);
    BlockVector::from_flat(&acc_spec(x), &flat).expect("same shape")
}

pub fn perturb_vec(x: &[f64], eps: f64, seed: u64) -> Vec<f64> {
    if eps == 0.0 {
        return x.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    x.iter()
        .map(|&v| {
            let d = rng.random_range(-eps..=eps);
            v + d
        })
        .collect()
}

/// Pure noise of the given scale, shaped like `spec`.
pub fn noise(spec: &ConeSpec, scale: f64, seed: u64) -> BlockVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flat: Vec<f64> = (0..spec.dim()).map(|_| rng.random_range(-scale..=scale)).collect();
    BlockVector::from_flat(spec, &flat).expect("dimension matches")
}

pub fn noise_vec(m: usize, scale: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| rng.random_range(-scale..=scale)).collect()
}

/// Dispatches on a status name: `optimal`, `primal-infeasible`, `dual-infeasible`.
pub fn generate(spec: &ConeSpec, seed: u64, kind: &str) -> Option<GeneratedInstance> {
    match kind {
        "optimal" => Some(gen_optimal(spec, seed)),
        "primal-infeasible" => Some(gen_primal_infeasible(spec, seed)),
        "dual-infeasible" => Some(gen_dual_infeasible(spec, seed)),
        _ => None,
    }
}

/// `true` when the instance's defining identities hold exactly in interval
/// arithmetic (every enclosure collapses to the claimed integer).
pub fn self_check(inst: &GeneratedInstance) -> Result<bool> {
    let p = &inst.problem;
    match (&inst.status, &inst.witness) {
        (Status::Optimal, _) => {
            let (Some(x), Some(y), Some(f)) = (&inst.x_star, &inst.y_star, inst.f_star) else {
                return Ok(false);
            };
            let ax = p.apply(x)?;
            let feasible = ax.iter().zip(&inst.b).all(|(a, &b)| *a == Interval::point(b));
            let s = p.dual_slack(y)?;
            let comp = s.inner(x)? == Interval::ZERO;
            let val = p.objective(x)? == Interval::point(f) && p.b_dot(y)? == Interval::point(f);
            Ok(feasible && comp && val)
        }
        (Status::PrimalInfeasible, Some(Ray::Dual(y))) => Ok(p.b_dot(y)? == Interval::point(-1.0)),
        (Status::DualInfeasible, Some(Ray::Primal(x))) => {
            let ax = p.apply(x)?;
            Ok(ax.iter().all(|v| *v == Interval::ZERO) && p.objective(x)? == Interval::point(-1.0))
        }
        _ => Ok(false),
    }
}
