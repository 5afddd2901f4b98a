//! Exact oracles shared by the integration tests. Everything here works in
//! arbitrary-precision rationals and shares no code with the library's
//! floating-point paths.
#![allow(dead_code)]

use certicone::{Interval, SymMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(x: f64) -> Q {
    Q::from_float(x).expect("finite")
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exact value of a decimal literal such as `-12.5e-3`.
pub fn q_decimal(s: &str) -> Q {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().unwrap()),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: BigInt = format!("{int}{frac}").parse().unwrap();
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(digits);
    if scale >= 0 {
        v *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    if neg {
        -v
    } else {
        v
    }
}

/// `lo <= v <= hi`, with infinite endpoints treated as unbounded.
pub fn encloses(x: Interval, v: &Q) -> bool {
    let lo_ok = x.lo() == f64::NEG_INFINITY || (x.lo().is_finite() && q(x.lo()) <= *v);
    let hi_ok = x.hi() == f64::INFINITY || (x.hi().is_finite() && *v <= q(x.hi()));
    lo_ok && hi_ok
}

/// Dense rational copy of a point symmetric matrix.
pub fn q_matrix(a: &SymMatrix<f64>) -> Vec<Vec<Q>> {
    let n = a.order();
    (0..n).map(|i| (0..n).map(|j| q(a.get(i, j))).collect()).collect()
}

/// Inertia `(negative, zero, positive)` of a rational symmetric matrix.
///
/// The matrix is scaled to integers and reduced by fraction-free (Bareiss)
/// symmetric elimination: after `k` steps the trailing block equals `p_k`
/// times the Schur complement, where `p_k` is the `k`-th leading minor, so
/// each pivot's sign relative to the previous one is the sign of an `LDL^T`
/// pivot. When the trailing diagonal vanishes, the congruence
/// `row_i += row_j, col_i += col_j` creates the nonzero diagonal `2 a_ij`;
/// it touches only trailing indices, so the leading minors and the exact
/// divisibility of later steps are unaffected.
pub fn inertia(a: Vec<Vec<Q>>) -> (usize, usize, usize) {
    use num_integer::Integer;
    let n = a.len();
    let den = a.iter().flatten().fold(BigInt::from(1), |l, v| l.lcm(v.denom()));
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|v| v.numer() * (&den / v.denom())).collect()).collect();
    let (mut neg, mut pos) = (0, 0);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pick = match (k..n).find(|&i| !m[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let Some((i, j)) = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero()) else {
                    return (neg, n - k, pos);
                };
                for t in k..n {
                    let v = &m[i][t] + &m[j][t];
                    m[i][t] = v;
                }
                for t in k..n {
                    let v = &m[t][i] + &m[t][j];
                    m[t][i] = v;
                }
                i
            }
        };
        m.swap(k, pick);
        for row in m.iter_mut() {
            row.swap(k, pick);
        }
        let piv = m[k][k].clone();
        if piv.is_negative() == prev.is_negative() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&piv * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = piv;
    }
    (neg, 0, pos)
}

/// Number of eigenvalues `< t` and `<= t` of `a`.
pub fn eig_counts(a: &[Vec<Q>], t: &Q) -> (usize, usize) {
    let n = a.len();
    let shifted: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { &a[i][j] - t } else { a[i][j].clone() }).collect()).collect();
    let (neg, zero, _) = inertia(shifted);
    (neg, neg + zero)
}

/// `true` iff the i-th smallest eigenvalue lies in `enc[i]` for every `i`.
pub fn eig_intervals_contain(a: &[Vec<Q>], enc: &[Interval]) -> bool {
    enc.iter().enumerate().all(|(i, e)| {
        let below_lo = if e.lo() == f64::NEG_INFINITY { 0 } else { eig_counts(a, &q(e.lo())).0 };
        let upto_hi = if e.hi() == f64::INFINITY { a.len() } else { eig_counts(a, &q(e.hi())).1 };
        below_lo <= i && upto_hi > i
    })
}

/// Characteristic polynomial `det(tI - A)` by Faddeev-LeVerrier; coefficients
/// from the constant term up.
pub fn char_poly(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k.
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += &c[n - k + 1];
        }
        m = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        c[n - k] = -tr / qi(k as i64);
    }
    c
}

fn eval(p: &[Q], t: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, bc) in b.iter().enumerate() {
            let v = &r[k + i] - &f * bc;
            r[k + i] = v;
        }
        r.pop();
        r = trim(r);
        if r.len() <= db {
            break;
        }
    }
    if r.is_empty() {
        r.push(Q::zero());
    }
    trim(r)
}

/// Sturm sequence; counts distinct roots, repeated ones included once.
fn sturm(p: &[Q]) -> Vec<Vec<Q>> {
    let dp: Vec<Q> = (1..p.len()).map(|k| &p[k] * qi(k as i64)).collect();
    let mut seq = vec![p.to_vec(), trim(dp)];
    loop {
        let n = seq.len();
        if seq[n - 1].len() == 1 {
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[Vec<Q>], t: &Q) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| eval(p, t))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_negative() { -1 } else { 1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct roots of `p` in `(a, b]`.
pub fn distinct_roots_in(p: &[Q], a: &Q, b: &Q) -> usize {
    let s = sturm(p);
    sign_changes(&s, a).saturating_sub(sign_changes(&s, b))
}

/// Small-order check: every interval contains a root of the characteristic
/// polynomial.
pub fn char_poly_roots_covered(a: &[Vec<Q>], enc: &[Interval]) -> bool {
    let p = char_poly(a);
    enc.iter().all(|e| {
        if !e.lo().is_finite() || !e.hi().is_finite() {
            return true;
        }
        let lo = q(e.lo());
        let at_lo = eval(&p, &lo).is_zero() as usize;
        distinct_roots_in(&p, &lo, &q(e.hi())) + at_lo > 0
    })
}

/// Exact rational `<a, b>` of two packed symmetric matrices (off-diagonals twice).
pub fn q_sym_inner(a: &SymMatrix<f64>, b: &SymMatrix<f64>) -> Q {
    let mut s = Q::zero();
    for j in 0..a.order() {
        for i in j..a.order() {
            let t = q(a.get(i, j)) * q(b.get(i, j));
            s += if i == j { t } else { t * qi(2) };
        }
    }
    s
}

/// Cone structures drawn from four families: LP (`lin n`, n <= 50), SOC (up
/// to 5 blocks of dimension <= 10), SDP (order <= 12) and mixed.
pub fn family_spec(family: usize, seed: u64) -> certicone::ConeSpec {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let (sdp, soc, lin): (Vec<usize>, Vec<usize>, usize) = match family % 4 {
        0 => (vec![], vec![], rng.random_range(1..=50)),
        1 => (vec![], (0..rng.random_range(1..=5)).map(|_| rng.random_range(2..=10)).collect(), 0),
        2 => ((0..rng.random_range(1..=2)).map(|_| rng.random_range(1..=12)).collect(), vec![], 0),
        _ => (
            (0..rng.random_range(0..=2)).map(|_| rng.random_range(1..=6)).collect(),
            (0..rng.random_range(0..=2)).map(|_| rng.random_range(2..=6)).collect(),
            rng.random_range(1..=10),
        ),
    };
    certicone::ConeSpec::new(sdp, soc, lin).expect("nonempty")
}

#[cfg(test)]
mod selftest {
    use super::*;

    #[test]
    fn inertia_of_known_matrices() {
        let m = |v: &[&[i64]]| v.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect::<Vec<Vec<Q>>>();
        assert_eq!(inertia(m(&[&[0, 1], &[1, 0]])), (1, 0, 1));
        assert_eq!(inertia(m(&[&[1, 1], &[1, 1]])), (0, 1, 1));
        assert_eq!(inertia(m(&[&[0, 0], &[0, -3]])), (1, 1, 0));
        assert_eq!(char_poly(&m(&[&[2, 0], &[0, 3]])), vec![qi(6), qi(-5), qi(1)]);
        assert_eq!(q_decimal("-1.25e1"), qi(-25) / qi(2));
    }
}
