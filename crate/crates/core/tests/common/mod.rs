//! Brute-force oracles shared by the integration tests. None of them call
//! into the arrangement or piece code of the library.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use projtverberg::geometry::{LinSubspace, PointConfig, ProjPoint};
use projtverberg::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn random_affine(rng: &mut ChaCha8Rng, d: usize, n: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..n).map(|_| (0..d).map(|_| rng.random_range(-bound..=bound)).collect()).collect()
}

pub fn random_vector(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..len).map(|_| q(rng.random_range(-bound..=bound))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

pub fn random_config(rng: &mut ChaCha8Rng, d: usize, n: usize, bound: i64) -> PointConfig {
    PointConfig::from_affine_ints(d, &random_affine(rng, d, n, bound)).unwrap()
}

/// Random subspace of the given rank, retried until the rank is exact.
pub fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize, rank: usize, bound: i64) -> LinSubspace {
    loop {
        let rows: Vec<Vec<Scalar>> = (0..rank).map(|_| random_vector(rng, ambient, bound)).collect();
        let s = LinSubspace::span(ambient, &rows).unwrap();
        if s.rank() == rank {
            return s;
        }
    }
}

fn cross(a: &(Scalar, Scalar), b: &(Scalar, Scalar)) -> Scalar {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn upper(a: &(Scalar, Scalar)) -> bool {
    a.1.is_positive() || (a.1.is_zero() && a.0.is_positive())
}

fn angle_cmp(a: &(Scalar, Scalar), b: &(Scalar, Scalar)) -> Ordering {
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let c = cross(a, b);
            if c.is_positive() {
                Ordering::Less
            } else if c.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
    }
}

/// One direction strictly inside every open arc cut out of the circle by the
/// lines orthogonal to the given nonzero vectors.
pub fn generic_directions(ys: &[(Scalar, Scalar)]) -> Vec<(Scalar, Scalar)> {
    let mut dirs: Vec<(Scalar, Scalar)> = Vec::new();
    for y in ys {
        dirs.push((-y.1.clone(), y.0.clone()));
        dirs.push((y.1.clone(), -y.0.clone()));
    }
    if dirs.is_empty() {
        return vec![(q(1), q(0))];
    }
    dirs.sort_by(angle_cmp);
    dirs.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);
    let k = dirs.len();
    (0..k)
        .map(|i| {
            let (a, b) = (&dirs[i], &dirs[(i + 1) % k]);
            if cross(a, b).is_positive() {
                (&a.0 + &b.0, &a.1 + &b.1)
            } else {
                (-a.1.clone(), a.0.clone())
            }
        })
        .collect()
}

/// Generic members of the pencil spanned by one or two forms.
pub fn pencil_forms(rows: &[Vec<Scalar>], pts: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    match rows.len() {
        1 => vec![rows[0].clone()],
        2 => {
            let ys: Vec<(Scalar, Scalar)> = pts
                .iter()
                .map(|x| (dot(&rows[0], x), dot(&rows[1], x)))
                .filter(|y| !(y.0.is_zero() && y.1.is_zero()))
                .collect();
            generic_directions(&ys)
                .into_iter()
                .map(|(a, b)| rows[0].iter().zip(&rows[1]).map(|(f, g)| &a * f + &b * g).collect())
                .collect()
        }
        k => panic!("oracle handles pencils of dimension 1 or 2, got {k}"),
    }
}

/// Closed piece counts `(plus, minus)` of the pair `(f, g)`.
pub fn piece_counts(f: &[Scalar], g: &[Scalar], pts: &[Vec<Scalar>]) -> (usize, usize) {
    let (mut plus, mut minus) = (0, 0);
    for x in pts {
        let s = dot(f, x) * dot(g, x);
        plus += usize::from(!s.is_negative());
        minus += usize::from(!s.is_positive());
    }
    (plus, minus)
}

/// Smallest closed piece over all pairs `H1 ⊇ V`, `H2 ⊇ W`, when both
/// annihilators have dimension at most two.
pub fn brute_min_count(v: &LinSubspace, w: &LinSubspace, pts: &[Vec<Scalar>]) -> usize {
    let fs = pencil_forms(v.annihilator().basis(), pts);
    let gs = pencil_forms(w.annihilator().basis(), pts);
    let mut best = usize::MAX;
    for f in &fs {
        for g in &gs {
            let (p, m) = piece_counts(f, g, pts);
            best = best.min(p.min(m));
        }
    }
    best
}

/// Tukey depth of `c` among planar points, by sweeping every open arc of
/// normal directions.
pub fn tukey_depth_2d(c: &[Scalar], pts: &[Vec<Scalar>]) -> usize {
    let ys: Vec<(Scalar, Scalar)> =
        pts.iter().map(|p| (&p[0] - &c[0], &p[1] - &c[1])).filter(|y| !(y.0.is_zero() && y.1.is_zero())).collect();
    let zeros = pts.len() - ys.len();
    generic_directions(&ys)
        .iter()
        .map(|u| zeros + ys.iter().filter(|y| !(&u.0 * &y.0 + &u.1 * &y.1).is_negative()).count())
        .min()
        .unwrap_or(zeros)
}

fn orient(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Scalar {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

pub fn no_three_collinear(pts: &[Vec<Scalar>]) -> bool {
    let n = pts.len();
    (0..n).all(|i| (i + 1..n).all(|j| (j + 1..n).all(|k| !orient(&pts[i], &pts[j], &pts[k]).is_zero())))
}

/// Common point of the hulls of two parts of a planar 4-point set in
/// general position, decided by orientation tests alone.
pub fn radon_common_point(pts: &[Vec<Scalar>], a: &[usize], b: &[usize]) -> Option<Vec<Scalar>> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    match (small.len(), large.len()) {
        (1, 3) => {
            let p = &pts[small[0]];
            let s: Vec<Scalar> = (0..3).map(|k| orient(&pts[large[k]], &pts[large[(k + 1) % 3]], p)).collect();
            let inside = s.iter().all(|x| x.is_positive()) || s.iter().all(|x| x.is_negative());
            inside.then(|| p.clone())
        }
        (2, 2) => {
            let (p, r) = (&pts[small[0]], &pts[small[1]]);
            let (s, t) = (&pts[large[0]], &pts[large[1]]);
            let d1 = orient(p, r, s);
            let d2 = orient(p, r, t);
            let d3 = orient(s, t, p);
            let d4 = orient(s, t, r);
            if d1.is_positive() == d2.is_positive() || d3.is_positive() == d4.is_positive() {
                return None;
            }
            // p + (r - p) * d3 / (d3 - d4)
            let lam = &d3 / (&d3 - &d4);
            Some((0..2).map(|k| &p[k] + (&r[k] - &p[k]) * &lam).collect())
        }
        _ => None,
    }
}

pub fn homogeneous(affine: &[Scalar]) -> Vec<Scalar> {
    let mut v = affine.to_vec();
    v.push(Scalar::one());
    v
}

pub fn point_subspace(affine: &[Scalar]) -> LinSubspace {
    LinSubspace::point(&ProjPoint::new(homogeneous(affine)).unwrap())
}

/// Gaussian binomial at `q = -1` from the recurrence
/// `[n, k] = [n-1, k-1] + q^k [n-1, k]`.
pub fn gaussian_at_minus_one(n: u32, k: u32) -> i128 {
    let n = n as usize;
    let mut row = vec![1i128];
    for m in 1..=n {
        let mut next = vec![0i128; m + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let left = if k > 0 { row[k - 1] } else { 0 };
            let right = if k < m { row[k] } else { 0 };
            let sign = if k % 2 == 0 { 1 } else { -1 };
            *slot = left + sign * right;
        }
        row = next;
    }
    row.get(k as usize).copied().unwrap_or(0)
}

pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Pascal's triangle reduced mod `p`.
pub fn pascal_mod(rows: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![1u64]];
    for n in 1..=rows {
        let prev = &out[n - 1];
        let row: Vec<u64> = (0..=n)
            .map(|k| {
                let a = if k > 0 { prev[k - 1] } else { 0 };
                let b = if k < n { prev[k] } else { 0 };
                (a + b) % p
            })
            .collect();
        out.push(row);
    }
    out
}

type Mono = Vec<u32>;

fn f2_mul(a: &HashMap<Mono, ()>, b: &HashMap<Mono, ()>) -> HashMap<Mono, ()> {
    let mut out: HashMap<Mono, ()> = HashMap::new();
    for x in a.keys() {
        for y in b.keys() {
            let m: Mono = x.iter().zip(y).map(|(i, j)| i + j).collect();
            if out.remove(&m).is_none() {
                out.insert(m, ());
            }
        }
    }
    out
}

fn artin_monomials(n: usize, degree: u32) -> Vec<Mono> {
    let mut out = vec![(vec![0u32; n], 0u32)];
    for i in 0..n {
        let mut next = Vec::new();
        for (m, deg) in &out {
            for e in 0..=i as u32 {
                if deg + e <= degree {
                    let mut m2 = m.clone();
                    m2[i] = e;
                    next.push((m2, deg + e));
                }
            }
        }
        out = next;
    }
    out.into_iter().filter(|(_, deg)| *deg == degree).map(|(m, _)| m).collect()
}

fn is_staircase_permutation(m: &[u32]) -> bool {
    let mut seen = vec![false; m.len()];
    for &e in m {
        match seen.get_mut(e as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

/// Whether `prod (x_i + x_j)^(m-1)`, `i <= d-v < j <= (d-v)+(d-w)`, survives
/// in `F2[x_1..x_{d+1}] / (e_1, ..., e_{d+1})`. A class is nonzero iff some
/// Artin monomial pairs with it to a nonzero top divided difference, and
/// the top divided difference of `x^a` is 1 mod 2 exactly when `a` is a
/// permutation of `(0, 1, ..., n-1)`.
pub fn flag_class_nonzero(d: u32, v: u32, w: u32, m: u32) -> bool {
    let n = (d + 1) as usize;
    let (vh, wh) = ((d - v) as usize, (d - w) as usize);
    let top = (n * (n - 1) / 2) as u32;
    let degree = (vh * wh) as u32 * (m - 1);
    if degree > top {
        return false;
    }
    let mut class: HashMap<Mono, ()> = HashMap::from([(vec![0; n], ())]);
    for _ in 0..m - 1 {
        for i in 0..vh {
            for j in vh..vh + wh {
                let mut xi = vec![0; n];
                xi[i] = 1;
                let mut xj = vec![0; n];
                xj[j] = 1;
                class = f2_mul(&class, &HashMap::from([(xi, ()), (xj, ())]));
            }
        }
    }
    artin_monomials(n, top - degree).iter().any(|q| {
        class
            .keys()
            .filter(|p| is_staircase_permutation(&p.iter().zip(q).map(|(a, b)| a + b).collect::<Vec<_>>()))
            .count()
            % 2
            == 1
    })
}
