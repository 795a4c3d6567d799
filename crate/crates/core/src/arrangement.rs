//! Open cells of central hyperplane arrangements.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::strictly_positive_direction;
use crate::scalar::{dot, is_zero_vec, primitive_integer_vector, Scalar, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignVector {
    pub signs: Vec<Sign>,
    /// Indices whose defining vector is identically zero.
    pub zero_support: Vec<usize>,
}

impl SignVector {
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn negated(&self) -> SignVector {
        SignVector {
            signs: self.signs.iter().map(|s| s.flip()).collect(),
            zero_support: self.zero_support.clone(),
        }
    }
}

/// A cell together with an exact interior point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCell {
    pub sign_vector: SignVector,
    pub witness: Vec<Scalar>,
}

/// Sign vector of `u` against every vector.
pub fn sign_vector_at(vectors: &[Vec<Scalar>], u: &[Scalar]) -> SignVector {
    let mut zero_support = Vec::new();
    let signs = vectors
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if is_zero_vec(a) {
                zero_support.push(i);
            }
            Sign::of(&dot(a, u))
        })
        .collect();
    SignVector { signs, zero_support }
}

/// All open cells of the central arrangement `{a_i . u = 0}` in R^dim.
///
/// Zero vectors do not cut space; their entries are 0 and their indices are
/// listed in `zero_support`. Cells come sorted by sign vector.
pub fn enumerate_open_cells(dim: usize, vectors: &[Vec<Scalar>]) -> Result<Vec<OpenCell>> {
    if dim == 0 {
        return Err(Error::EmptyAmbient);
    }
    for v in vectors {
        Error::check_len(dim, v.len())?;
    }
    // Parallel vectors cut along the same hyperplane; work with one
    // representative per direction.
    let mut reps: Vec<Vec<Scalar>> = Vec::new();
    let mut index: HashMap<Vec<Scalar>, usize> = HashMap::new();
    // (representative, orientation) per input vector
    let mut slot: Vec<Option<(usize, Sign)>> = Vec::with_capacity(vectors.len());
    let mut zero_support = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if is_zero_vec(v) {
            zero_support.push(i);
            slot.push(None);
            continue;
        }
        let key = primitive_integer_vector(v);
        let k = *index.entry(key.clone()).or_insert_with(|| {
            reps.push(key);
            reps.len() - 1
        });
        let first = v.iter().find(|x| !x.is_zero()).expect("nonzero");
        slot.push(Some((k, if first.is_positive() { Sign::Pos } else { Sign::Neg })));
    }
    let witnesses = match dim {
        _ if reps.is_empty() => {
            let mut u = vec![Scalar::zero(); dim];
            u[0] = Scalar::one();
            vec![u]
        }
        1 => vec![vec![Scalar::one()], vec![-Scalar::one()]],
        2 => planar_witnesses(&reps),
        3 => spatial_witnesses(&reps).unwrap_or_else(|| incremental_witnesses(dim, &reps)),
        _ => incremental_witnesses(dim, &reps),
    };
    let int_reps: Vec<Vec<BigInt>> = reps.iter().map(|v| clear_denominators(v)).collect();
    let mut cells: Vec<OpenCell> = witnesses
        .into_iter()
        .map(|w| {
            let wi = clear_denominators(&w);
            let rep_signs: Vec<Sign> = int_reps.iter().map(|a| int_sign(&idot(a, &wi))).collect();
            let signs = slot
                .iter()
                .map(|s| s.map_or(Sign::Zero, |(k, o)| rep_signs[k].times(o)))
                .collect();
            OpenCell { sign_vector: SignVector { signs, zero_support: zero_support.clone() }, witness: w }
        })
        .collect();
    cells.sort_by(|a, b| a.sign_vector.cmp(&b.sign_vector));
    debug_assert!(cells.windows(2).all(|p| p[0].sign_vector != p[1].sign_vector));
    Ok(cells)
}

/// Half-plane class then cross product: a total order on directions.
fn angle_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    let half = |v: &[Scalar]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

fn planar_witnesses(reps: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if reps.len() == 1 {
        let a = reps[0].clone();
        let b: Vec<Scalar> = a.iter().map(|x| -x.clone()).collect();
        return vec![a, b];
    }
    let mut rays: Vec<Vec<Scalar>> = Vec::with_capacity(2 * reps.len());
    for a in reps {
        rays.push(vec![-a[1].clone(), a[0].clone()]);
        rays.push(vec![a[1].clone(), -a[0].clone()]);
    }
    rays.sort_by(|a, b| angle_cmp(a, b));
    rays.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);
    let m = rays.len();
    (0..m)
        .map(|k| {
            let (p, q) = (&rays[k], &rays[(k + 1) % m]);
            vec![&p[0] + &q[0], &p[1] + &q[1]]
        })
        .collect()
}

fn cross(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn int_sign(z: &BigInt) -> Sign {
    if z.is_positive() {
        Sign::Pos
    } else if z.is_negative() {
        Sign::Neg
    } else {
        Sign::Zero
    }
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Positive integer multiple of a rational vector.
fn clear_denominators(v: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    v.iter().map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer()).collect()
}

/// Essential arrangements in R^3: every cell has an extreme ray on the
/// intersection of two planes, so walking around each such ray meets every
/// cell. `None` when the normals do not span. Runs in integers; `reps` are
/// primitive integer vectors.
fn spatial_witnesses(reps: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    if linalg::rank(reps, 3) < 3 {
        return None;
    }
    let reps: Vec<Vec<BigInt>> = reps.iter().map(|v| clear_denominators(v)).collect();
    let mut rays = BTreeSet::new();
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            let r = cross(a, b);
            if r.iter().any(|x| !x.is_zero()) {
                let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                let mut r: Vec<BigInt> = r.into_iter().map(|x| x / &g).collect();
                if r.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                    r.iter_mut().for_each(|x| *x = -x.clone());
                }
                rays.insert(r);
            }
        }
    }
    let mut seen: HashSet<Vec<Sign>> = HashSet::new();
    let mut out = Vec::new();
    for r0 in rays {
        let vals0: Vec<BigInt> = reps.iter().map(|a| idot(a, &r0)).collect();
        let through: Vec<usize> = (0..reps.len()).filter(|&i| vals0[i].is_zero()).collect();
        for flip in [false, true] {
            let (r, vals) = if flip {
                (r0.iter().map(|x| -x).collect::<Vec<_>>(), vals0.iter().map(|x| -x).collect::<Vec<_>>())
            } else {
                (r0.clone(), vals0.clone())
            };
            // two independent integer vectors orthogonal to r
            let k = (0..3).find(|&k| !r[k].is_zero()).expect("nonzero ray");
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let mut e1 = vec![BigInt::zero(); 3];
            e1[i] = r[k].clone();
            e1[k] = -r[i].clone();
            let mut e2 = vec![BigInt::zero(); 3];
            e2[j] = r[k].clone();
            e2[k] = -r[j].clone();
            let local: Vec<Vec<Scalar>> = through
                .iter()
                .map(|&t| vec![Scalar::from_integer(idot(&reps[t], &e1)), Scalar::from_integer(idot(&reps[t], &e2))])
                .collect();
            for xy in planar_witnesses(&local) {
                let xy = clear_denominators(&xy);
                let q: Vec<BigInt> = (0..3).map(|k| &xy[0] * &e1[k] + &xy[1] * &e2[k]).collect();
                // near r the sign is that of a.r, or of a.q on planes through r
                let mut signs: Vec<Sign> = vals.iter().map(int_sign).collect();
                for &t in &through {
                    signs[t] = int_sign(&idot(&reps[t], &q));
                }
                if !seen.insert(signs) {
                    continue;
                }
                // N r + q keeps the sign of every plane not through r
                let mut big_n = BigInt::one();
                for (a, s) in reps.iter().zip(&vals) {
                    if s.is_zero() {
                        continue;
                    }
                    let c = idot(a, &q);
                    if !c.is_zero() && s.is_positive() != c.is_positive() {
                        let need = c.abs() / s.abs() + 1;
                        if need > big_n {
                            big_n = need;
                        }
                    }
                }
                let u: Vec<BigInt> = r.iter().zip(&q).map(|(x, y)| &big_n * x + y).collect();
                let g = u.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                out.push(u.into_iter().map(|x| Scalar::from_integer(x / &g)).collect());
            }
        }
    }
    Some(out)
}

/// Inserts hyperplanes one at a time. A cell cut by the new hyperplane
/// through its witness splits by perturbation; otherwise the far side is
/// decided by an exact feasibility problem.
fn incremental_witnesses(dim: usize, reps: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    // each cell: oriented constraint vectors and a witness
    let mut cells: Vec<(Vec<Vec<Scalar>>, Vec<Scalar>)> = Vec::new();
    let a0 = &reps[0];
    let neg0: Vec<Scalar> = a0.iter().map(|x| -x.clone()).collect();
    cells.push((vec![a0.clone()], a0.clone()));
    cells.push((vec![neg0.clone()], neg0));
    for a in &reps[1..] {
        let neg_a: Vec<Scalar> = a.iter().map(|x| -x.clone()).collect();
        let mut next = Vec::with_capacity(cells.len() * 2);
        for (cons, u) in cells {
            let s = dot(a, &u);
            if s.is_zero() {
                let mut t = Scalar::one();
                for c in &cons {
                    let ca = dot(c, a).abs();
                    if ca.is_zero() {
                        continue;
                    }
                    let bound = dot(c, &u) / ca;
                    if bound < t {
                        t = bound;
                    }
                }
                t /= Scalar::from_integer(2.into());
                let plus: Vec<Scalar> = u.iter().zip(a).map(|(x, y)| x + &t * y).collect();
                let minus: Vec<Scalar> = u.iter().zip(a).map(|(x, y)| x - &t * y).collect();
                let mut cp = cons.clone();
                cp.push(a.clone());
                let mut cm = cons;
                cm.push(neg_a.clone());
                next.push((cp, plus));
                next.push((cm, minus));
                continue;
            }
            let (same, other) = if s.is_positive() { (a, &neg_a) } else { (&neg_a, a) };
            let mut trial = cons.clone();
            trial.push(other.clone());
            if let Some(w) = strictly_positive_direction(&trial, dim) {
                next.push((trial, w));
            }
            let mut kept = cons;
            kept.push(same.clone());
            next.push((kept, u));
        }
        cells = next;
    }
    cells.into_iter().map(|(_, u)| u).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
use crate::lp::strictly_positive_direction;
    use crate::scalar::ints;
    use Sign::*;

    /// Brute force over all sign patterns with an exact feasibility test.
    fn brute_cells(dim: usize, vs: &[Vec<Scalar>]) -> Vec<Vec<Sign>> {
        let n = vs.len();
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            let oriented: Vec<Vec<Scalar>> = vs
                .iter()
                .enumerate()
                .map(|(i, v)| if mask >> i & 1 == 1 { v.clone() } else { v.iter().map(|x| -x.clone()).collect() })
                .collect();
            if strictly_positive_direction(&oriented, dim).is_some() {
                out.push((0..n).map(|i| if mask >> i & 1 == 1 { Pos } else { Neg }).collect());
            }
        }
        out.sort();
        out
    }

    fn signs(cells: &[OpenCell]) -> Vec<Vec<Sign>> {
        cells.iter().map(|c| c.sign_vector.signs.clone()).collect()
    }

    #[test]
    fn one_dimensional() {
        let cells = enumerate_open_cells(1, &[ints(&[3])]).unwrap();
        assert_eq!(signs(&cells), vec![vec![Neg], vec![Pos]]);
    }

    #[test]
    fn three_lines_in_the_plane() {
        let vs = vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])];
        let cells = enumerate_open_cells(2, &vs).unwrap();
        assert_eq!(cells.len(), 6);
        assert_eq!(signs(&cells), brute_cells(2, &vs));
        assert!(!signs(&cells).contains(&vec![Pos, Pos, Neg]));
        for c in &cells {
            assert_eq!(sign_vector_at(&vs, &c.witness), c.sign_vector);
        }
    }

    #[test]
    fn duplicates_and_zeros() {
        let vs = vec![ints(&[1, 2]), ints(&[2, 4]), ints(&[0, 0]), ints(&[-1, -2])];
        let cells = enumerate_open_cells(2, &vs).unwrap();
        assert_eq!(signs(&cells), vec![vec![Neg, Neg, Zero, Pos], vec![Pos, Pos, Zero, Neg]]);
        assert_eq!(cells[0].sign_vector.zero_support, vec![2]);
        let cells = enumerate_open_cells(3, &[ints(&[0, 0, 0])]).unwrap();
        assert_eq!(cells.len(), 1);
    }

    #[test]
    fn space_arrangements_match_brute_force() {
        let vs = vec![
            ints(&[1, 0, 0]),
            ints(&[0, 1, 0]),
            ints(&[0, 0, 1]),
            ints(&[1, 1, 1]),
            ints(&[1, -2, 3]),
        ];
        let cells = enumerate_open_cells(3, &vs).unwrap();
        assert_eq!(signs(&cells), brute_cells(3, &vs));
        for c in &cells {
            assert_eq!(sign_vector_at(&vs, &c.witness), c.sign_vector);
        }
        let vs4 = vec![ints(&[1, 0, 0, 1]), ints(&[0, 1, 1, 0]), ints(&[1, 1, 0, 0]), ints(&[0, 0, 1, 1]), ints(&[1, -1, 1, -1])];
        assert_eq!(signs(&enumerate_open_cells(4, &vs4).unwrap()), brute_cells(4, &vs4));
    }

    #[test]
    fn spatial_walk_matches_insertion() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 3
        };
        for _ in 0..20 {
            let vs: Vec<Vec<Scalar>> = (0..8).map(|_| ints(&[next(), next(), next()])).collect();
            let reps: Vec<Vec<Scalar>> = {
                let mut r: Vec<Vec<Scalar>> = vs.iter().filter(|v| !is_zero_vec(v)).map(|v| primitive_integer_vector(v)).collect();
                r.sort();
                r.dedup();
                r
            };
            let Some(walk) = spatial_witnesses(&reps) else { continue };
            let mut a: Vec<Vec<Sign>> = walk.iter().map(|u| sign_vector_at(&reps, u).signs).collect();
            let mut b: Vec<Vec<Sign>> =
                incremental_witnesses(3, &reps).iter().map(|u| sign_vector_at(&reps, u).signs).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
            assert!(a.iter().all(|s| !s.contains(&Zero)));
        }
    }

    #[test]
    fn bad_input() {
        assert!(enumerate_open_cells(0, &[]).is_err());
        assert!(enumerate_open_cells(2, &[ints(&[1])]).is_err());
    }
}
