//! Exact phase-one simplex for systems `A y = b, y >= 0`.
//!
//! Infeasible systems come back with a Farkas multiplier `pi` satisfying
//! `pi . A_j <= 0` for every column and `pi . b > 0`, so both outcomes are
//! checkable certificates.

use num_traits::{Signed, Zero};

use crate::scalar::{dot, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    /// A nonnegative solution `y`.
    Feasible(Vec<Scalar>),
    /// A Farkas certificate of infeasibility.
    Infeasible(Vec<Scalar>),
}

/// Decides `A y = b, y >= 0` with Bland's rule (terminates on degenerate
/// problems). `a` is given row-wise: `a.len()` equations over `ncols` variables.
pub fn solve_standard_form(a: &[Vec<Scalar>], b: &[Scalar], ncols: usize) -> Feasibility {
    let m = a.len();
    debug_assert_eq!(b.len(), m);
    let width = ncols + m;
    let mut flipped = vec![false; m];
    // rows: [A | I | b]
    let mut t: Vec<Vec<Scalar>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width + 1);
        let neg = b[i].is_negative();
        flipped[i] = neg;
        for x in &a[i] {
            row.push(if neg { -x.clone() } else { x.clone() });
        }
        for k in 0..m {
            row.push(if k == i { Scalar::from_integer(1.into()) } else { Scalar::zero() });
        }
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (ncols..width).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut rc = vec![Scalar::zero(); width + 1];
    for row in &t {
        for j in 0..ncols {
            if !row[j].is_zero() {
                rc[j] -= &row[j];
            }
        }
        rc[width] -= &row[width];
    }

    loop {
        let Some(enter) = (0..width).find(|&j| rc[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // The phase-one objective is bounded below by zero.
        let (row, _) = leave.expect("phase-one simplex cannot be unbounded");
        pivot(&mut t, &mut rc, row, enter);
        basis[row] = enter;
    }

    let objective = -rc[width].clone();
    if objective.is_positive() {
        let pi: Vec<Scalar> = (0..m)
            .map(|k| {
                let p = Scalar::from_integer(1.into()) - &rc[ncols + k];
                if flipped[k] {
                    -p
                } else {
                    p
                }
            })
            .collect();
        debug_assert!(dot(&pi, b).is_positive());
        Feasibility::Infeasible(pi)
    } else {
        let mut y = vec![Scalar::zero(); ncols];
        for (i, &var) in basis.iter().enumerate() {
            if var < ncols {
                y[var] = t[i][width].clone();
            }
        }
        Feasibility::Feasible(y)
    }
}

fn pivot(t: &mut [Vec<Scalar>], rc: &mut [Scalar], row: usize, col: usize) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (x, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    if !rc[col].is_zero() {
        let f = rc[col].clone();
        for (x, p) in rc.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
}

/// Finds `u` with `w . u > 0` for every given vector, or `None` when the
/// strict system is infeasible (equivalently, when the origin lies in the
/// convex hull of the vectors).
pub fn strictly_positive_direction(vectors: &[Vec<Scalar>], dim: usize) -> Option<Vec<Scalar>> {
    if vectors.is_empty() {
        let mut u = vec![Scalar::zero(); dim];
        if dim > 0 {
            u[0] = Scalar::from_integer(1.into());
        }
        return Some(u);
    }
    // columns are the vectors with a trailing 1; right-hand side (0, .., 0, 1)
    let n = vectors.len();
    let mut a: Vec<Vec<Scalar>> = (0..dim)
        .map(|k| vectors.iter().map(|v| v[k].clone()).collect())
        .collect();
    a.push(vec![Scalar::from_integer(1.into()); n]);
    let mut b = vec![Scalar::zero(); dim];
    b.push(Scalar::from_integer(1.into()));
    match solve_standard_form(&a, &b, n) {
        Feasibility::Feasible(_) => None,
        Feasibility::Infeasible(pi) => {
            let u: Vec<Scalar> = pi[..dim].iter().map(|x| -x.clone()).collect();
            debug_assert!(vectors.iter().all(|v| dot(v, &u).is_positive()));
            Some(u)
        }
    }
}

/// Convex weights expressing `target` as a combination of `points`, if any.
pub fn convex_weights(points: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let dim = target.len();
    let n = points.len();
    if n == 0 {
        return None;
    }
    let mut a: Vec<Vec<Scalar>> = (0..dim)
        .map(|k| points.iter().map(|p| p[k].clone()).collect())
        .collect();
    a.push(vec![Scalar::from_integer(1.into()); n]);
    let mut b = target.to_vec();
    b.push(Scalar::from_integer(1.into()));
    match solve_standard_form(&a, &b, n) {
        Feasibility::Feasible(y) => Some(y),
        Feasibility::Infeasible(_) => None,
    }
}

pub fn in_convex_hull(points: &[Vec<Scalar>], target: &[Scalar]) -> bool {
    convex_weights(points, target).is_some()
}

/// A common point of the convex hulls of all groups, if one exists.
pub fn common_hull_point(groups: &[Vec<Vec<Scalar>>], dim: usize) -> Option<Vec<Scalar>> {
    if groups.is_empty() || groups.iter().any(Vec::is_empty) {
        return None;
    }
    let offsets: Vec<usize> = groups
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.len();
            Some(o)
        })
        .collect();
    let total: usize = groups.iter().map(Vec::len).sum();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        let mut row = vec![Scalar::zero(); total];
        for i in 0..g.len() {
            row[offsets[j] + i] = Scalar::from_integer(1.into());
        }
        a.push(row);
        b.push(Scalar::from_integer(1.into()));
    }
    // sum_i l^0_i x_i - sum_i l^j_i x_i = 0 for j >= 1
    for j in 1..groups.len() {
        for k in 0..dim {
            let mut row = vec![Scalar::zero(); total];
            for (i, p) in groups[0].iter().enumerate() {
                row[offsets[0] + i] = p[k].clone();
            }
            for (i, p) in groups[j].iter().enumerate() {
                row[offsets[j] + i] = -p[k].clone();
            }
            a.push(row);
            b.push(Scalar::zero());
        }
    }
    match solve_standard_form(&a, &b, total) {
        Feasibility::Feasible(y) => {
            let mut c = vec![Scalar::zero(); dim];
            for (i, p) in groups[0].iter().enumerate() {
                let l = &y[offsets[0] + i];
                if l.is_zero() {
                    continue;
                }
                for k in 0..dim {
                    c[k] += l * &p[k];
                }
            }
            Some(c)
        }
        Feasibility::Infeasible(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int, ints};

    fn check_farkas(a: &[Vec<Scalar>], b: &[Scalar], pi: &[Scalar]) {
        let ncols = a[0].len();
        for j in 0..ncols {
            let col: Vec<Scalar> = a.iter().map(|r| r[j].clone()).collect();
            assert!(!dot(pi, &col).is_positive());
        }
        assert!(dot(pi, b).is_positive());
    }

    #[test]
    fn feasible_system() {
        let a = vec![ints(&[1, 1, 0]), ints(&[0, 1, 1])];
        let b = ints(&[2, 3]);
        match solve_standard_form(&a, &b, 3) {
            Feasibility::Feasible(y) => {
                assert!(y.iter().all(|v| !v.is_negative()));
                assert_eq!(crate::linalg::mat_vec(&a, &y), b);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_system_has_farkas_vector() {
        // y1 + y2 = 1, y1 + y2 = 2
        let a = vec![ints(&[1, 1]), ints(&[1, 1])];
        let b = ints(&[1, 2]);
        match solve_standard_form(&a, &b, 2) {
            Feasibility::Infeasible(pi) => check_farkas(&a, &b, &pi),
            other => panic!("{other:?}"),
        }
        // -y = 1
        let a = vec![ints(&[-1])];
        let b = ints(&[1]);
        match solve_standard_form(&a, &b, 1) {
            Feasibility::Infeasible(pi) => check_farkas(&a, &b, &pi),
            other => panic!("{other:?}"),
        }
        // negative right-hand side rows are flipped internally
        let a = vec![ints(&[1, 2])];
        let b = ints(&[-1]);
        match solve_standard_form(&a, &b, 2) {
            Feasibility::Infeasible(pi) => check_farkas(&a, &b, &pi),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gordan_direction() {
        let vs = vec![ints(&[1, 0]), ints(&[1, 1]), ints(&[1, -1])];
        let u = strictly_positive_direction(&vs, 2).unwrap();
        assert!(vs.iter().all(|v| dot(v, &u).is_positive()));
        let vs = vec![ints(&[1, 0]), ints(&[-1, 0])];
        assert!(strictly_positive_direction(&vs, 2).is_none());
        let vs = vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[-1, -1])];
        assert!(strictly_positive_direction(&vs, 2).is_none());
    }

    #[test]
    fn hull_membership() {
        let tri = vec![ints(&[0, 0]), ints(&[4, 0]), ints(&[0, 4])];
        assert!(in_convex_hull(&tri, &ints(&[1, 1])));
        assert!(in_convex_hull(&tri, &ints(&[2, 2])));
        assert!(!in_convex_hull(&tri, &[int(3), frac(3, 2)]));
        let w = convex_weights(&tri, &ints(&[1, 1])).unwrap();
        assert_eq!(w.iter().sum::<Scalar>(), int(1));
    }

    #[test]
    fn crossing_diagonals_meet() {
        let g1 = vec![ints(&[1, 1]), ints(&[-1, -1])];
        let g2 = vec![ints(&[1, -1]), ints(&[-1, 1])];
        assert_eq!(common_hull_point(&[g1.clone(), g2], 2).unwrap(), ints(&[0, 0]));
        let g3 = vec![ints(&[5, 5]), ints(&[6, 5])];
        assert!(common_hull_point(&[g1, g3], 2).is_none());
    }
}
