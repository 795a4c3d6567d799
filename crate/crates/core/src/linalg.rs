//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::scalar::{dot, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Scalar>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Scalar::one() / &m[row][col];
        for x in m[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : r . x = 0 for every row r}`.
pub fn kernel(rows: &[Vec<Scalar>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Scalar], m: &[Vec<Scalar>]) -> Vec<Scalar> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = vec![Scalar::zero(); ncols];
    for (coef, row) in v.iter().zip(m) {
        if coef.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o += coef * x;
            }
        }
    }
    out
}

pub fn mat_vec(m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Matrix {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn transpose(m: &[Vec<Scalar>]) -> Matrix {
    let ncols = m.first().map_or(0, Vec::len);
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &[Vec<Scalar>]) -> Option<Matrix> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Diagonal of the LDLᵀ factorization of a symmetric matrix, or `None` if a
/// zero pivot appears (the matrix is then not definite).
pub fn ldl_diagonal(q: &[Vec<Scalar>]) -> Option<Vec<Scalar>> {
    let n = q.len();
    let mut a: Matrix = q.to_vec();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_zero() {
            return None;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let l = &a[i][k] / &pivot;
            for j in k + 1..n {
                let t = &l * &a[k][j];
                a[i][j] -= t;
            }
        }
        diag.push(pivot);
    }
    Some(diag)
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int, ints};

    #[test]
    fn rref_detects_dependent_rows() {
        let rows = vec![ints(&[1, 0, 1]), ints(&[0, 1, 1]), ints(&[1, 1, 2])];
        let (r, p) = rref(&rows, 3);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r, vec![ints(&[1, 0, 1]), ints(&[0, 1, 1])]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let rows = vec![ints(&[1, 2, 3]), ints(&[2, 4, 7])];
        let k = kernel(&rows, 3);
        assert_eq!(k.len(), 1);
        for row in &rows {
            assert!(dot(row, &k[0]).is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![ints(&[2, 1]), ints(&[1, 3])];
        let x = solve(&a, &ints(&[3, 5])).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(solve(&[ints(&[1, 2]), ints(&[2, 4])], &ints(&[1, 1])).is_none());
        assert!(inverse(&[ints(&[1, 2]), ints(&[2, 4])]).is_none());
    }

    #[test]
    fn ldl_pivots() {
        let q = vec![
            vec![frac(3, 2), int(0), int(0)],
            vec![int(0), frac(3, 2), int(0)],
            vec![int(0), int(0), int(1)],
        ];
        assert_eq!(ldl_diagonal(&q).unwrap(), vec![frac(3, 2), frac(3, 2), int(1)]);
        let q = vec![ints(&[1, 2]), ints(&[2, 1])];
        let d = ldl_diagonal(&q).unwrap();
        assert_eq!(d, vec![int(1), int(-3)]);
    }
}
