//! Affine center points, Tukey depth, the dual statement for hyperplane
//! families, and the projective center subspace search.

mod search;

pub use search::{
    search_center_subspace, subspace_from_weights, CenterOutcome, SearchConfig, Strategy,
};
pub(crate) use search::{check_dims, combinatorial_candidates, perturb, Evaluator};

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::arrangement::enumerate_open_cells;
use crate::error::{Error, Result};
use crate::geometry::LinSubspace;
use crate::linalg::{self, Matrix};
use crate::scalar::{dot, is_zero_vec, Scalar};

fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Smallest number of points in a closed half-space whose boundary passes
/// through `c`.
pub fn tukey_depth(c: &[Scalar], x: &[Vec<Scalar>]) -> Result<usize> {
    let d = c.len();
    if d == 0 {
        return Err(Error::EmptyAmbient);
    }
    if x.is_empty() {
        return Ok(0);
    }
    for p in x {
        Error::check_len(d, p.len())?;
    }
    let rel: Vec<Vec<Scalar>> = x.iter().map(|p| sub(p, c)).collect();
    let cells = enumerate_open_cells(d, &rel)?;
    let zeros = cells[0].sign_vector.zero_support.len();
    Ok(cells
        .iter()
        .map(|cell| zeros + cell.sign_vector.signs.iter().filter(|s| **s == crate::Sign::Pos).count())
        .min()
        .expect("at least one cell"))
}

/// Hyperplane through `d` affinely independent points, as `(normal, offset)`.
fn hyperplane_through(points: &[&Vec<Scalar>]) -> Option<(Vec<Scalar>, Scalar)> {
    let d = points[0].len();
    let diffs: Vec<Vec<Scalar>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let k = linalg::kernel(&diffs, d);
    if k.len() != 1 {
        return None;
    }
    let normal = k.into_iter().next()?;
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

fn intersect(planes: &[&(Vec<Scalar>, Scalar)]) -> Option<Vec<Scalar>> {
    let a: Matrix = planes.iter().map(|p| p.0.clone()).collect();
    let b: Vec<Scalar> = planes.iter().map(|p| p.1.clone()).collect();
    linalg::solve(&a, &b)
}

fn centroid(x: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = Scalar::from_integer(x.len().into());
    let d = x[0].len();
    (0..d).map(|k| x.iter().map(|p| p[k].clone()).sum::<Scalar>() / &n).collect()
}

fn coordinate_median(x: &[Vec<Scalar>]) -> Vec<Scalar> {
    let d = x[0].len();
    (0..d)
        .map(|k| {
            let mut col: Vec<Scalar> = x.iter().map(|p| p[k].clone()).collect();
            col.sort();
            col[col.len() / 2].clone()
        })
        .collect()
}

/// Upper bound on arrangement vertices tried by `classical_center_point`.
pub const VERTEX_CAP: usize = 4000;

/// A point of Tukey depth at least `ceil(n/(d+1))`, with its depth.
pub fn classical_center_point(x: &[Vec<Scalar>]) -> Result<(Vec<Scalar>, usize)> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("center point of an empty set".into()));
    }
    let d = x[0].len();
    if d == 0 {
        return Err(Error::EmptyAmbient);
    }
    let target = x.len().div_ceil(d + 1);
    let mut best: Option<(usize, Vec<Scalar>)> = None;
    // cheap candidates first; stop at the first one deep enough
    let mut consider = |c: Vec<Scalar>| -> Result<bool> {
        let depth = tukey_depth(&c, x)?;
        if best.as_ref().is_none_or(|b| depth > b.0) {
            best = Some((depth, c));
        }
        Ok(depth >= target)
    };
    let mut done = consider(centroid(x))? || consider(coordinate_median(x))?;
    for p in x {
        if done {
            break;
        }
        done = consider(p.clone())?;
    }
    for (p, q) in x.iter().tuple_combinations() {
        if done {
            break;
        }
        done = consider(p.iter().zip(q).map(|(a, b)| (a + b) / Scalar::from_integer(2.into())).collect())?;
    }
    if !done {
        let mut seen = BTreeSet::new();
        let mut planes: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
        for subset in x.iter().combinations(d) {
            if let Some(h) = hyperplane_through(&subset) {
                if seen.insert(normalize_plane(&h)) {
                    planes.push(h);
                }
            }
        }
        let mut vertices = 0;
        for combo in planes.iter().combinations(d) {
            if done || vertices >= VERTEX_CAP {
                break;
            }
            if let Some(v) = intersect(&combo) {
                vertices += 1;
                done = consider(v)?;
            }
        }
    }
    let (depth, c) = best.expect("candidates are nonempty");
    if depth < target {
        return Err(Error::InvalidArgument(format!(
            "no candidate reached depth {target} (best {depth}); the configuration may exceed the vertex cap"
        )));
    }
    Ok((c, depth))
}

fn normalize_plane(h: &(Vec<Scalar>, Scalar)) -> Vec<Scalar> {
    let mut v = h.0.clone();
    v.push(h.1.clone());
    crate::scalar::primitive_integer_vector(&v)
}

/// The affine hyperplane `{y : normal . y = offset}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHyperplane {
    pub normal: Vec<Scalar>,
    pub offset: Scalar,
}

impl AffineHyperplane {
    pub fn new(normal: Vec<Scalar>, offset: Scalar) -> Result<Self> {
        if is_zero_vec(&normal) {
            return Err(Error::ZeroForm);
        }
        Ok(AffineHyperplane { normal, offset })
    }
}

/// Fewest hyperplanes met by a ray from `c`.
///
/// Rays are taken projectively closed: a ray parallel to a hyperplane meets
/// it at infinity. With that convention the minimum is attained on open
/// cells of the arrangement of normals, which is where it is evaluated.
pub fn min_ray_crossings(c: &[Scalar], hs: &[AffineHyperplane]) -> Result<usize> {
    let d = c.len();
    if d == 0 {
        return Err(Error::EmptyAmbient);
    }
    for h in hs {
        Error::check_len(d, h.normal.len())?;
        if is_zero_vec(&h.normal) {
            return Err(Error::ZeroForm);
        }
    }
    if hs.is_empty() {
        return Ok(0);
    }
    let normals: Vec<Vec<Scalar>> = hs.iter().map(|h| h.normal.clone()).collect();
    let gaps: Vec<Scalar> = hs.iter().map(|h| &h.offset - dot(&h.normal, c)).collect();
    let cells = enumerate_open_cells(d, &normals)?;
    Ok(cells
        .iter()
        .map(|cell| {
            cell.sign_vector
                .signs
                .iter()
                .zip(&gaps)
                .filter(|(s, g)| {
                    g.is_zero() || (g.is_positive() && **s == crate::Sign::Pos) || (g.is_negative() && **s == crate::Sign::Neg)
                })
                .count()
        })
        .min()
        .expect("at least one cell"))
}

/// A point maximizing `min_ray_crossings` over arrangement vertices and a
/// few interior samples.
pub fn dual_center_point_search(d: usize, hs: &[AffineHyperplane]) -> Result<(Vec<Scalar>, usize)> {
    if d == 0 {
        return Err(Error::EmptyAmbient);
    }
    let origin = vec![Scalar::zero(); d];
    let mut candidates = vec![origin.clone()];
    for h in hs {
        Error::check_len(d, h.normal.len())?;
        // foot of the perpendicular from the origin
        let t = &h.offset / dot(&h.normal, &h.normal);
        candidates.push(h.normal.iter().map(|a| a * &t).collect());
    }
    let planes: Vec<(Vec<Scalar>, Scalar)> = hs.iter().map(|h| (h.normal.clone(), h.offset.clone())).collect();
    let mut vertices = Vec::new();
    for combo in planes.iter().combinations(d.min(planes.len())) {
        if combo.len() == d {
            if let Some(v) = intersect(&combo) {
                vertices.push(v);
            }
        }
        if vertices.len() >= VERTEX_CAP {
            break;
        }
    }
    if !vertices.is_empty() {
        candidates.push(centroid(&vertices));
    }
    let pairs: Vec<Vec<Scalar>> = vertices
        .iter()
        .tuple_combinations()
        .take(VERTEX_CAP)
        .map(|(p, q): (&Vec<Scalar>, &Vec<Scalar>)| p.iter().zip(q).map(|(a, b)| (a + b) / Scalar::from_integer(2.into())).collect())
        .collect();
    candidates.extend(vertices);
    candidates.extend(pairs);
    let mut best: Option<(usize, Vec<Scalar>)> = None;
    for c in candidates {
        let v = min_ray_crossings(&c, hs)?;
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, c));
        }
    }
    let (v, c) = best.expect("origin is always a candidate");
    Ok((c, v))
}

/// A point of the probability simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<Scalar>,
}

impl WeightVector {
    pub fn new(weights: Vec<Scalar>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty weight vector".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidArgument("negative weight".into()));
        }
        if weights.iter().sum::<Scalar>() != Scalar::one() {
            return Err(Error::InvalidArgument("weights must sum to 1".into()));
        }
        Ok(WeightVector { weights })
    }

    pub fn uniform(n: usize) -> Self {
        let w = Scalar::new(1.into(), n.into());
        WeightVector { weights: vec![w; n] }
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        let mut weights = vec![Scalar::zero(); n];
        weights[i] = Scalar::one();
        WeightVector { weights }
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| !self.weights[i].is_zero()).collect()
    }
}

/// `Q = Σ t_i λ_i λ_iᵀ + eps·I`, checked positive definite.
pub fn gram_matrix(p: &WeightVector, lambdas: &[Vec<Scalar>], eps: &Scalar) -> Result<Matrix> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    Error::check_len(p.weights.len(), lambdas.len())?;
    let dim = lambdas.first().map(Vec::len).ok_or(Error::EmptyAmbient)?;
    let mut q = linalg::identity(dim);
    for row in q.iter_mut() {
        for x in row.iter_mut() {
            *x *= eps;
        }
    }
    for (t, l) in p.weights.iter().zip(lambdas) {
        Error::check_len(dim, l.len())?;
        if is_zero_vec(l) {
            return Err(Error::ZeroForm);
        }
        if t.is_zero() {
            continue;
        }
        for i in 0..dim {
            if l[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if !l[j].is_zero() {
                    q[i][j] += t * &l[i] * &l[j];
                }
            }
        }
    }
    let pivots = linalg::ldl_diagonal(&q).ok_or(Error::NotPositiveDefinite)?;
    if !pivots.iter().all(Signed::is_positive) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(q)
}

/// The `Q`-orthogonal complement of `s`: `{x : yᵀQx = 0 for all y in s}`.
pub fn w_from_weights(s: &LinSubspace, q: &Matrix) -> Result<LinSubspace> {
    Error::check_len(s.ambient(), q.len())?;
    if linalg::inverse(q).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let rows = linalg::mat_mul(s.basis(), q);
    let w = LinSubspace::span(s.ambient(), &rows)?.annihilator();
    debug_assert!(s.meet(&w)?.is_zero() || linalg::ldl_diagonal(q).is_none());
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int, ints};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Scalar>> {
        v.iter().map(|p| ints(p)).collect()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(tukey_depth(&ints(&[1]), &pts(&[&[0], &[1], &[2]])).unwrap(), 2);
        let tri = pts(&[&[0, 0], &[3, 0], &[0, 3]]);
        assert_eq!(tukey_depth(&ints(&[1, 1]), &tri).unwrap(), 1);
        assert_eq!(tukey_depth(&ints(&[1, 1]), &[]).unwrap(), 0);
        assert!(tukey_depth(&[], &tri).is_err());
    }

    #[test]
    fn classical_examples() {
        let (c, depth) = classical_center_point(&pts(&[&[0], &[1], &[2]])).unwrap();
        assert_eq!((c, depth), (ints(&[1]), 2));
        let square = pts(&[&[1, 1], &[-1, 1], &[1, -1], &[-1, -1]]);
        let (c, depth) = classical_center_point(&square).unwrap();
        assert_eq!(c, ints(&[0, 0]));
        assert_eq!(depth, 2);
    }

    #[test]
    fn ray_crossings() {
        let hs = vec![
            AffineHyperplane::new(ints(&[1]), int(0)).unwrap(),
            AffineHyperplane::new(ints(&[1]), int(2)).unwrap(),
        ];
        assert_eq!(min_ray_crossings(&ints(&[1]), &hs).unwrap(), 1);
        assert_eq!(min_ray_crossings(&ints(&[0]), &hs).unwrap(), 1);
        let tri = vec![
            AffineHyperplane::new(ints(&[0, 1]), int(0)).unwrap(),
            AffineHyperplane::new(ints(&[1, 0]), int(0)).unwrap(),
            AffineHyperplane::new(ints(&[1, 1]), int(3)).unwrap(),
        ];
        assert_eq!(min_ray_crossings(&ints(&[1, 1]), &tri).unwrap(), 1);
        let through = vec![
            AffineHyperplane::new(ints(&[0, 1]), int(1)).unwrap(),
            AffineHyperplane::new(ints(&[1, 0]), int(1)).unwrap(),
        ];
        assert_eq!(min_ray_crossings(&ints(&[1, 1]), &through).unwrap(), 2);
        assert!(AffineHyperplane::new(ints(&[0, 0]), int(1)).is_err());
    }

    #[test]
    fn dual_search() {
        let one = vec![AffineHyperplane::new(ints(&[1, 1]), int(1)).unwrap()];
        assert_eq!(dual_center_point_search(2, &one).unwrap().1, 1);
        let tri = vec![
            AffineHyperplane::new(ints(&[0, 1]), int(0)).unwrap(),
            AffineHyperplane::new(ints(&[1, 0]), int(0)).unwrap(),
            AffineHyperplane::new(ints(&[1, 1]), int(3)).unwrap(),
        ];
        assert!(dual_center_point_search(2, &tri).unwrap().1 >= 1);
    }

    #[test]
    fn gram_examples() {
        let p = WeightVector::vertex(1, 0);
        let q = gram_matrix(&p, &[ints(&[0, 1, 0])], &int(1)).unwrap();
        assert_eq!(q, vec![ints(&[1, 0, 0]), ints(&[0, 2, 0]), ints(&[0, 0, 1])]);
        let half = WeightVector::new(vec![frac(1, 2), frac(1, 2)]).unwrap();
        let q = gram_matrix(&half, &[ints(&[1, 0, 0]), ints(&[0, 1, 0])], &int(1)).unwrap();
        assert_eq!(linalg::ldl_diagonal(&q).unwrap(), vec![frac(3, 2), frac(3, 2), int(1)]);
        assert!(gram_matrix(&half, &[ints(&[1, 0, 0]), ints(&[0, 1, 0])], &int(0)).is_err());
        assert!(WeightVector::new(vec![frac(1, 2)]).is_err());
    }

    #[test]
    fn orthogonal_complements() {
        let q = vec![ints(&[1, 0, 0]), ints(&[0, 2, 0]), ints(&[0, 0, 1])];
        let s = LinSubspace::span(3, &[ints(&[1, 0, 0])]).unwrap();
        let w = w_from_weights(&s, &q).unwrap();
        assert_eq!(w, LinSubspace::span(3, &[ints(&[0, 1, 0]), ints(&[0, 0, 1])]).unwrap());
        let s = LinSubspace::span(3, &[ints(&[1, 1, 0])]).unwrap();
        let w = w_from_weights(&s, &q).unwrap();
        assert_eq!(w, LinSubspace::span(3, &[ints(&[2, -1, 0]), ints(&[0, 0, 1])]).unwrap());
        let id = linalg::identity(3);
        assert_eq!(w_from_weights(&s, &id).unwrap(), s.annihilator());
    }
}
