//! Points and linear subspaces of projective space in exact homogeneous
//! coordinates.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{dot, is_zero_vec, primitive_integer_vector, Scalar};

/// A point of RP^d. Coordinates are kept as coprime integers whose first
/// nonzero entry is positive, so equality is syntactic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyAmbient);
        }
        if is_zero_vec(&coords) {
            return Err(Error::InvalidArgument("homogeneous coordinates are all zero".into()));
        }
        Ok(ProjPoint { coords: primitive_integer_vector(&coords) })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(crate::scalar::ints(coords))
    }

    /// Lifts an affine point of the chart `x_{d+1} = 1`.
    pub fn from_affine(affine: &[Scalar]) -> Self {
        let mut c = affine.to_vec();
        c.push(Scalar::one());
        ProjPoint { coords: primitive_integer_vector(&c) }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Projective dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords.last().is_some_and(Zero::is_zero)
    }

    /// Coordinates in the standard chart, `None` for points at infinity.
    pub fn affine(&self) -> Option<Vec<Scalar>> {
        let (last, rest) = self.coords.split_last()?;
        if last.is_zero() {
            return None;
        }
        Some(rest.iter().map(|x| x / last).collect())
    }
}

/// A linear subspace of the coordinate space R^{d+1}, stored in reduced row
/// echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinSubspace {
    basis: Matrix,
    ambient: usize,
}

impl LinSubspace {
    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::EmptyAmbient);
        }
        for v in vectors {
            Error::check_len(ambient, v.len())?;
        }
        let (basis, _) = linalg::rref(vectors, ambient);
        Ok(LinSubspace { basis, ambient })
    }

    pub fn zero(ambient: usize) -> Self {
        LinSubspace { basis: Vec::new(), ambient }
    }

    pub fn full(ambient: usize) -> Self {
        LinSubspace { basis: linalg::identity(ambient), ambient }
    }

    pub fn point(p: &ProjPoint) -> Self {
        Self::span(p.coords().len(), &[p.coords().to_vec()]).expect("point has a valid ambient")
    }

    pub fn spanned_by_points<'a>(ambient: usize, points: impl IntoIterator<Item = &'a ProjPoint>) -> Result<Self> {
        let vs: Vec<Vec<Scalar>> = points.into_iter().map(|p| p.coords().to_vec()).collect();
        Self::span(ambient, &vs)
    }

    /// `{x : x_{d+1} = 0}`.
    pub fn hyperplane_at_infinity(d: usize) -> Self {
        let ambient = d + 1;
        let vs: Vec<Vec<Scalar>> = (0..d)
            .map(|i| (0..ambient).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        Self::span(ambient, &vs).expect("valid ambient")
    }

    /// The hyperplane `{x : f . x = 0}`.
    pub fn hyperplane(form: &[Scalar]) -> Result<Self> {
        if is_zero_vec(form) {
            return Err(Error::ZeroForm);
        }
        Ok(Self::span(form.len(), &[form.to_vec()])?.annihilator())
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `rank - 1`; the empty subspace has dimension -1.
    pub fn projective_dim(&self) -> isize {
        self.rank() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn annihilator(&self) -> Self {
        let basis = linalg::kernel(&self.basis, self.ambient);
        Self::span(self.ambient, &basis).expect("kernel vectors have ambient length")
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        Error::check_len(self.ambient, other.ambient)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &rows)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        Ok(self.annihilator().join(&other.annihilator())?.annihilator())
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        self.annihilator().basis.iter().all(|f| dot(f, v).is_zero())
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

/// Row-space of the given vectors in canonical form.
pub fn canonicalize(vectors: &[Vec<Scalar>]) -> Result<LinSubspace> {
    let ambient = vectors.first().map_or(0, Vec::len);
    LinSubspace::span(ambient, vectors)
}

/// A finite point set in RP^d, optionally colored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    pub d: usize,
    pub points: Vec<ProjPoint>,
    pub colors: Option<Vec<u32>>,
}

impl PointConfig {
    pub fn new(d: usize, points: Vec<ProjPoint>, colors: Option<Vec<u32>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptyAmbient);
        }
        for p in &points {
            Error::check_len(d + 1, p.coords().len())?;
        }
        if let Some(c) = &colors {
            if c.len() != points.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} colors given for {} points",
                    c.len(),
                    points.len()
                )));
            }
        }
        Ok(PointConfig { d, points, colors })
    }

    pub fn from_affine(d: usize, points: &[Vec<Scalar>]) -> Result<Self> {
        for p in points {
            Error::check_len(d, p.len())?;
        }
        Self::new(d, points.iter().map(|p| ProjPoint::from_affine(p)).collect(), None)
    }

    pub fn from_affine_ints(d: usize, points: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<Vec<Scalar>> = points.iter().map(|p| crate::scalar::ints(p)).collect();
        Self::from_affine(d, &pts)
    }

    pub fn with_colors(mut self, colors: Vec<u32>) -> Result<Self> {
        self.colors = Some(colors);
        Self::new(self.d, self.points, self.colors)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.d + 1
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.points.iter().map(|p| p.coords().to_vec()).collect()
    }

    /// Affine coordinates of every point, `None` if some point is at infinity.
    pub fn affine_points(&self) -> Option<Vec<Vec<Scalar>>> {
        self.points.iter().map(ProjPoint::affine).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> PointConfig {
        PointConfig {
            d: self.d,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            colors: self.colors.as_ref().map(|c| indices.iter().map(|&i| c[i]).collect()),
        }
    }
}

/// Checks that no `r` points of `x` together with `v` lie in a hyperplane.
/// On failure the offending subset is returned.
pub fn general_position(x: &PointConfig, v: &LinSubspace, r: usize) -> Result<(bool, Option<Vec<usize>>)> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if r > x.len() {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds the {} points", x.len())));
    }
    Error::check_len(x.ambient(), v.ambient())?;
    for subset in (0..x.len()).combinations(r) {
        let mut rows = v.basis().clone();
        rows.extend(subset.iter().map(|&i| x.points[i].coords().to_vec()));
        if linalg::rank(&rows, x.ambient()) < x.ambient() {
            return Ok((false, Some(subset)));
        }
    }
    Ok((true, None))
}

/// An affine chart of RP^d in which a chosen hyperplane is at infinity.
#[derive(Clone, Debug)]
pub struct AffineChart {
    transform: Matrix,
    inverse: Matrix,
}

impl AffineChart {
    /// Chart sending the hyperplane `{f . x = 0}` to infinity.
    pub fn with_infinity(form: &[Scalar]) -> Result<Self> {
        let pivot = form.iter().position(|x| !x.is_zero()).ok_or(Error::ZeroForm)?;
        let n = form.len();
        let mut transform: Matrix = (0..n)
            .filter(|&j| j != pivot)
            .map(|j| (0..n).map(|k| if j == k { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        transform.push(form.to_vec());
        let inverse = linalg::inverse(&transform).expect("completion of a nonzero form is invertible");
        Ok(AffineChart { transform, inverse })
    }

    pub fn for_hyperplane(h: &LinSubspace) -> Result<Self> {
        let ann = h.annihilator();
        if ann.rank() != 1 {
            return Err(Error::InvalidArgument("subspace is not a hyperplane".into()));
        }
        Self::with_infinity(&ann.basis()[0])
    }

    pub fn to_affine(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let y = linalg::mat_vec(&self.transform, x);
        let (last, rest) = y.split_last()?;
        if last.is_zero() {
            return None;
        }
        Some(rest.iter().map(|v| v / last).collect())
    }

    pub fn lift(&self, a: &[Scalar]) -> ProjPoint {
        let mut y = a.to_vec();
        y.push(Scalar::one());
        ProjPoint::new(linalg::mat_vec(&self.inverse, &y)).expect("chart is invertible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ints;

    #[test]
    fn canonical_forms() {
        let s = canonicalize(&[ints(&[2, 0, 0]), ints(&[0, 4, 0])]).unwrap();
        assert_eq!(s.basis(), &vec![ints(&[1, 0, 0]), ints(&[0, 1, 0])]);
        let s = canonicalize(&[ints(&[1, 1, 0]), ints(&[1, 1, 0])]).unwrap();
        assert_eq!(s.rank(), 1);
        let s = canonicalize(&[ints(&[1, 0, 1]), ints(&[0, 1, 1]), ints(&[1, 1, 2])]).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(canonicalize(s.basis()).unwrap(), s);
        assert!(canonicalize(&[]).is_err());
    }

    #[test]
    fn point_normalization() {
        let p = ProjPoint::new(ints(&[-2, 4, -6])).unwrap();
        assert_eq!(p.coords(), &ints(&[1, -2, 3])[..]);
        assert!(ProjPoint::from_ints(&[0, 0]).is_err());
        assert_eq!(ProjPoint::from_ints(&[2, 4, 2]).unwrap().affine().unwrap(), ints(&[1, 2]));
    }

    #[test]
    fn duality() {
        let s = canonicalize(&[ints(&[1, 2, 3])]).unwrap();
        let a = s.annihilator();
        assert_eq!(a.rank(), 2);
        assert!(a.basis().iter().all(|f| dot(f, &ints(&[1, 2, 3])).is_zero()));
        assert_eq!(a.annihilator(), s);
        assert!(LinSubspace::full(3).annihilator().is_zero());
    }

    #[test]
    fn joins_and_meets() {
        let l1 = canonicalize(&[ints(&[1, 0, 0])]).unwrap();
        let l2 = canonicalize(&[ints(&[0, 1, 0])]).unwrap();
        assert_eq!(l1.join(&l2).unwrap().rank(), 2);
        assert_eq!(l1.meet(&l2).unwrap().rank(), 0);
        let p1 = canonicalize(&[ints(&[1, 0, 0]), ints(&[0, 1, 0])]).unwrap();
        let p2 = canonicalize(&[ints(&[1, 0, 0]), ints(&[0, 0, 1])]).unwrap();
        let m = p1.meet(&p2).unwrap();
        assert_eq!(m, l1);
        assert_eq!(p1.join(&p1).unwrap(), p1);
        assert_eq!(p1.meet(&p1).unwrap(), p1);
        assert!(l1.join(&LinSubspace::zero(4)).is_err());
    }

    #[test]
    fn general_position_checks() {
        let x = PointConfig::new(
            2,
            vec![
                ProjPoint::from_ints(&[1, 0, 1]).unwrap(),
                ProjPoint::from_ints(&[0, 1, 1]).unwrap(),
                ProjPoint::from_ints(&[1, 1, 1]).unwrap(),
            ],
            None,
        )
        .unwrap();
        let v = LinSubspace::point(&ProjPoint::from_ints(&[0, 0, 1]).unwrap());
        assert_eq!(general_position(&x, &v, 2).unwrap(), (true, None));
        assert!(general_position(&x, &v, 4).is_err());

        let collinear = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        let on_line = LinSubspace::point(&ProjPoint::from_affine(&ints(&[3, 3])));
        let (ok, bad) = general_position(&collinear, &on_line, 3).unwrap();
        assert!(!ok);
        assert_eq!(bad, Some(vec![0, 1, 2]));
    }

    #[test]
    fn charts_roundtrip() {
        let chart = AffineChart::with_infinity(&ints(&[1, 1, 1])).unwrap();
        let p = chart.lift(&ints(&[2, -5]));
        assert_eq!(chart.to_affine(p.coords()).unwrap(), ints(&[2, -5]));
        assert!(chart.to_affine(&ints(&[1, -1, 0])).is_none());
        let std = AffineChart::for_hyperplane(&LinSubspace::hyperplane_at_infinity(2)).unwrap();
        assert_eq!(std.to_affine(&ints(&[2, 4, 2])).unwrap(), ints(&[1, 2]));
    }
}
