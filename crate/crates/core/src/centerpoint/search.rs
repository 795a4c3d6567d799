use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AffineChart, LinSubspace, PointConfig};
use crate::linalg::{self, Matrix};
use crate::pieces::{shortfall, verify_center_subspace, Certificate, SideArrangement, VerifyOptions};
use crate::scalar::{to_f64, Scalar};

use super::{classical_center_point, w_from_weights};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Strictly decreasing positive regularization values.
    pub eps_schedule: Vec<f64>,
    pub max_starts: usize,
    pub max_iterations: usize,
    /// Denominator bound when rounding numeric subspaces to rationals.
    pub max_denominator: u64,
    pub seed: u64,
    pub strict_disjoint: bool,
    /// Restrict partitions to parts with pairwise distinct colors.
    pub rainbow: bool,
    /// Largest `n` for exhaustive partition enumeration.
    pub exhaustive_limit: usize,
    /// Upper bound on combinatorial candidates per scan.
    pub candidate_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            eps_schedule: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            max_starts: 4,
            max_iterations: 40,
            max_denominator: 1_000_000,
            seed: 0,
            strict_disjoint: false,
            rainbow: false,
            exhaustive_limit: crate::partition::EXHAUSTIVE_LIMIT,
            candidate_cap: 20_000,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps_schedule.is_empty() {
            return Err(Error::InvalidArgument("empty eps schedule".into()));
        }
        if self.eps_schedule.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::InvalidArgument("eps values must be positive".into()));
        }
        if self.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidArgument("eps schedule must be strictly decreasing".into()));
        }
        if self.max_denominator == 0 {
            return Err(Error::InvalidArgument("max_denominator must be positive".into()));
        }
        Ok(())
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions { strict_disjoint: self.strict_disjoint }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Numeric descent over simplex weights.
    Weights,
    /// Affine chart with `V` at infinity and a classical center point.
    Chart,
    /// Subspaces spanned by data points.
    PointSpan,
    /// Intersections of two point-spanned subspaces.
    Meet,
    /// Join of subspaces found for the configurations separately.
    Join,
    /// Sign split of an affine dependence.
    Radon,
    /// A common point of the part hulls in the affine chart.
    HullPoint,
    /// Rational perturbations of the best candidate.
    Perturbation,
    /// Handed to a more specific search.
    Delegated,
    /// Nothing passed; the best candidate is reported.
    BestEffort,
}

#[derive(Clone, Debug)]
pub struct CenterOutcome {
    pub w: LinSubspace,
    pub certificate: Certificate,
    pub strategy: Strategy,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Score {
    pub deficiency: usize,
    pub shortfall: usize,
}

impl Score {
    pub fn passes(&self) -> bool {
        self.deficiency == 0
    }
}

/// Scores candidate subspaces `W` against a fixed `V` and point set.
pub(crate) struct Evaluator {
    pub pts: Vec<Vec<Scalar>>,
    pub a: SideArrangement,
    pub r: usize,
    pub ambient: usize,
    pts_f: Vec<Vec<f64>>,
    a_f: Vec<Vec<f64>>,
    evaluations: AtomicUsize,
}

impl Evaluator {
    pub fn new(v: &LinSubspace, x: &PointConfig, r: usize) -> Result<Self> {
        let pts = x.vectors();
        let a = SideArrangement::new(v, &pts)?;
        let pts_f = pts
            .iter()
            .map(|p| {
                let f: Vec<f64> = p.iter().map(to_f64).collect();
                let norm = f.iter().map(|z| z * z).sum::<f64>().sqrt();
                f.into_iter().map(|z| z / norm).collect()
            })
            .collect();
        let a_f = a.basis.iter().map(|row| row.iter().map(to_f64).collect()).collect();
        Ok(Evaluator { pts, a, r, ambient: x.ambient(), pts_f, a_f, evaluations: AtomicUsize::new(0) })
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn score(&self, w: &LinSubspace) -> Result<(Score, usize)> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let b = SideArrangement::new(w, &self.pts)?;
        let (min, total) = shortfall(&self.a, &b, self.pts.len(), self.r);
        Ok((Score { deficiency: self.r.saturating_sub(min), shortfall: total }, min))
    }

    /// Numeric `W(p, eps)`: the row space of `A·Q`, rounded to rationals.
    pub fn w_numeric(&self, p: &[f64], eps: f64, max_den: u64) -> Option<LinSubspace> {
        let rows = self.w_rows(p, eps);
        let exact = rationalize_rows(&rows, max_den);
        let w = LinSubspace::span(self.ambient, &exact).ok()?;
        (w.rank() == self.a.basis.len()).then_some(w)
    }

    /// Floating point rows of `A·Q` for the weights `p`.
    pub fn w_rows(&self, p: &[f64], eps: f64) -> Vec<Vec<f64>> {
        let dim = self.ambient;
        let mut q = vec![vec![0.0; dim]; dim];
        for (t, x) in p.iter().zip(&self.pts_f) {
            if *t == 0.0 {
                continue;
            }
            for i in 0..dim {
                for j in 0..dim {
                    q[i][j] += t * x[i] * x[j];
                }
            }
        }
        for (i, row) in q.iter_mut().enumerate() {
            row[i] += eps;
        }
        self.a_f
            .iter()
            .map(|a| (0..dim).map(|j| (0..dim).map(|k| a[k] * q[k][j]).sum()).collect())
            .collect()
    }
}

/// Rounds each row, scaled to unit maximum, to the grid `1/max_den`. A
/// common denominator per row keeps the exact arithmetic small.
pub(crate) fn rationalize_rows(rows: &[Vec<f64>], max_den: u64) -> Matrix {
    let grid = max_den.clamp(1, 1 << 40) as f64;
    rows.iter()
        .map(|row| {
            let m = row.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            let scale = if m > 0.0 { m } else { 1.0 };
            row.iter()
                .map(|x| {
                    let k = (x / scale * grid).round();
                    Scalar::new(BigInt::from(k as i64), BigInt::from(grid as i64))
                })
                .collect()
        })
        .collect()
}

/// Exact `W` for given weights: the row space of `A·Q`, which is the
/// annihilator of the `Q`-orthogonal complement of the annihilator of `V`.
pub fn subspace_from_weights(v: &LinSubspace, q: &Matrix) -> Result<LinSubspace> {
    Ok(w_from_weights(&v.annihilator(), q)?.annihilator())
}

pub(crate) fn check_dims(v: &LinSubspace, x: &PointConfig) -> Result<()> {
    Error::check_len(x.ambient(), v.ambient())?;
    if v.rank() == 0 || v.rank() > x.d {
        return Err(Error::InvalidArgument(format!(
            "V must have projective dimension between 0 and {}, got {}",
            x.d - 1,
            v.projective_dim()
        )));
    }
    Ok(())
}

pub(crate) fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p
}

fn propose(rng: &mut ChaCha8Rng, p: &[f64], step: f64) -> Vec<f64> {
    let n = p.len();
    let mut q = p.to_vec();
    match rng.random_range(0..3) {
        0 => {
            for x in q.iter_mut() {
                *x = (*x + step * (rng.random::<f64>() - 0.5)).max(0.0);
            }
        }
        1 => {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let moved = q[j] * step.min(1.0);
            q[j] -= moved;
            q[i] += moved;
        }
        _ => {
            let i = rng.random_range(0..n);
            q[i] = 0.0;
        }
    }
    let s: f64 = q.iter().sum();
    if s <= 0.0 {
        return p.to_vec();
    }
    q.iter_mut().for_each(|x| *x /= s);
    q
}

struct StartResult {
    score: Score,
    w: LinSubspace,
}

fn descend(ev: &Evaluator, cfg: &SearchConfig, start: usize) -> Option<StartResult> {
    let n = ev.pts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9).wrapping_add(start as u64));
    let mut p = if start == 0 { vec![1.0 / n as f64; n] } else { random_simplex_point(&mut rng, n) };
    let mut best: Option<StartResult> = None;
    for &eps in &cfg.eps_schedule {
        let Some(w) = ev.w_numeric(&p, eps, cfg.max_denominator) else { continue };
        let Ok((mut current, _)) = ev.score(&w) else { continue };
        if best.as_ref().is_none_or(|b| current < b.score) {
            best = Some(StartResult { score: current, w });
        }
        if current.passes() {
            break;
        }
        let mut step = 0.5;
        for _ in 0..cfg.max_iterations {
            let cand = propose(&mut rng, &p, step);
            let Some(w) = ev.w_numeric(&cand, eps, cfg.max_denominator) else { continue };
            let Ok((s, _)) = ev.score(&w) else { continue };
            if s <= current {
                if s < current {
                    step = (step * 1.5).min(1.0);
                }
                current = s;
                p = cand;
                if best.as_ref().is_none_or(|b| s < b.score) {
                    best = Some(StartResult { score: s, w });
                }
                if s.passes() {
                    break;
                }
            } else {
                step = (step * 0.8).max(1e-3);
            }
        }
        if best.as_ref().is_some_and(|b| b.score.passes()) {
            break;
        }
    }
    best
}

/// Searches for `W` of projective dimension `d - v - 1` such that every pair
/// `H1 ⊇ V`, `H2 ⊇ W` leaves at least `r` points in each closed piece.
///
/// The returned certificate always comes from exact verification; a failing
/// certificate means no candidate passed.
pub fn search_center_subspace(v: &LinSubspace, x: &PointConfig, r: usize, cfg: &SearchConfig) -> Result<CenterOutcome> {
    cfg.validate()?;
    check_dims(v, x)?;
    let ev = Evaluator::new(v, x, r)?;
    let mut best: Option<(Score, LinSubspace, Strategy)> = None;
    let consider = |score: Score, w: LinSubspace, strategy: Strategy, best: &mut Option<(Score, LinSubspace, Strategy)>| {
        let better = match best {
            None => true,
            Some((s, bw, _)) => score < *s || (score == *s && w < *bw),
        };
        if better {
            *best = Some((score, w, strategy));
        }
        score.passes()
    };

    // (a) weights
    if !x.is_empty() {
        let starts: Vec<StartResult> = (0..cfg.max_starts.max(1))
            .into_par_iter()
            .filter_map(|s| descend(&ev, cfg, s))
            .collect();
        for s in starts {
            if consider(s.score, s.w, Strategy::Weights, &mut best) {
                break;
            }
        }
    }

    // (b) combinatorial candidates
    if !best.as_ref().is_some_and(|b| b.0.passes()) {
        for (w, strategy) in combinatorial_candidates(v, x, cfg)? {
            let (score, _) = ev.score(&w)?;
            if consider(score, w, strategy, &mut best) {
                break;
            }
        }
    }

    if !best.as_ref().is_some_and(|b| b.0.passes()) {
        if let Some((_, w0, _)) = best.clone() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5EED);
            for _ in 0..cfg.max_iterations * cfg.max_starts.max(1) {
                let w = perturb(&w0, &mut rng);
                if w.rank() != w0.rank() {
                    continue;
                }
                let (score, _) = ev.score(&w)?;
                if consider(score, w, Strategy::Perturbation, &mut best) {
                    break;
                }
            }
        }
    }

    let (score, w, strategy) = match best {
        Some(b) => b,
        None => {
            let w = v.annihilator();
            let (s, _) = ev.score(&w)?;
            (s, w, Strategy::BestEffort)
        }
    };
    let certificate = verify_center_subspace(v, &w, x, r, cfg.verify_options())?;
    let strategy = if certificate.verdict.passed() && score.passes() { strategy } else { Strategy::BestEffort };
    Ok(CenterOutcome { w, certificate, strategy, evaluations: ev.evaluations() })
}

pub(crate) fn perturb(w: &LinSubspace, rng: &mut ChaCha8Rng) -> LinSubspace {
    let delta = Scalar::new(1.into(), 1000.into());
    let rows: Matrix = w
        .basis()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x + &delta * Scalar::from_integer(rng.random_range(-3i64..=3).into()))
                .collect()
        })
        .collect();
    LinSubspace::span(w.ambient(), &rows).unwrap_or_else(|_| w.clone())
}

/// Candidate subspaces of rank `d - v` built from the data.
pub(crate) fn combinatorial_candidates(
    v: &LinSubspace,
    x: &PointConfig,
    cfg: &SearchConfig,
) -> Result<Vec<(LinSubspace, Strategy)>> {
    let target = x.ambient() - v.rank();
    let mut out = Vec::new();
    if target == 1 {
        let chart = AffineChart::for_hyperplane(v)?;
        let affine: Vec<Vec<Scalar>> = x.points.iter().filter_map(|p| chart.to_affine(p.coords())).collect();
        let c = if affine.is_empty() {
            vec![Scalar::zero(); x.d]
        } else {
            classical_center_point(&affine).map(|(c, _)| c).unwrap_or_else(|_| affine[0].clone())
        };
        out.push((LinSubspace::point(&chart.lift(&c)), Strategy::Chart));
    }
    let mut spans: Vec<LinSubspace> = Vec::new();
    let mut distinct = x.points.clone();
    distinct.sort();
    distinct.dedup();
    for subset in distinct.iter().combinations(target) {
        if spans.len() >= cfg.candidate_cap {
            break;
        }
        let w = LinSubspace::spanned_by_points(x.ambient(), subset)?;
        if w.rank() == target {
            spans.push(w);
        }
    }
    spans.sort();
    spans.dedup();
    out.extend(spans.into_iter().map(|w| (w, Strategy::PointSpan)));
    if out.is_empty() {
        // Too few distinct points: complete what there is with coordinate vectors.
        let mut rows: Matrix = distinct.iter().map(|p| p.coords().to_vec()).collect();
        rows.extend(linalg::identity(x.ambient()));
        let (basis, _) = linalg::rref(&rows, x.ambient());
        let w = LinSubspace::span(x.ambient(), &basis[..target.min(basis.len())])?;
        out.push((w, Strategy::PointSpan));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProjPoint;
    use crate::scalar::{int, ints};

    fn square() -> PointConfig {
        PointConfig::from_affine_ints(2, &[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]).unwrap()
    }

    #[test]
    fn square_center() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let out = search_center_subspace(&v, &square(), 2, &SearchConfig::default()).unwrap();
        assert!(out.certificate.verdict.passed());
        assert_eq!(out.w, LinSubspace::point(&ProjPoint::from_ints(&[0, 0, 1]).unwrap()));
    }

    #[test]
    fn line_median() {
        let x = PointConfig::from_affine_ints(1, &[vec![0], vec![1], vec![2]]).unwrap();
        let v = LinSubspace::hyperplane_at_infinity(1);
        let out = search_center_subspace(&v, &x, 2, &SearchConfig::default()).unwrap();
        assert!(out.certificate.verdict.passed());
        assert_eq!(out.w, LinSubspace::point(&ProjPoint::from_ints(&[1, 1]).unwrap()));
    }

    #[test]
    fn point_v_in_the_plane() {
        let x = PointConfig::from_affine_ints(
            2,
            &[vec![0, 0], vec![5, 1], vec![2, 7], vec![-3, 4], vec![6, -2], vec![-1, -5], vec![3, 3], vec![-4, -1], vec![1, 2]],
        )
        .unwrap();
        let v = LinSubspace::point(&ProjPoint::from_ints(&[1, 2, 3]).unwrap());
        let out = search_center_subspace(&v, &x, 3, &SearchConfig::default()).unwrap();
        assert!(out.certificate.verdict.passed(), "{:?}", out.certificate.min_count);
        assert_eq!(out.w.rank(), 2);
    }

    #[test]
    fn weights_map_gives_weighted_centroid() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let lambdas = square().vectors();
        let p = super::super::WeightVector::uniform(4);
        let q = super::super::gram_matrix(&p, &lambdas, &int(1)).unwrap();
        let w = subspace_from_weights(&v, &q).unwrap();
        assert_eq!(w, LinSubspace::span(3, &[ints(&[0, 0, 1])]).unwrap());
        assert!(w.meet(&v).unwrap().is_zero());
    }

    #[test]
    fn config_validation() {
        let cfg = SearchConfig { eps_schedule: vec![0.1, 0.2], ..SearchConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = SearchConfig { eps_schedule: vec![0.1, -1.0], ..SearchConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
