//! Partition searches: projective Tverberg partitions for a fixed `V`,
//! transversal versions with several configurations, and the variant where
//! `V` is searched as well. Every reported pass comes from the exact verifier.

mod common;
mod transversal;
mod weights;

pub use transversal::{
    both_free_gate, search_both_subspaces, search_center_transversal, search_transversal, BothOutcome, CenterTransversalOutcome,
    TransversalInstance, TransversalOutcome,
};

use std::ops::ControlFlow;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::centerpoint::{check_dims, combinatorial_candidates, search_center_subspace, Evaluator, SearchConfig, Strategy};
use crate::error::{Error, Result};
use crate::geometry::{AffineChart, LinSubspace, PointConfig};
use crate::linalg;
use crate::lp::common_hull_point;
use crate::partition::{count_partitions, for_each_partition, from_masks, PartitionWitness};
use crate::pieces::{one_sided_masks, verify_tverberg_witness, Certificate, Mask, SideArrangement};
use crate::scalar::Scalar;
use crate::topology::required_points;

use common::{distinct_points, meet_candidates, Best, ConfigEval, Mode, Scanner};

/// Splits an affine dependence of `n >= d + 2` points by sign. Returns the
/// partition and a common point of the two hulls.
pub fn radon_partition(x: &PointConfig) -> Result<(PartitionWitness, Vec<Scalar>)> {
    let affine = x
        .affine_points()
        .ok_or_else(|| Error::InvalidArgument("points at infinity have no affine coordinates".into()))?;
    radon_affine(x.d, &affine)
}

fn radon_affine(d: usize, affine: &[Vec<Scalar>]) -> Result<(PartitionWitness, Vec<Scalar>)> {
    let n = affine.len();
    if n < d + 2 {
        return Err(Error::InvalidArgument(format!("need at least d + 2 = {} points, got {n}", d + 2)));
    }
    // columns (x_i, 1)
    let mut m: Vec<Vec<Scalar>> = (0..d).map(|k| affine.iter().map(|p| p[k].clone()).collect()).collect();
    m.push(vec![Scalar::from_integer(1.into()); n]);
    let kernel = linalg::kernel(&m, n);
    let lambda = kernel.first().expect("more columns than rows");
    let positive: Vec<usize> = (0..n).filter(|&i| !lambda[i].is_negative()).collect();
    let negative: Vec<usize> = (0..n).filter(|&i| lambda[i].is_negative()).collect();
    let total: Scalar = positive.iter().map(|&i| lambda[i].clone()).sum();
    let mut c = vec![Scalar::zero(); d];
    for &i in &positive {
        for (ck, xk) in c.iter_mut().zip(&affine[i]) {
            *ck += &lambda[i] * xk / &total;
        }
    }
    Ok((PartitionWitness::new(n, vec![positive, negative])?, c))
}

#[derive(Clone, Debug)]
pub struct TverbergOutcome {
    pub w: LinSubspace,
    pub partition: PartitionWitness,
    pub certificate: Certificate,
    pub strategy: Strategy,
    pub warnings: Vec<String>,
    pub evaluations: usize,
}

pub(crate) fn is_prime_power(r: usize) -> bool {
    if r < 2 {
        return false;
    }
    let p = (2..=r).find(|k| r % k == 0).expect("r >= 2");
    let mut q = r;
    while q % p == 0 {
        q /= p;
    }
    q == 1
}

pub(crate) fn tverberg_warnings(x: &PointConfig, v: &LinSubspace, r: usize) -> Vec<String> {
    let d = x.d;
    let vd = v.rank() - 1;
    let big_d = (d - vd) * (vd + 1);
    let mut out = Vec::new();
    let need = required_points(big_d, r);
    if x.len() != need {
        out.push(format!("|X| = {} differs from (D+1)(r-1)+1 = {need} with D = {big_d}", x.len()));
    }
    if r > 1 && !is_prime_power(r) {
        out.push(format!("r = {r} is not a prime power; existence is not guaranteed"));
    }
    out
}

/// For `V` a hyperplane: points of the chart where all part hulls meet,
/// tried partition by partition. Parts lying entirely on `V` meet both
/// pieces anyway and are left out of the hull condition.
fn hull_point_route(v: &LinSubspace, ce: &ConfigEval, cfg: &SearchConfig) -> Result<Option<(LinSubspace, PartitionWitness)>> {
    let n = ce.n();
    if n > cfg.exhaustive_limit || n > 64 {
        return Ok(None);
    }
    let chart = AffineChart::for_hyperplane(v)?;
    let affine: Vec<Option<Vec<Scalar>>> = ce.x.points.iter().map(|p| chart.to_affine(p.coords())).collect();
    let d = ce.x.d;
    if ce.r == 2 && affine.iter().all(Option::is_some) && n >= d + 2 {
        let pts: Vec<Vec<Scalar>> = affine.iter().flatten().cloned().collect();
        let (partition, c) = radon_affine(d, &pts)?;
        if ce.colors.as_deref().is_none_or(|cs| partition.is_rainbow(cs)) {
            return Ok(Some((LinSubspace::point(&chart.lift(&c)), partition)));
        }
    }
    let mut found = None;
    let mut tried = 0usize;
    for_each_partition(n, ce.r, &[], ce.colors.as_deref(), |masks| {
        tried += 1;
        if tried > cfg.candidate_cap {
            return ControlFlow::Break(());
        }
        let groups: Vec<Vec<Vec<Scalar>>> = masks
            .iter()
            .map(|&m| (0..n).filter(|&i| m >> i & 1 == 1).filter_map(|i| affine[i].clone()).collect::<Vec<_>>())
            .filter(|g: &Vec<Vec<Scalar>>| !g.is_empty())
            .collect();
        let c = if groups.is_empty() { Some(vec![Scalar::zero(); d]) } else { common_hull_point(&groups, d) };
        if let Some(c) = c {
            found = Some((c, masks.to_vec()));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    match found {
        Some((c, masks)) => Ok(Some((LinSubspace::point(&chart.lift(&c)), from_masks(n, &masks)?))),
        None => Ok(None),
    }
}

fn finish(
    v: &LinSubspace,
    x: &PointConfig,
    w: LinSubspace,
    partition: PartitionWitness,
    strategy: Strategy,
    cfg: &SearchConfig,
    warnings: Vec<String>,
    evaluations: usize,
) -> Result<TverbergOutcome> {
    let certificate = verify_tverberg_witness(v, &w, x, &partition, cfg.rainbow, cfg.verify_options())?;
    let strategy = if certificate.verdict.passed() { strategy } else { Strategy::BestEffort };
    Ok(TverbergOutcome { w, partition, certificate, strategy, warnings, evaluations })
}

fn best_partition(best: &Best, r: usize) -> Result<PartitionWitness> {
    let probe = &best.probe.configs[0];
    if let Some(p) = &probe.partition {
        return Ok(p.clone());
    }
    let p = PartitionWitness::from_labels(&probe.labels)?;
    if p.r() == r {
        return Ok(p);
    }
    let n = probe.labels.len();
    PartitionWitness::from_labels(&(0..n).map(|i| i % r).collect::<Vec<_>>())
}

/// Searches for `W` of projective dimension `d - v - 1` and a partition of
/// `X` into `r` parts each meeting both closed pieces of every pair
/// `H1 ⊇ V`, `H2 ⊇ W`.
pub fn search_projective_tverberg(v: &LinSubspace, x: &PointConfig, r: usize, cfg: &SearchConfig) -> Result<TverbergOutcome> {
    cfg.validate()?;
    check_dims(v, x)?;
    if r == 0 || r > x.len() {
        return Err(Error::InvalidArgument(format!("need 1 <= r <= {}, got r = {r}", x.len())));
    }
    let warnings = tverberg_warnings(x, v, r);
    if r == 1 {
        let out = search_center_subspace(v, x, 1, cfg)?;
        let partition = PartitionWitness::trivial(x.len());
        return finish(v, x, out.w, partition, Strategy::Delegated, cfg, warnings, out.evaluations);
    }
    let ce = ConfigEval::new(v, x, r, cfg.rainbow)?;
    let target = x.ambient() - v.rank();

    if target == 1 {
        if let Some((w, partition)) = hull_point_route(v, &ce, cfg)? {
            let strategy = if partition.r() == 2 && x.len() >= x.d + 2 { Strategy::Radon } else { Strategy::HullPoint };
            let out = finish(v, x, w, partition, strategy, cfg, warnings.clone(), 1)?;
            if out.certificate.verdict.passed() {
                return Ok(out);
            }
        }
    }

    let evals = vec![ce];
    let scanner = Scanner::new(&evals, Mode::Partition, cfg);
    let mut best: Option<Best> = None;
    let mut done = scanner.scan(combinatorial_candidates(v, x, cfg)?, &mut best)?;
    if !done {
        let pts = distinct_points(&evals);
        let meets = meet_candidates(&pts, x.ambient(), target, cfg.candidate_cap)?;
        done = scanner.scan(meets.into_iter().map(|w| (w, Strategy::Meet)).collect(), &mut best)?;
    }
    let mut evaluations = scanner.evaluations();
    if !done {
        let ev = Evaluator::new(v, x, r)?;
        if let Some(b) = weights::weight_search(&ev, &evals[0], cfg)? {
            if best.as_ref().is_none_or(|cur| b.probe.key() < cur.probe.key()) {
                best = Some(b);
            }
        }
        evaluations += ev.evaluations();
        done = best.as_ref().is_some_and(|b| b.probe.passes());
    }
    if !done {
        scanner.perturbation(&mut best, cfg.max_iterations)?;
    }
    evaluations = evaluations.max(scanner.evaluations());
    let best = best.ok_or_else(|| Error::InvalidArgument("no candidate subspace could be formed".into()))?;
    let partition = best_partition(&best, r)?;
    finish(v, x, best.w, partition, best.strategy, cfg, warnings, evaluations)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCount {
    pub count: u64,
    /// The count is for the given `W` only, not over all admissible `W`.
    pub per_w: bool,
}

/// Exact number of `r`-part partitions passing the verifier for this pair.
pub fn count_valid_partitions(
    v: &LinSubspace,
    w: &LinSubspace,
    x: &PointConfig,
    r: usize,
    cfg: &SearchConfig,
) -> Result<PartitionCount> {
    Error::check_len(x.ambient(), v.ambient())?;
    Error::check_len(x.ambient(), w.ambient())?;
    let n = x.len();
    if n > cfg.exhaustive_limit || n > 64 {
        return Err(Error::TooLarge(format!(
            "{n} points exceed the enumeration limit {}",
            cfg.exhaustive_limit.min(64)
        )));
    }
    let pts = x.vectors();
    let a = SideArrangement::new(v, &pts)?;
    let b = SideArrangement::new(w, &pts)?;
    let words: Vec<u64> = one_sided_masks(&a, &b).iter().map(Mask::word).collect();
    let colors = if cfg.rainbow { Some(x.colors.as_deref().ok_or(Error::MissingColors)?) } else { None };
    let mut count = count_partitions(n, r, &words, colors)?;
    if cfg.strict_disjoint && !v.meet(w)?.is_zero() {
        count = 0;
    }
    Ok(PartitionCount { count, per_w: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProjPoint;
    use crate::lp::in_convex_hull;
    use crate::scalar::ints;

    fn square() -> PointConfig {
        PointConfig::from_affine_ints(2, &[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]).unwrap()
    }

    #[test]
    fn radon_of_square() {
        let (p, c) = radon_partition(&square()).unwrap();
        assert_eq!(p.parts, vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(c, ints(&[0, 0]));
    }

    #[test]
    fn radon_triangle_with_interior_point() {
        let x = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1]]).unwrap();
        let (p, c) = radon_partition(&x).unwrap();
        assert_eq!(p.parts, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(c, ints(&[1, 1]));
    }

    #[test]
    fn radon_on_the_line() {
        let x = PointConfig::from_affine_ints(1, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        let (p, c) = radon_partition(&x).unwrap();
        let aff = x.affine_points().unwrap();
        for part in &p.parts {
            let pts: Vec<Vec<Scalar>> = part.iter().map(|&i| aff[i].clone()).collect();
            assert!(in_convex_hull(&pts, &c));
        }
        assert!(radon_partition(&x.subset(&[0, 1])).is_err());
    }

    #[test]
    fn square_tverberg_is_radon() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let out = search_projective_tverberg(&v, &square(), 2, &SearchConfig::default()).unwrap();
        assert!(out.certificate.verdict.passed());
        assert_eq!(out.partition, radon_partition(&square()).unwrap().0);
        assert_eq!(out.w, LinSubspace::point(&ProjPoint::from_ints(&[0, 0, 1]).unwrap()));
    }

    #[test]
    fn single_part() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let out = search_projective_tverberg(&v, &square(), 1, &SearchConfig::default()).unwrap();
        assert!(out.certificate.verdict.passed());
        assert_eq!(out.partition.r(), 1);
    }

    #[test]
    fn point_v_line_w() {
        let x = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![3, 1], vec![1, 4], vec![-2, 2]]).unwrap();
        let v = LinSubspace::point(&ProjPoint::from_ints(&[1, 0, 0]).unwrap());
        let out = search_projective_tverberg(&v, &x, 2, &SearchConfig::default()).unwrap();
        assert!(out.certificate.verdict.passed());
        assert_eq!(out.w.rank(), 2);
    }

    #[test]
    fn counting() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let w = LinSubspace::point(&ProjPoint::from_ints(&[0, 0, 1]).unwrap());
        let cfg = SearchConfig::default();
        let c = count_valid_partitions(&v, &w, &square(), 2, &cfg).unwrap();
        assert!(c.count >= 1);
        assert_eq!(count_valid_partitions(&v, &w, &square(), 1, &cfg).unwrap().count, 1);
        assert_eq!(count_valid_partitions(&v, &w, &square(), 4, &cfg).unwrap().count, 0);
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<usize> = (1..20).filter(|&r| is_prime_power(r)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
    }
}
