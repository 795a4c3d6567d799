//! Candidate evaluation shared by the partition searches: one fixed `V`,
//! several configurations, and a stream of candidate subspaces `W`.

use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::centerpoint::{perturb, SearchConfig, Strategy};
use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig, ProjPoint};
use crate::partition::{find_partition, PartitionWitness};
use crate::pieces::{one_sided_masks, shortfall, Mask, SideArrangement};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Each configuration needs a valid partition.
    Partition,
    /// Each configuration needs minimum piece count at least `r`.
    Center,
}

pub(crate) struct ConfigEval {
    pub x: PointConfig,
    pub r: usize,
    pub pts: Vec<Vec<Scalar>>,
    pub a: SideArrangement,
    pub colors: Option<Vec<u32>>,
}

impl ConfigEval {
    pub fn new(v: &LinSubspace, x: &PointConfig, r: usize, rainbow: bool) -> Result<Self> {
        Error::check_len(x.ambient(), v.ambient())?;
        if r == 0 || r > x.len() {
            return Err(Error::InvalidArgument(format!("need 1 <= r <= {}, got r = {r}", x.len())));
        }
        let colors = if rainbow { Some(x.colors.clone().ok_or(Error::MissingColors)?) } else { None };
        let pts = x.vectors();
        let a = SideArrangement::new(v, &pts)?;
        Ok(ConfigEval { x: x.clone(), r, pts, a, colors })
    }

    pub fn n(&self) -> usize {
        self.pts.len()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ConfigProbe {
    pub partition: Option<PartitionWitness>,
    /// Best labeling seen, valid or not.
    pub labels: Vec<usize>,
    pub shortfall: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Probe {
    pub configs: Vec<ConfigProbe>,
    pub failed: usize,
    pub shortfall: usize,
}

impl Probe {
    pub fn key(&self) -> (usize, usize) {
        (self.failed, self.shortfall)
    }

    pub fn passes(&self) -> bool {
        self.failed == 0
    }
}

/// Drops masks contained in another mask of the family.
fn maximal_masks(mut masks: Vec<Mask>) -> Vec<Mask> {
    masks.sort_by_key(|m| std::cmp::Reverse(m.count()));
    let mut out: Vec<Mask> = Vec::new();
    for m in masks {
        if !out.iter().any(|o| m.is_subset(o)) {
            out.push(m);
        }
    }
    out
}

/// Parts that are empty or lie inside a forbidden set.
pub(crate) fn bad_parts(labels: &[usize], r: usize, forbidden: &[Mask]) -> usize {
    let n = labels.len();
    let mut parts = vec![Mask::empty(n); r];
    let mut sizes = vec![0usize; r];
    for (i, &l) in labels.iter().enumerate() {
        parts[l].set(i);
        sizes[l] += 1;
    }
    parts
        .iter()
        .zip(&sizes)
        .filter(|(p, &s)| s == 0 || forbidden.iter().any(|f| p.is_subset(f)))
        .count()
}

/// A labeling into `r` parts with no color repeated in a part, or `None`
/// when some color occurs more than `r` times.
pub(crate) fn initial_labels(n: usize, r: usize, colors: Option<&[u32]>, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut labels = vec![0; n];
    match colors {
        None => {
            for (k, &i) in order.iter().enumerate() {
                labels[i] = k % r;
            }
        }
        Some(colors) => {
            order.sort_by_key(|&i| colors[i]);
            for (_, group) in &order.iter().chunk_by(|&&i| colors[i]) {
                let group: Vec<usize> = group.copied().collect();
                if group.len() > r {
                    return None;
                }
            }
            for (k, &i) in order.iter().enumerate() {
                labels[i] = k % r;
            }
        }
    }
    Some(labels)
}

fn color_free(labels: &[usize], colors: Option<&[u32]>, i: usize, part: usize, skip: Option<usize>) -> bool {
    let Some(colors) = colors else { return true };
    !labels
        .iter()
        .enumerate()
        .any(|(k, &l)| l == part && k != i && Some(k) != skip && colors[k] == colors[i])
}

/// Move and swap local search that lowers the number of bad parts.
pub(crate) fn local_partition(
    r: usize,
    forbidden: &[Mask],
    colors: Option<&[u32]>,
    mut labels: Vec<usize>,
    rng: &mut ChaCha8Rng,
    iterations: usize,
) -> (Vec<usize>, usize) {
    let n = labels.len();
    let mut bad = bad_parts(&labels, r, forbidden);
    if r < 2 || n < 2 {
        return (labels, bad);
    }
    for _ in 0..iterations {
        if bad == 0 {
            break;
        }
        let mut cand = labels.clone();
        let i = rng.random_range(0..n);
        if rng.random_bool(0.5) {
            let target = (labels[i] + rng.random_range(1..r)) % r;
            if !color_free(&labels, colors, i, target, None) {
                continue;
            }
            cand[i] = target;
        } else {
            let k = rng.random_range(0..n);
            if labels[k] == labels[i]
                || !color_free(&labels, colors, i, labels[k], Some(k))
                || !color_free(&labels, colors, k, labels[i], Some(i))
            {
                continue;
            }
            cand.swap(i, k);
        }
        let b = bad_parts(&cand, r, forbidden);
        if b <= bad {
            bad = b;
            labels = cand;
        }
    }
    (labels, bad)
}

/// Checks one configuration against `W`.
pub(crate) fn probe_config(
    ev: &ConfigEval,
    w: &LinSubspace,
    mode: Mode,
    cfg: &SearchConfig,
    seed: u64,
    hint: Option<&[usize]>,
) -> Result<ConfigProbe> {
    let n = ev.n();
    let b = SideArrangement::new(w, &ev.pts)?;
    let (min, total) = shortfall(&ev.a, &b, n, ev.r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fallback = || hint.map(<[usize]>::to_vec).unwrap_or_else(|| (0..n).map(|i| i % ev.r).collect());
    if mode == Mode::Center || min < ev.r {
        // r disjoint parts inside one piece need r points there
        let labels = fallback();
        let partition = (mode == Mode::Center && min >= ev.r).then(|| PartitionWitness::trivial(n));
        return Ok(ConfigProbe { partition, labels, shortfall: total });
    }
    let forbidden = maximal_masks(one_sided_masks(&ev.a, &b));
    let colors = ev.colors.as_deref();
    if n <= cfg.exhaustive_limit && n <= 64 {
        let words: Vec<u64> = forbidden.iter().map(Mask::word).collect();
        let found = find_partition(n, ev.r, &words, colors)?;
        let labels = found.as_ref().map(PartitionWitness::labels).unwrap_or_else(fallback);
        return Ok(ConfigProbe { partition: found, labels, shortfall: total });
    }
    let start = match hint {
        Some(h) => Some(h.to_vec()),
        None => initial_labels(n, ev.r, colors, &mut rng),
    };
    let Some(start) = start else {
        return Ok(ConfigProbe { partition: None, labels: fallback(), shortfall: total });
    };
    let (labels, bad) = local_partition(ev.r, &forbidden, colors, start, &mut rng, cfg.max_iterations * n * 4);
    let partition = if bad == 0 { Some(PartitionWitness::from_labels(&labels)?) } else { None };
    Ok(ConfigProbe { partition, labels, shortfall: total })
}

pub(crate) struct Scanner<'a> {
    pub evals: &'a [ConfigEval],
    pub mode: Mode,
    pub cfg: &'a SearchConfig,
    pub evaluations: AtomicUsize,
}

pub(crate) struct Best {
    pub w: LinSubspace,
    pub probe: Probe,
    pub strategy: Strategy,
}

impl<'a> Scanner<'a> {
    pub fn new(evals: &'a [ConfigEval], mode: Mode, cfg: &'a SearchConfig) -> Self {
        Scanner { evals, mode, cfg, evaluations: AtomicUsize::new(0) }
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn probe(&self, w: &LinSubspace, seed: u64) -> Result<Probe> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let mut configs = Vec::with_capacity(self.evals.len());
        for (j, ev) in self.evals.iter().enumerate() {
            configs.push(probe_config(ev, w, self.mode, self.cfg, seed ^ ((j as u64) << 32), None)?);
        }
        let failed = configs.iter().filter(|c| c.partition.is_none()).count();
        let shortfall = configs.iter().map(|c| c.shortfall).sum();
        Ok(Probe { configs, failed, shortfall })
    }

    /// Evaluates candidates in parallel chunks and keeps the first passing
    /// one, or the best by `(failed, shortfall)` in candidate order.
    pub fn scan(&self, cands: Vec<(LinSubspace, Strategy)>, best: &mut Option<Best>) -> Result<bool> {
        if best.as_ref().is_some_and(|b| b.probe.passes()) {
            return Ok(true);
        }
        let target = self.evals.first().map(|e| e.x.ambient()).unwrap_or(0);
        let mut offset = 0u64;
        for chunk in cands.chunks(32) {
            let probes: Vec<Result<Probe>> = chunk
                .par_iter()
                .enumerate()
                .map(|(k, (w, _))| {
                    if w.ambient() != target {
                        return Err(Error::DimensionMismatch { expected: target, found: w.ambient() });
                    }
                    self.probe(w, self.cfg.seed.wrapping_add(offset + k as u64))
                })
                .collect();
            offset += chunk.len() as u64;
            for ((w, strategy), probe) in chunk.iter().zip(probes) {
                let probe = probe?;
                if best.as_ref().is_none_or(|b| probe.key() < b.probe.key()) {
                    *best = Some(Best { w: w.clone(), probe, strategy: *strategy });
                }
                if best.as_ref().is_some_and(|b| b.probe.passes()) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Random rational perturbations around the current best.
    pub fn perturbation(&self, best: &mut Option<Best>, rounds: usize) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ 0x7E57);
        for _ in 0..rounds {
            let Some(b) = best.as_ref() else { return Ok(false) };
            if b.probe.passes() {
                return Ok(true);
            }
            let w0 = b.w.clone();
            let batch: Vec<(LinSubspace, Strategy)> = (0..8)
                .map(|_| perturb(&w0, &mut rng))
                .filter(|w| w.rank() == w0.rank())
                .map(|w| (w, Strategy::Perturbation))
                .collect();
            if self.scan(batch, best)? {
                return Ok(true);
            }
        }
        Ok(best.as_ref().is_some_and(|b| b.probe.passes()))
    }
}

/// Distinct points of all configurations, in sorted order.
pub(crate) fn distinct_points(evals: &[ConfigEval]) -> Vec<ProjPoint> {
    let mut pts: Vec<ProjPoint> = evals.iter().flat_map(|e| e.x.points.iter().cloned()).collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Subspaces of rank `k` spanned by data points.
pub(crate) fn span_candidates(points: &[ProjPoint], ambient: usize, k: usize, cap: usize) -> Result<Vec<LinSubspace>> {
    let mut out = Vec::new();
    if k == 0 || k >= ambient {
        return Ok(out);
    }
    for subset in points.iter().combinations(k) {
        if out.len() >= cap {
            break;
        }
        let w = LinSubspace::spanned_by_points(ambient, subset)?;
        if w.rank() == k {
            out.push(w);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Subspaces of rank `k` cut out as `span(S) ∩ span(T)` for point sets of
/// sizes `s + t = ambient + k`.
pub(crate) fn meet_candidates(points: &[ProjPoint], ambient: usize, k: usize, cap: usize) -> Result<Vec<LinSubspace>> {
    let mut out = Vec::new();
    if k == 0 || k >= ambient {
        return Ok(out);
    }
    for s in (k + 1)..ambient {
        let t = ambient + k - s;
        if t < s || t >= ambient {
            continue;
        }
        let left = span_candidates(points, ambient, s, cap)?;
        let right = if t == s { left.clone() } else { span_candidates(points, ambient, t, cap)? };
        'outer: for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if t == s && j <= i {
                    continue;
                }
                if out.len() >= cap {
                    break 'outer;
                }
                let m = a.meet(b)?;
                if m.rank() == k {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Completes `base` to rank `k` with data points, if it has rank at most `k`.
pub(crate) fn pad_with_points(base: &LinSubspace, points: &[ProjPoint], k: usize) -> Result<Option<LinSubspace>> {
    if base.rank() > k {
        return Ok(None);
    }
    let mut w = base.clone();
    for p in points {
        if w.rank() == k {
            break;
        }
        let next = w.join(&LinSubspace::point(p))?;
        if next.rank() > w.rank() {
            w = next;
        }
    }
    Ok((w.rank() == k).then_some(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meets_in_the_plane_are_vertices() {
        let pts: Vec<ProjPoint> = [[0, 0, 1], [2, 0, 1], [0, 2, 1], [2, 2, 1]]
            .iter()
            .map(|c| ProjPoint::from_ints(c).unwrap())
            .collect();
        let m = meet_candidates(&pts, 3, 1, 1000).unwrap();
        // the diagonals cross at (1, 1)
        assert!(m.contains(&LinSubspace::point(&ProjPoint::from_ints(&[1, 1, 1]).unwrap())));
        assert!(m.iter().all(|w| w.rank() == 1));
    }

    #[test]
    fn local_search_respects_colors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let colors = [0, 0, 1, 1, 2, 2];
        let labels = initial_labels(6, 2, Some(&colors), &mut rng).unwrap();
        let p = PartitionWitness::from_labels(&labels).unwrap();
        assert!(p.is_rainbow(&colors));
        assert!(initial_labels(6, 2, Some(&[0, 0, 0, 1, 1, 1]), &mut rng).is_none());
        let forbidden = vec![Mask::from_indices(6, &[0, 2, 4])];
        let (labels, bad) = local_partition(2, &forbidden, Some(&colors), labels, &mut rng, 500);
        assert_eq!(bad, 0);
        assert!(PartitionWitness::from_labels(&labels).unwrap().is_rainbow(&colors));
    }
}
