//! Numeric search over weight vectors with disjoint supports, one per part.
//! The parts' subspaces are pulled together; the consensus subspace is
//! checked exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::centerpoint::{Evaluator, SearchConfig, Strategy};
use crate::error::Result;

use super::common::{initial_labels, probe_config, Best, ConfigEval, Mode, Probe};

fn projection(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut p = vec![vec![0.0; dim]; dim];
    for b in &basis {
        for i in 0..dim {
            for j in 0..dim {
                p[i][j] += b[i] * b[j];
            }
        }
    }
    p
}

fn part_weights(labels: &[usize], weights: &[f64], part: usize) -> Vec<f64> {
    let mut p: Vec<f64> = labels.iter().zip(weights).map(|(&l, &w)| if l == part { w } else { 0.0 }).collect();
    let s: f64 = p.iter().sum();
    if s > 0.0 {
        p.iter_mut().for_each(|x| *x /= s);
    }
    p
}

fn spread(ev: &Evaluator, labels: &[usize], weights: &[f64], r: usize, eps: f64) -> f64 {
    let projections: Vec<Vec<Vec<f64>>> =
        (0..r).map(|j| projection(&ev.w_rows(&part_weights(labels, weights, j), eps))).collect();
    let mut total = 0.0;
    for j in 0..r {
        for k in j + 1..r {
            for (a, b) in projections[j].iter().zip(&projections[k]) {
                total += a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
            }
        }
    }
    total
}

struct State {
    labels: Vec<usize>,
    weights: Vec<f64>,
    objective: f64,
}

fn consensus(
    ev: &Evaluator,
    ce: &ConfigEval,
    state: &State,
    eps: f64,
    cfg: &SearchConfig,
    seed: u64,
) -> Result<Option<(crate::geometry::LinSubspace, Probe)>> {
    let r = ce.r;
    let n = ce.n();
    let mut p = vec![0.0; n];
    for j in 0..r {
        for (acc, x) in p.iter_mut().zip(part_weights(&state.labels, &state.weights, j)) {
            *acc += x / r as f64;
        }
    }
    let Some(w) = ev.w_numeric(&p, eps, cfg.max_denominator) else { return Ok(None) };
    let probe = probe_config(ce, &w, Mode::Partition, cfg, seed, Some(&state.labels))?;
    let failed = usize::from(probe.partition.is_none());
    let shortfall = probe.shortfall;
    Ok(Some((w, Probe { configs: vec![probe], failed, shortfall })))
}

fn run_start(ev: &Evaluator, ce: &ConfigEval, cfg: &SearchConfig, start: usize) -> Result<Option<Best>> {
    let n = ce.n();
    let r = ce.r;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x2545_F491).wrapping_add(start as u64));
    let Some(labels) = initial_labels(n, r, ce.colors.as_deref(), &mut rng) else { return Ok(None) };
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let mut best: Option<Best> = None;
    let mut state = State { labels, weights, objective: f64::INFINITY };
    for &eps in &cfg.eps_schedule {
        let score = |st: &State, rng: &mut ChaCha8Rng, best: &mut Option<Best>| -> Result<f64> {
            let sp = spread(ev, &st.labels, &st.weights, r, eps);
            let Some((w, probe)) = consensus(ev, ce, st, eps, cfg, rng.random())? else { return Ok(f64::INFINITY) };
            let obj = sp + probe.shortfall as f64 + if probe.passes() { 0.0 } else { 1.0 };
            if best.as_ref().is_none_or(|b| probe.key() < b.probe.key()) {
                *best = Some(Best { w, probe, strategy: Strategy::Weights });
            }
            Ok(obj)
        };
        state.objective = score(&state, &mut rng, &mut best)?;
        if best.as_ref().is_some_and(|b| b.probe.passes()) {
            return Ok(best);
        }
        for _ in 0..cfg.max_iterations {
            let mut cand = State { labels: state.labels.clone(), weights: state.weights.clone(), objective: 0.0 };
            match rng.random_range(0..3) {
                0 => {
                    let part = rng.random_range(0..r);
                    for (w, &l) in cand.weights.iter_mut().zip(&cand.labels) {
                        if l == part {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            *w = (*w * (0.3 * z).exp()).clamp(1e-6, 1e6);
                        }
                    }
                }
                1 if r > 1 => {
                    let i = rng.random_range(0..n);
                    let target = (cand.labels[i] + rng.random_range(1..r)) % r;
                    let clash = ce.colors.as_ref().is_some_and(|c| {
                        (0..n).any(|k| k != i && cand.labels[k] == target && c[k] == c[i])
                    });
                    if clash {
                        continue;
                    }
                    cand.labels[i] = target;
                }
                _ if r > 1 => {
                    let i = rng.random_range(0..n);
                    let k = rng.random_range(0..n);
                    if cand.labels[i] == cand.labels[k] || ce.colors.is_some() {
                        continue;
                    }
                    cand.labels.swap(i, k);
                }
                _ => continue,
            }
            cand.objective = score(&cand, &mut rng, &mut best)?;
            if best.as_ref().is_some_and(|b| b.probe.passes()) {
                return Ok(best);
            }
            if cand.objective <= state.objective {
                state = cand;
            }
        }
    }
    Ok(best)
}

/// Multistart weight search; results are merged in start order.
pub(crate) fn weight_search(ev: &Evaluator, ce: &ConfigEval, cfg: &SearchConfig) -> Result<Option<Best>> {
    let results: Vec<Result<Option<Best>>> =
        (0..cfg.max_starts.max(1)).into_par_iter().map(|s| run_start(ev, ce, cfg, s)).collect();
    let mut best: Option<Best> = None;
    for res in results {
        if let Some(b) = res? {
            if best.as_ref().is_none_or(|cur| b.probe.key() < cur.probe.key()) {
                best = Some(b);
            }
        }
    }
    Ok(best)
}
