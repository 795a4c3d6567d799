use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centerpoint::{search_center_subspace, SearchConfig, Strategy};
use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig};
use crate::partition::PartitionWitness;
use crate::pieces::{verify_center_subspace, verify_transversal_witness, Certificate};
use crate::scalar::int;
use crate::topology::{flag_condition, required_points, thm4_condition, thm6_condition, GateMethod, GateResult};

use super::common::{distinct_points, meet_candidates, pad_with_points, span_candidates, Best, ConfigEval, Mode, Scanner};
use super::{is_prime_power, search_projective_tverberg};

/// Several configurations sharing one `V`, each with its own part count.
#[derive(Clone, Debug)]
pub struct TransversalInstance {
    pub v: LinSubspace,
    /// Projective dimension of the subspace `W` sought.
    pub w_dim: usize,
    pub configs: Vec<(PointConfig, usize)>,
    pub p: u64,
}

impl TransversalInstance {
    pub fn new(v: LinSubspace, w_dim: usize, configs: Vec<(PointConfig, usize)>, p: u64) -> Result<Self> {
        let first = configs.first().ok_or_else(|| Error::InvalidArgument("no configurations given".into()))?;
        let d = first.0.d;
        for (x, r) in &configs {
            Error::check_len(d, x.d)?;
            if *r == 0 || *r > x.len() {
                return Err(Error::InvalidArgument(format!("need 1 <= r <= {}, got r = {r}", x.len())));
            }
        }
        Error::check_len(d + 1, v.ambient())?;
        if v.rank() == 0 || v.rank() > d {
            return Err(Error::InvalidArgument("V must be a proper nonempty subspace".into()));
        }
        if w_dim >= d {
            return Err(Error::InvalidArgument(format!("need w < d, got w = {w_dim}, d = {d}")));
        }
        Ok(TransversalInstance { v, w_dim, configs, p })
    }

    pub fn d(&self) -> usize {
        self.configs[0].0.d
    }

    pub fn v_dim(&self) -> usize {
        self.v.rank() - 1
    }

    pub fn m(&self) -> usize {
        self.configs.len()
    }

    /// `(d - v)(d - w)`.
    pub fn big_d(&self) -> usize {
        (self.d() - self.v_dim()) * (self.d() - self.w_dim)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (d, v, m) = (self.d(), self.v_dim(), self.m());
        if self.w_dim + 1 != m * (d - v) {
            out.push(format!("w = {} differs from m(d-v)-1 = {}", self.w_dim, m * (d - v) - 1));
        }
        for (j, (x, r)) in self.configs.iter().enumerate() {
            let need = required_points(self.big_d(), *r);
            if x.len() != need {
                out.push(format!("|X^{}| = {} differs from (D+1)(r-1)+1 = {need}", j + 1, x.len()));
            }
            if *r > 1 && !is_power_of(*r as u64, self.p) {
                out.push(format!("r_{} = {r} is not a power of p = {}", j + 1, self.p));
            }
        }
        out
    }
}

fn is_power_of(r: u64, p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = r;
    while q % p == 0 {
        q /= p;
    }
    q == 1
}

#[derive(Clone, Debug)]
pub struct TransversalOutcome {
    pub w: LinSubspace,
    pub partitions: Vec<PartitionWitness>,
    pub certificate: Certificate,
    pub gate: GateResult,
    pub strategy: Strategy,
    pub warnings: Vec<String>,
    pub evaluations: usize,
}

fn partitions_of(best: &Best, evals: &[ConfigEval]) -> Result<Vec<PartitionWitness>> {
    best.probe
        .configs
        .iter()
        .zip(evals)
        .map(|(c, ev)| {
            if let Some(p) = &c.partition {
                return Ok(p.clone());
            }
            let p = PartitionWitness::from_labels(&c.labels)?;
            if p.r() == ev.r {
                Ok(p)
            } else {
                PartitionWitness::from_labels(&(0..ev.n()).map(|i| i % ev.r).collect::<Vec<_>>())
            }
        })
        .collect()
}

/// Runs the generic candidate stream for a fixed `V`.
fn common_w_search(
    v: &LinSubspace,
    evals: &[ConfigEval],
    k: usize,
    mode: Mode,
    cfg: &SearchConfig,
    seeds: Vec<(LinSubspace, Strategy)>,
    cap: usize,
) -> Result<(Option<Best>, usize)> {
    let ambient = v.ambient();
    let scanner = Scanner::new(evals, mode, cfg);
    let mut best = None;
    let mut done = scanner.scan(seeds, &mut best)?;
    let pts = distinct_points(evals);
    if !done {
        let spans = span_candidates(&pts, ambient, k, cap)?;
        done = scanner.scan(spans.into_iter().map(|w| (w, Strategy::PointSpan)).collect(), &mut best)?;
    }
    if !done {
        let meets = meet_candidates(&pts, ambient, k, cap)?;
        done = scanner.scan(meets.into_iter().map(|w| (w, Strategy::Meet)).collect(), &mut best)?;
    }
    if !done {
        scanner.perturbation(&mut best, cfg.max_iterations)?;
    }
    Ok((best, scanner.evaluations()))
}

/// Searches for one `W` of projective dimension `w` and partitions of every
/// configuration, all valid for the same pairs `H1 ⊇ V`, `H2 ⊇ W`.
pub fn search_transversal(inst: &TransversalInstance, cfg: &SearchConfig) -> Result<TransversalOutcome> {
    cfg.validate()?;
    let (d, v_dim, m) = (inst.d(), inst.v_dim(), inst.m());
    let gate = thm4_condition(d as u32, v_dim as u32, inst.w_dim as u32, m as u32, inst.p)?;
    let mut warnings = inst.warnings();
    if !gate.holds {
        warnings.push(format!("hypothesis not established: {}", gate.explanation));
    }
    let k = inst.w_dim + 1;
    let v = &inst.v;

    if m == 1 && k == d - v_dim {
        let (x, r) = &inst.configs[0];
        let out = search_projective_tverberg(v, x, *r, cfg)?;
        warnings.extend(out.warnings);
        let certificate = verify_transversal_witness(
            v,
            &out.w,
            &[(x.clone(), out.partition.clone())],
            cfg.rainbow,
            cfg.verify_options(),
        )?;
        let strategy = if certificate.verdict.passed() { Strategy::Delegated } else { Strategy::BestEffort };
        return Ok(TransversalOutcome {
            w: out.w,
            partitions: vec![out.partition],
            certificate,
            gate,
            strategy,
            warnings,
            evaluations: out.evaluations,
        });
    }

    let evals: Vec<ConfigEval> =
        inst.configs.iter().map(|(x, r)| ConfigEval::new(v, x, *r, cfg.rainbow)).collect::<Result<_>>()?;
    let mut seeds = Vec::new();
    let mut evaluations = 0;
    if k >= d - v_dim {
        // a valid W_j stays valid for every W containing it
        let pts = distinct_points(&evals);
        let mut join = LinSubspace::zero(v.ambient());
        let big_d = (d - v_dim) * (v_dim + 1);
        for (x, r) in inst.configs.iter().filter(|(x, r)| x.len() >= required_points(big_d, *r)) {
            let out = search_projective_tverberg(v, x, *r, cfg)?;
            evaluations += out.evaluations;
            if out.certificate.verdict.passed() {
                join = join.join(&out.w)?;
            }
        }
        if let Some(w) = pad_with_points(&join, &pts, k)? {
            seeds.push((w, Strategy::Join));
        }
    }
    let (best, evals_used) = common_w_search(v, &evals, k, Mode::Partition, cfg, seeds, cfg.candidate_cap)?;
    evaluations += evals_used;
    let best = best.ok_or_else(|| Error::InvalidArgument("no candidate subspace could be formed".into()))?;
    let partitions = partitions_of(&best, &evals)?;
    let configs: Vec<(PointConfig, PartitionWitness)> =
        inst.configs.iter().map(|(x, _)| x.clone()).zip(partitions.iter().cloned()).collect();
    let certificate = verify_transversal_witness(v, &best.w, &configs, cfg.rainbow, cfg.verify_options())?;
    let strategy = if certificate.verdict.passed() { best.strategy } else { Strategy::BestEffort };
    Ok(TransversalOutcome { w: best.w, partitions, certificate, gate, strategy, warnings, evaluations })
}

#[derive(Clone, Debug)]
pub struct CenterTransversalOutcome {
    pub w: LinSubspace,
    /// One certificate per configuration.
    pub certificates: Vec<Certificate>,
    pub strategy: Strategy,
    pub evaluations: usize,
}

impl CenterTransversalOutcome {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.verdict.passed())
    }
}

/// One `W` of projective dimension `w_dim` such that every configuration
/// keeps at least its `r_j` points in each closed piece.
pub fn search_center_transversal(
    v: &LinSubspace,
    configs: &[(PointConfig, usize)],
    w_dim: usize,
    cfg: &SearchConfig,
) -> Result<CenterTransversalOutcome> {
    cfg.validate()?;
    let first = configs.first().ok_or_else(|| Error::InvalidArgument("no configurations given".into()))?;
    let d = first.0.d;
    if w_dim >= d {
        return Err(Error::InvalidArgument(format!("need w < d, got w = {w_dim}, d = {d}")));
    }
    let k = w_dim + 1;
    let evals: Vec<ConfigEval> =
        configs.iter().map(|(x, r)| ConfigEval::new(v, x, (*r).max(1), false)).collect::<Result<_>>()?;
    let mut seeds = Vec::new();
    let mut evaluations = 0;
    if k >= v.ambient() - v.rank() {
        let pts = distinct_points(&evals);
        let mut join = LinSubspace::zero(v.ambient());
        for (x, r) in configs {
            let out = search_center_subspace(v, x, *r, cfg)?;
            evaluations += out.evaluations;
            join = join.join(&out.w)?;
        }
        if let Some(w) = pad_with_points(&join, &pts, k)? {
            seeds.push((w, Strategy::Join));
        }
    }
    let (best, used) = common_w_search(v, &evals, k, Mode::Center, cfg, seeds, cfg.candidate_cap)?;
    evaluations += used;
    let best = best.ok_or_else(|| Error::InvalidArgument("no candidate subspace could be formed".into()))?;
    let certificates = configs
        .iter()
        .map(|(x, r)| verify_center_subspace(v, &best.w, x, *r, cfg.verify_options()))
        .collect::<Result<Vec<_>>>()?;
    let ok = certificates.iter().all(|c| c.verdict.passed());
    let strategy = if ok { best.strategy } else { Strategy::BestEffort };
    Ok(CenterTransversalOutcome { w: best.w, certificates, strategy, evaluations })
}

#[derive(Clone, Debug)]
pub struct BothOutcome {
    pub v: LinSubspace,
    pub w: LinSubspace,
    pub partitions: Vec<PartitionWitness>,
    pub certificate: Certificate,
    pub gate: GateResult,
    pub strategy: Strategy,
    pub warnings: Vec<String>,
    pub evaluations: usize,
}

/// Gate for the search where `V` is free: the Euler characteristic test for
/// two configurations with complementary dimensions, the flag manifold class
/// otherwise.
pub fn both_free_gate(d: usize, v_dim: usize, w_dim: usize, m: usize, p: u64) -> Result<GateResult> {
    if v_dim + w_dim + 1 == d && m == 2 {
        return thm6_condition(d as u32, v_dim as u32, p);
    }
    let mut gate = GateResult {
        name: "flag".into(),
        holds: false,
        method: GateMethod::Unverified,
        explanation: String::new(),
        confirmed: None,
        reduced: None,
        warnings: Vec::new(),
    };
    if p != 2 {
        gate.explanation = format!("the flag manifold condition is stated for p = 2, got p = {p}");
        return Ok(gate);
    }
    match flag_condition(d as u32, v_dim as u32, w_dim as u32, m as u32) {
        Ok(res) => {
            gate.holds = res.holds;
            gate.method = GateMethod::Cohomology;
            gate.confirmed = Some(res.holds);
            gate.reduced = Some(res.reduced.to_string());
            gate.explanation = format!("class of degree {} reduces to {}", res.degree, res.reduced);
        }
        Err(e) => gate.explanation = e.to_string(),
    }
    Ok(gate)
}

const OUTER_CAP: usize = 48;

/// Searches `V` of projective dimension `v_dim`, `W` of projective dimension
/// `w_dim` and partitions of every configuration.
pub fn search_both_subspaces(
    configs: &[(PointConfig, usize)],
    v_dim: usize,
    w_dim: usize,
    p: u64,
    cfg: &SearchConfig,
) -> Result<BothOutcome> {
    cfg.validate()?;
    let first = configs.first().ok_or_else(|| Error::InvalidArgument("no configurations given".into()))?;
    let d = first.0.d;
    for (x, r) in configs {
        Error::check_len(d, x.d)?;
        if *r == 0 || *r > x.len() {
            return Err(Error::InvalidArgument(format!("need 1 <= r <= {}, got r = {r}", x.len())));
        }
    }
    if v_dim >= d || w_dim >= d {
        return Err(Error::InvalidArgument(format!("need v, w < d, got v = {v_dim}, w = {w_dim}, d = {d}")));
    }
    let m = configs.len();
    let gate = both_free_gate(d, v_dim, w_dim, m, p)?;
    let mut warnings = Vec::new();
    if !gate.holds {
        warnings.push(format!("hypothesis not established: {}; searching anyway", gate.explanation));
    }
    let big_d = (d - v_dim) * (d - w_dim);
    for (j, (x, r)) in configs.iter().enumerate() {
        let need = required_points(big_d, *r);
        if x.len() != need {
            warnings.push(format!("|X^{}| = {} differs from (D+1)(r-1)+1 = {need}", j + 1, x.len()));
        }
        if *r > 1 && !(is_prime_power(*r) && is_power_of(*r as u64, p)) {
            warnings.push(format!("r_{} = {r} is not a power of p = {p}", j + 1));
        }
    }

    let ambient = d + 1;
    let mut all_points: Vec<_> = configs.iter().flat_map(|(x, _)| x.points.iter().cloned()).collect();
    all_points.sort();
    all_points.dedup();
    let mut outer: Vec<LinSubspace> = span_candidates(&all_points, ambient, v_dim + 1, OUTER_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xB07);
    for _ in 0..cfg.max_starts.max(1) * 4 {
        let rows: Vec<Vec<_>> =
            (0..=v_dim).map(|_| (0..ambient).map(|_| int(rng.random_range(-9i64..=9))).collect()).collect();
        let s = LinSubspace::span(ambient, &rows)?;
        if s.rank() == v_dim + 1 {
            outer.push(s);
        }
    }
    let k = w_dim + 1;
    let inner_cap = (cfg.candidate_cap / 16).max(64);
    let inner_cfg = SearchConfig { max_iterations: cfg.max_iterations / 4 + 1, ..cfg.clone() };
    let mut best: Option<(Best, LinSubspace, Vec<ConfigEval>)> = None;
    let mut evaluations = 0;
    for v in outer {
        let evals: Vec<ConfigEval> =
            configs.iter().map(|(x, r)| ConfigEval::new(&v, x, *r, cfg.rainbow)).collect::<Result<_>>()?;
        let (found, used) = common_w_search(&v, &evals, k, Mode::Partition, &inner_cfg, Vec::new(), inner_cap)?;
        evaluations += used;
        if let Some(b) = found {
            let better = best.as_ref().is_none_or(|cur| b.probe.key() < cur.0.probe.key());
            let passes = b.probe.passes();
            if better {
                best = Some((b, v, evals));
            }
            if passes {
                break;
            }
        }
    }
    let (best, v, evals) = best.ok_or_else(|| Error::InvalidArgument("no candidate subspaces could be formed".into()))?;
    let partitions = partitions_of(&best, &evals)?;
    let pairs: Vec<(PointConfig, PartitionWitness)> =
        configs.iter().map(|(x, _)| x.clone()).zip(partitions.iter().cloned()).collect();
    let certificate = verify_transversal_witness(&v, &best.w, &pairs, cfg.rainbow, cfg.verify_options())?;
    let strategy = if certificate.verdict.passed() { best.strategy } else { Strategy::BestEffort };
    Ok(BothOutcome { v, w: best.w, partitions, certificate, gate, strategy, warnings, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn single_configuration_delegates() {
        let x = PointConfig::from_affine_ints(2, &[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]).unwrap();
        let inst = TransversalInstance::new(LinSubspace::hyperplane_at_infinity(2), 0, vec![(x, 2)], 2).unwrap();
        let out = search_transversal(&inst, &cfg()).unwrap();
        assert!(out.certificate.verdict.passed());
        assert_eq!(out.strategy, Strategy::Delegated);
        assert!(out.gate.holds);
    }

    #[test]
    fn two_configurations_in_space() {
        let x1 = PointConfig::from_affine_ints(3, &[vec![0, 0, 0], vec![4, 1, 0], vec![1, 5, 1], vec![2, 2, 6]]).unwrap();
        let x2 =
            PointConfig::from_affine_ints(3, &[vec![1, -3, 2], vec![-2, 1, 1], vec![3, 3, -1], vec![0, 1, 4]]).unwrap();
        let v = LinSubspace::hyperplane_at_infinity(3);
        let inst = TransversalInstance::new(v, 1, vec![(x1, 2), (x2, 2)], 2).unwrap();
        assert!(inst.warnings().is_empty(), "{:?}", inst.warnings());
        let out = search_transversal(&inst, &cfg()).unwrap();
        assert!(out.certificate.verdict.passed(), "{:?}", out.certificate);
        assert_eq!(out.w.rank(), 2);
    }

    #[test]
    fn both_free_in_the_plane() {
        let x1 = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![5, 1], vec![1, 4], vec![3, 3]]).unwrap();
        let x2 = PointConfig::from_affine_ints(2, &[vec![-2, 1], vec![2, -3], vec![4, 4], vec![0, 2]]).unwrap();
        let out = search_both_subspaces(&[(x1, 2), (x2, 2)], 0, 1, 2, &cfg()).unwrap();
        assert!(out.gate.holds);
        assert!(out.certificate.verdict.passed());
        assert_eq!((out.v.rank(), out.w.rank()), (1, 2));
    }

    #[test]
    fn trivial_part_counts() {
        let x1 = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![5, 1], vec![1, 4]]).unwrap();
        let out = search_both_subspaces(&[(x1.clone(), 1), (x1, 1)], 0, 1, 2, &cfg()).unwrap();
        assert!(out.certificate.verdict.passed());
    }

    #[test]
    fn center_transversal_pair() {
        let x1 = PointConfig::from_affine_ints(2, &[vec![0, 0], vec![5, 1], vec![1, 4], vec![3, 3], vec![2, -2]]).unwrap();
        let x2 = PointConfig::from_affine_ints(2, &[vec![-2, 1], vec![2, -3], vec![4, 4], vec![0, 2], vec![1, 1]]).unwrap();
        let v = LinSubspace::hyperplane_at_infinity(2);
        let out = search_center_transversal(&v, &[(x1, 2), (x2, 2)], 1, &cfg()).unwrap();
        assert!(out.passed());
        assert_eq!(out.w.rank(), 2);
    }

    #[test]
    fn gates() {
        assert!(both_free_gate(2, 0, 1, 2, 2).unwrap().holds);
        assert!(both_free_gate(2, 1, 0, 2, 2).unwrap().holds);
        let g = both_free_gate(2, 1, 1, 2, 2).unwrap();
        assert_eq!(g.reduced.as_deref(), Some("e3"));
    }
}
