//! Batch front end: input documents, job routing, reports, the sampled
//! measure demo and plots.

mod config;
mod measure;
mod plot;
mod report;

pub use config::{parse_config, serialize_config, ConfigEntry, Params, ParsedInput};
pub use measure::{demo_measure, sample_cap, DemoOutcome, DemoSummary, Density, MeasureSpec, DEFAULT_SAMPLE_CAP, SAMPLE_CAP_ENV};
pub use plot::{render_svg, PlotData};
pub use report::{recheck_claim, sha256_hex, write_atomic, Claim, ClaimConfig, Recheck, Report, Timing, WitnessJson, TOOL};

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::centerpoint::{classical_center_point, search_center_subspace, SearchConfig};
use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig};
use crate::partition::PartitionWitness;
use crate::pieces::{
    min_piece_counts, verify_center_subspace, verify_transversal_witness, verify_tverberg_witness, Certificate, Verdict,
};
use crate::scalar::{format_vec, int, Scalar};
use crate::topology::{flag_condition, thm4_condition, tverberg_r, GateMethod, GateResult};
use crate::tverberg::{
    both_free_gate, radon_partition, search_both_subspaces, search_projective_tverberg, search_transversal,
    TransversalInstance,
};

pub const THREADS_ENV: &str = "PROJTVERBERG_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Certify,
    Verify,
    Search,
    Oracle,
    DemoMeasure,
    Plot,
    Recheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Certify => "certify",
            Command::Verify => "verify",
            Command::Search => "search",
            Command::Oracle => "oracle",
            Command::DemoMeasure => "demo-measure",
            Command::Plot => "plot",
            Command::Recheck => "recheck",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Cpt,
    Tver,
    Transversal,
    BothFree,
    Flag,
}

impl Theorem {
    fn name(self) -> &'static str {
        match self {
            Theorem::Cpt => "cpt",
            Theorem::Tver => "tver",
            Theorem::Transversal => "transversal",
            Theorem::BothFree => "both-free",
            Theorem::Flag => "flag",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Theorem::from_str(s, false).ok()
    }
}

#[derive(Debug, Parser)]
#[command(name = "projtverberg", version, about = "Exact projective center point and Tverberg certificates")]
pub struct Args {
    pub command: Command,
    #[arg(long, value_enum)]
    pub theorem: Option<Theorem>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub v: Option<usize>,
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub eps_schedule: Option<Vec<f64>>,
    #[arg(long)]
    pub max_starts: Option<usize>,
    #[arg(long)]
    pub rainbow: bool,
    #[arg(long)]
    pub strict_disjoint: bool,
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Sample count for demo-measure.
    #[arg(long)]
    pub samples: Option<usize>,
}

/// A fully resolved job.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub theorem: Option<Theorem>,
    pub d: Option<usize>,
    pub params: Params,
    pub input: Option<ParsedInput>,
    /// A report to recheck.
    pub report: Option<Report>,
    pub input_digest: String,
    pub search: SearchConfig,
    pub samples: Option<usize>,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl JobSpec {
    pub fn from_args(args: &Args) -> Result<JobSpec> {
        let text = args.input.as_ref().map(std::fs::read_to_string).transpose()?;
        let (input, report) = match (&text, args.command) {
            (Some(t), Command::Recheck) => (None, Some(serde_json::from_str::<Report>(t)?)),
            (None, Command::Recheck) => return Err(Error::InvalidArgument("recheck needs --input REPORT".into())),
            (Some(t), _) => (Some(parse_config(t)?), None),
            (None, _) => (None, None),
        };
        let pick = |flag: Option<usize>, from: fn(&Params) -> Option<usize>| flag.or(input.as_ref().and_then(|i| from(&i.params)));
        let params = Params {
            v: pick(args.v, |p| p.v),
            w: pick(args.w, |p| p.w),
            m: pick(args.m, |p| p.m),
            r: pick(args.r, |p| p.r),
            p: args.p.or(input.as_ref().and_then(|i| i.params.p)),
        };
        let d = match (args.d, input.as_ref().map(|i| i.d)) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidArgument(format!("--d {a} contradicts d = {b} in the input")))
            }
            (a, b) => a.or(b),
        };
        let mut search = input.as_ref().and_then(|i| i.search.clone()).unwrap_or_default();
        if let Some(s) = args.seed {
            search.seed = s;
        }
        if let Some(e) = &args.eps_schedule {
            search.eps_schedule = e.clone();
        }
        if let Some(m) = args.max_starts {
            search.max_starts = m;
        }
        search.rainbow |= args.rainbow;
        search.strict_disjoint |= args.strict_disjoint;
        search.validate()?;
        let input_digest = match &text {
            Some(t) => sha256_hex(t.as_bytes()),
            None => sha256_hex(
                json!({"d": d, "v": params.v, "w": params.w, "m": params.m, "r": params.r, "p": params.p})
                    .to_string()
                    .as_bytes(),
            ),
        };
        Ok(JobSpec {
            command: args.command,
            theorem: args.theorem,
            d,
            params,
            input,
            report,
            input_digest,
            search,
            samples: args.samples,
            output: args.output.clone(),
            plot: args.plot.clone(),
        })
    }

    fn d(&self) -> Result<usize> {
        self.d.ok_or_else(|| Error::InvalidArgument("the dimension d is required (--d or the input)".into()))
    }

    fn need(&self, value: Option<usize>, name: &str) -> Result<usize> {
        value.ok_or_else(|| Error::InvalidArgument(format!("parameter {name} is required for this theorem")))
    }

    fn theorem(&self) -> Result<Theorem> {
        self.theorem.ok_or_else(|| Error::InvalidArgument(format!("{} needs --theorem", self.command.name())))
    }

    fn input(&self) -> Result<&ParsedInput> {
        self.input.as_ref().ok_or_else(|| Error::InvalidArgument(format!("{} needs --input", self.command.name())))
    }

    fn configs(&self) -> Result<&[ConfigEntry]> {
        let c = &self.input()?.configs;
        if c.is_empty() {
            return Err(Error::parse("points", "the input has no points"));
        }
        Ok(c)
    }

    /// `V` from the input, or from `v`: the hyperplane at infinity for
    /// `v = d - 1`, otherwise the span of the first `v + 1` coordinate vectors.
    fn v_subspace(&self) -> Result<LinSubspace> {
        if let Some(v) = self.input.as_ref().and_then(|i| i.v.clone()) {
            return Ok(v);
        }
        let d = self.d()?;
        let v = self.need(self.params.v, "v")?;
        if v >= d {
            return Err(Error::InvalidArgument(format!("need v < d, got v = {v}, d = {d}")));
        }
        if v + 1 == d {
            return Ok(LinSubspace::hyperplane_at_infinity(d));
        }
        let rows: Vec<Vec<Scalar>> =
            (0..=v).map(|i| (0..=d).map(|k| int(i64::from(k == i))).collect()).collect();
        LinSubspace::span(d + 1, &rows)
    }

    fn w_subspace(&self) -> Result<LinSubspace> {
        self.input()?.w.clone().ok_or_else(|| Error::parse("W", "missing"))
    }
}

/// Everything a job produced.
pub struct JobResult {
    pub report: Report,
    pub plot: Option<PlotData>,
}

fn dims(s: &LinSubspace) -> usize {
    s.rank() - 1
}

fn flag_gate(d: usize, v: usize, w: usize, m: usize) -> Result<GateResult> {
    let res = flag_condition(d as u32, v as u32, w as u32, m as u32)?;
    Ok(GateResult {
        name: "flag".into(),
        holds: res.holds,
        method: GateMethod::Cohomology,
        explanation: format!("class of degree {} reduces to {}", res.degree, res.reduced),
        confirmed: Some(res.holds),
        reduced: Some(res.reduced.to_string()),
        warnings: Vec::new(),
    })
}

/// Recomputes a gate from its parameters; shared by `certify` and `recheck`.
pub fn gate_for(theorem: Theorem, d: usize, v: usize, w: usize, m: usize, p: u64) -> Result<GateResult> {
    match theorem {
        Theorem::Flag => flag_gate(d, v, w, m),
        Theorem::Transversal => thm4_condition(d as u32, v as u32, w as u32, m as u32, p),
        Theorem::BothFree => both_free_gate(d, v, w, m, p),
        _ => Err(Error::InvalidArgument(format!("theorem {} has no topological gate", theorem.name()))),
    }
}

fn record_gate_params(report: &mut Report, d: usize, v: usize, w: usize, m: usize, p: u64) {
    for (k, x) in [("d", d as u64), ("v", v as u64), ("w", w as u64), ("m", m as u64), ("p", p)] {
        report.parameters.insert(k.into(), json!(x));
    }
}

fn push_claim(
    report: &mut Report,
    cert: &Certificate,
    configs: &[(PointConfig, usize, Option<PartitionWitness>)],
    cfg: &SearchConfig,
) {
    report.claims.push(Claim::new(cert, configs, cfg.rainbow, cfg.verify_options()));
}

fn plot_of(x: &PointConfig, cert: &Certificate, partition: Option<PartitionWitness>) -> PlotData {
    PlotData {
        points: Some(x.clone()),
        v: Some(cert.v.clone()),
        w: Some(cert.w.clone()),
        pairs: cert.witness.iter().map(|c| (c.form_f.clone(), c.form_g.clone())).collect(),
        partition,
        title: format!("min count {}", cert.min_count),
    }
}

fn certify(job: &JobSpec, report: &mut Report) -> Result<Option<PlotData>> {
    let theorem = job.theorem()?;
    if matches!(theorem, Theorem::Cpt | Theorem::Tver) {
        // existence is unconditional here; certify by finding a certificate
        return search(job, report);
    }
    let d = job.d()?;
    let v = job.need(job.params.v, "v")?;
    let m = match (job.params.m, &job.input) {
        (Some(m), _) => m,
        (None, Some(i)) if !i.configs.is_empty() => i.configs.len(),
        _ => job.need(None, "m")?,
    };
    let w = match job.params.w {
        Some(w) => w,
        None if m * (d - v.min(d)) >= 1 => m * (d - v.min(d)) - 1,
        None => job.need(None, "w")?,
    };
    let p = job.params.p.unwrap_or(2);
    let gate = gate_for(theorem, d, v, w, m, p)?;
    record_gate_params(report, d, v, w, m, p);
    report.verdict = Verdict::from_bool(gate.holds);
    report.warnings.extend(gate.warnings.iter().cloned());
    if let Some(class) = &gate.reduced {
        report.notes.push(format!("reduced class: {class}"));
    }
    report.gates.push(gate);
    Ok(None)
}

fn verify(job: &JobSpec, report: &mut Report) -> Result<Option<PlotData>> {
    let theorem = job.theorem()?;
    let cfg = &job.search;
    let opts = cfg.verify_options();
    let v = job.v_subspace()?;
    let w = job.w_subspace()?;
    let configs = job.configs()?;
    let d = job.d()?;
    report.parameters.insert("d".into(), json!(d));
    report.parameters.insert("v".into(), json!(dims(&v)));
    report.parameters.insert("w".into(), json!(dims(&w)));
    let partition_of = |j: usize, e: &ConfigEntry| {
        e.partition.clone().ok_or_else(|| Error::parse(format!("configs[{j}].partition"), "missing"))
    };
    match theorem {
        Theorem::Cpt => {
            let x = &configs[0].x;
            let r = match job.params.r.or(configs[0].r) {
                Some(r) => r,
                None => tverberg_r(x.len(), d, dims(&v))?,
            };
            report.parameters.insert("r".into(), json!(r));
            let cert = verify_center_subspace(&v, &w, x, r, opts)?;
            push_claim(report, &cert, &[(x.clone(), r, None)], cfg);
            Ok(Some(plot_of(x, &cert, None)))
        }
        Theorem::Tver => {
            let x = &configs[0].x;
            let part = partition_of(0, &configs[0])?;
            let cert = verify_tverberg_witness(&v, &w, x, &part, cfg.rainbow, opts)?;
            push_claim(report, &cert, &[(x.clone(), part.r(), Some(part.clone()))], cfg);
            Ok(Some(plot_of(x, &cert, Some(part))))
        }
        Theorem::Transversal | Theorem::BothFree => {
            let pairs = configs
                .iter()
                .enumerate()
                .map(|(j, e)| Ok((e.x.clone(), partition_of(j, e)?)))
                .collect::<Result<Vec<_>>>()?;
            let cert = verify_transversal_witness(&v, &w, &pairs, cfg.rainbow, opts)?;
            let cs: Vec<_> = pairs.iter().map(|(x, p)| (x.clone(), p.r(), Some(p.clone()))).collect();
            push_claim(report, &cert, &cs, cfg);
            Ok(Some(plot_of(&pairs[0].0, &cert, Some(pairs[0].1.clone()))))
        }
        Theorem::Flag => Err(Error::InvalidArgument("verify does not apply to the flag condition; use certify".into())),
    }
}

fn search(job: &JobSpec, report: &mut Report) -> Result<Option<PlotData>> {
    let theorem = job.theorem()?;
    let cfg = &job.search;
    let d = job.d()?;
    let configs = job.configs()?;
    report.parameters.insert("d".into(), json!(d));
    match theorem {
        Theorem::Cpt => {
            let v = job.v_subspace()?;
            let x = &configs[0].x;
            let r = match job.params.r.or(configs[0].r) {
                Some(r) => r,
                None => tverberg_r(x.len(), d, dims(&v))?,
            };
            report.parameters.insert("v".into(), json!(dims(&v)));
            report.parameters.insert("r".into(), json!(r));
            let out = search_center_subspace(&v, x, r, cfg)?;
            report.notes.push(format!("strategy {:?} after {} evaluations", out.strategy, out.evaluations));
            push_claim(report, &out.certificate, &[(x.clone(), r, None)], cfg);
            Ok(Some(plot_of(x, &out.certificate, None)))
        }
        Theorem::Tver => {
            let v = job.v_subspace()?;
            let x = &configs[0].x;
            let big_d = (d - dims(&v)) * dims(&v).saturating_add(1);
            let r = job.params.r.or(configs[0].r).unwrap_or((x.len().saturating_sub(1)) / (big_d + 1) + 1);
            report.parameters.insert("v".into(), json!(dims(&v)));
            report.parameters.insert("r".into(), json!(r));
            let out = search_projective_tverberg(&v, x, r, cfg)?;
            report.warnings.extend(out.warnings.iter().cloned());
            report.notes.push(format!("strategy {:?} after {} evaluations", out.strategy, out.evaluations));
            let part = out.partition.clone();
            push_claim(report, &out.certificate, &[(x.clone(), r, Some(part.clone()))], cfg);
            Ok(Some(plot_of(x, &out.certificate, Some(part))))
        }
        Theorem::Transversal => {
            let v = job.v_subspace()?;
            let v_dim = dims(&v);
            let m = configs.len();
            let w_dim = job.params.w.unwrap_or((m * (d - v_dim)).saturating_sub(1));
            let p = job.params.p.unwrap_or(2);
            let pairs = rs_of(job, configs)?;
            let inst = TransversalInstance::new(v, w_dim, pairs.clone(), p)?;
            let out = search_transversal(&inst, cfg)?;
            record_gate_params(report, d, v_dim, w_dim, m, p);
            report.warnings.extend(out.warnings.iter().cloned());
            report.notes.push(format!("strategy {:?} after {} evaluations", out.strategy, out.evaluations));
            report.gates.push(out.gate.clone());
            let cs: Vec<_> =
                pairs.iter().zip(&out.partitions).map(|((x, r), p)| (x.clone(), *r, Some(p.clone()))).collect();
            push_claim(report, &out.certificate, &cs, cfg);
            Ok(Some(plot_of(&pairs[0].0, &out.certificate, out.partitions.first().cloned())))
        }
        Theorem::BothFree => {
            let v_dim = job.need(job.params.v, "v")?;
            let w_dim = job.need(job.params.w, "w")?;
            let p = job.params.p.unwrap_or(2);
            let pairs = rs_of(job, configs)?;
            let out = search_both_subspaces(&pairs, v_dim, w_dim, p, cfg)?;
            record_gate_params(report, d, v_dim, w_dim, pairs.len(), p);
            report.warnings.extend(out.warnings.iter().cloned());
            report.notes.push(format!("strategy {:?} after {} evaluations", out.strategy, out.evaluations));
            report.gates.push(out.gate.clone());
            let cs: Vec<_> =
                pairs.iter().zip(&out.partitions).map(|((x, r), p)| (x.clone(), *r, Some(p.clone()))).collect();
            push_claim(report, &out.certificate, &cs, cfg);
            Ok(Some(plot_of(&pairs[0].0, &out.certificate, out.partitions.first().cloned())))
        }
        Theorem::Flag => Err(Error::InvalidArgument("search does not apply to the flag condition; use certify".into())),
    }
}

fn rs_of(job: &JobSpec, configs: &[ConfigEntry]) -> Result<Vec<(PointConfig, usize)>> {
    configs
        .iter()
        .enumerate()
        .map(|(j, e)| {
            let r = e.r.or(job.params.r).ok_or_else(|| Error::parse(format!("configs[{j}].r"), "missing"))?;
            Ok((e.x.clone(), r))
        })
        .collect()
}

fn oracle(job: &JobSpec, report: &mut Report) -> Result<Option<PlotData>> {
    let theorem = job.theorem()?;
    let cfg = &job.search;
    let d = job.d()?;
    let x = &job.configs()?[0].x;
    let v = LinSubspace::hyperplane_at_infinity(d);
    report.parameters.insert("d".into(), json!(d));
    match theorem {
        Theorem::Cpt => {
            let affine = x
                .affine_points()
                .ok_or_else(|| Error::InvalidArgument("the classical oracle needs affine points".into()))?;
            let (c, depth) = classical_center_point(&affine)?;
            let target = x.len().div_ceil(d + 1);
            report.parameters.insert("r".into(), json!(target));
            report.extra.insert("center".into(), json!(format_vec(&c)));
            report.extra.insert("depth".into(), json!(depth));
            let mut h = c.clone();
            h.push(int(1));
            let w = LinSubspace::span(d + 1, &[h])?;
            let cert = verify_center_subspace(&v, &w, x, target, cfg.verify_options())?;
            push_claim(report, &cert, &[(x.clone(), target, None)], cfg);
            Ok(Some(plot_of(x, &cert, None)))
        }
        Theorem::Tver => {
            let (part, c) = radon_partition(x)?;
            report.extra.insert("common_point".into(), json!(format_vec(&c)));
            let mut h = c;
            h.push(int(1));
            let w = LinSubspace::span(d + 1, &[h])?;
            let cert = verify_tverberg_witness(&v, &w, x, &part, false, cfg.verify_options())?;
            push_claim(report, &cert, &[(x.clone(), 2, Some(part.clone()))], cfg);
            Ok(Some(plot_of(x, &cert, Some(part))))
        }
        _ => Err(Error::InvalidArgument("oracle supports --theorem cpt and tver".into())),
    }
}

fn demo(job: &JobSpec, report: &mut Report) -> Result<Option<PlotData>> {
    let input_spec = job.input.as_ref().and_then(|i| i.measure.clone());
    let d = job.d()?;
    let v = job.need(job.params.v, "v")?;
    let mut spec = input_spec.unwrap_or(MeasureSpec { densities: vec![Density::unit_box(d)], samples: 60 });
    if let Some(n) = job.samples {
        spec.samples = n;
    }
    let out = demo_measure(&spec, d, v, job.search.seed, &job.search)?;
    report.parameters.insert("d".into(), json!(d));
    report.parameters.insert("v".into(), json!(v));
    report.parameters.insert("samples".into(), json!(spec.samples));
    report.parameters.insert("measures".into(), json!(spec.densities.len()));
    report.notes.push(out.summary.label.clone());
    for (cert, (x, r)) in out.certificates.iter().zip(&out.configs) {
        push_claim(report, cert, &[(x.clone(), *r, None)], &job.search);
    }
    let plot = out.certificates.first().map(|c| plot_of(&out.configs[0].0, c, None));
    report.demo = Some(out.summary);
    Ok(plot)
}

fn plot_only(job: &JobSpec, report: &mut Report) -> Result<Option<PlotData>> {
    let input = job.input()?;
    let entry = input.configs.first();
    let mut data = PlotData {
        points: entry.map(|e| e.x.clone()),
        v: input.v.clone(),
        w: input.w.clone(),
        pairs: Vec::new(),
        partition: entry.and_then(|e| e.partition.clone()),
        title: String::new(),
    };
    if let (Some(e), Some(v), Some(w)) = (entry, &input.v, &input.w) {
        let (min, cert) = min_piece_counts(v, w, &e.x)?;
        data.pairs.push((cert.form_f, cert.form_g));
        data.title = format!("min count {min}");
    }
    if job.plot.is_none() && job.output.is_none() {
        return Err(Error::InvalidArgument("plot needs --plot FILE.svg".into()));
    }
    report.verdict = Verdict::Pass;
    Ok(Some(data))
}

/// Rechecks every claim and gate of a stored report.
fn recheck(job: &JobSpec, report: &mut Report) -> Result<Option<PlotData>> {
    let stored = job.report.as_ref().ok_or_else(|| Error::InvalidArgument("recheck needs --input REPORT".into()))?;
    let mut consistent = true;
    for (k, claim) in stored.claims.iter().enumerate() {
        let res = recheck_claim(claim)?;
        consistent &= res.ok;
        report.notes.extend(res.messages.iter().map(|m| format!("claim {k}: {m}")));
    }
    if !stored.gates.is_empty() {
        let theorem = stored.theorem.as_deref().and_then(Theorem::from_name);
        let get = |k: &str| stored.parameters.get(k).and_then(Value::as_u64);
        match (theorem, get("d"), get("v"), get("w"), get("m"), get("p")) {
            (Some(t), Some(d), Some(v), Some(w), Some(m), Some(p)) => {
                let gate = gate_for(t, d as usize, v as usize, w as usize, m as usize, p)?;
                let same = stored.gates.iter().any(|g| g.holds == gate.holds && g.reduced == gate.reduced);
                if !same {
                    consistent = false;
                    report.notes.push(format!("gate {} does not match the recomputation", gate.name));
                }
            }
            _ => {
                consistent = false;
                report.notes.push("gate parameters are missing".into());
            }
        }
    }
    let claims_pass = stored.claims.iter().all(|c| c.verdict.passed());
    let gates_pass = stored.gates.iter().all(|g| g.holds);
    let expected = if stored.claims.is_empty() { gates_pass } else { claims_pass };
    if stored.verdict.passed() && !expected {
        consistent = false;
        report.notes.push("the stored verdict is pass but a claim or gate fails".into());
    }
    if stored.claims.is_empty() && stored.gates.is_empty() && stored.verdict.passed() {
        consistent = false;
        report.notes.push("pass verdict without any claim or gate".into());
    }
    report.extra.insert("consistent".into(), json!(consistent));
    report.extra.insert("checked_claims".into(), json!(stored.claims.len()));
    report.extra.insert("checked_digest".into(), json!(stored.input_digest));
    report.verdict = Verdict::from_bool(consistent && stored.verdict.passed());
    Ok(None)
}

/// Runs a job. Pass verdicts are rechecked from the serialized claims before
/// they are reported.
pub fn execute(job: &JobSpec) -> Result<JobResult> {
    let start = Instant::now();
    let mut report = Report::new(
        job.command.name(),
        job.theorem.map(Theorem::name),
        job.search.seed,
        job.input_digest.clone(),
    );
    if let Some(i) = &job.input {
        report.warnings.extend(i.warnings.iter().cloned());
    }
    let plot = match job.command {
        Command::Certify => certify(job, &mut report)?,
        Command::Verify => verify(job, &mut report)?,
        Command::Search => search(job, &mut report)?,
        Command::Oracle => oracle(job, &mut report)?,
        Command::DemoMeasure => demo(job, &mut report)?,
        Command::Plot => plot_only(job, &mut report)?,
        Command::Recheck => recheck(job, &mut report)?,
    };
    if !matches!(job.command, Command::Certify | Command::Plot | Command::Recheck) {
        let mut ok = !report.claims.is_empty() && report.claims.iter().all(|c| c.verdict.passed());
        for (k, claim) in report.claims.iter().enumerate() {
            // through the serialized form, as a reader of the report would
            let back: Claim = serde_json::from_str(&serde_json::to_string(claim)?)?;
            let res = recheck_claim(&back)?;
            if !res.ok {
                ok = false;
                report.notes.extend(res.messages.iter().map(|m| format!("claim {k}: {m}")));
            }
        }
        report.verdict = Verdict::from_bool(ok);
    }
    report.timing.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(JobResult { report, plot })
}

pub fn run_job(job: &JobSpec) -> Result<Report> {
    execute(job).map(|r| r.report)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn finish(job: &JobSpec, result: &JobResult) -> Result<()> {
    if let (Some(path), Some(data)) = (job.plot.as_ref().or(job.output.as_ref().filter(|_| job.command == Command::Plot)), &result.plot) {
        write_atomic(path, render_svg(data)?.as_bytes())?;
    }
    match &job.output {
        Some(path) if job.command != Command::Plot => result.report.write_atomic(path)?,
        _ => print!("{}", result.report.to_json()),
    }
    Ok(())
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let outcome = JobSpec::from_args(&args).and_then(|job| {
        let result = execute(&job)?;
        finish(&job, &result)?;
        Ok(result.report.verdict)
    });
    match outcome {
        Ok(v) if v.passed() => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
