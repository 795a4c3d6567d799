//! Report documents and the `recheck` trust boundary: every claim carries
//! the data needed to rerun the exact verifier without searching.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig, ProjPoint};
use crate::partition::PartitionWitness;
use crate::pieces::{
    verify_center_subspace, verify_transversal_witness, verify_tverberg_witness, CellCertificate, Certificate,
    CertificateKind, Verdict, VerifyOptions,
};
use crate::scalar::{dot, format_vec, is_zero_vec, parse_scalar, Scalar, Sign};
use crate::topology::GateResult;

use super::measure::DemoSummary;

pub const TOOL: &str = "projtverberg";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimConfig {
    pub points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub form_f: Vec<String>,
    pub form_g: Vec<String>,
    pub count_plus: usize,
    pub count_minus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub kind: CertificateKind,
    pub verdict: Verdict,
    pub d: usize,
    #[serde(rename = "V")]
    pub v: Vec<Vec<String>>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<String>>,
    pub configs: Vec<ClaimConfig>,
    pub rainbow: bool,
    pub strict_disjoint: bool,
    pub min_count: usize,
    pub threshold: usize,
    pub witness: Option<WitnessJson>,
    pub failing_part: Option<usize>,
    pub failing_config: Option<usize>,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn rows(s: &LinSubspace) -> Vec<Vec<String>> {
    s.basis().iter().map(|r| format_vec(r)).collect()
}

fn claim_config(x: &PointConfig, r: usize, partition: Option<&PartitionWitness>) -> ClaimConfig {
    ClaimConfig {
        points: x.points.iter().map(|p| format_vec(p.coords())).collect(),
        colors: x.colors.clone(),
        r,
        partition: partition.map(|p| p.parts.clone()),
    }
}

fn witness_json(w: &CellCertificate) -> WitnessJson {
    WitnessJson {
        form_f: format_vec(&w.form_f),
        form_g: format_vec(&w.form_g),
        count_plus: w.count_plus,
        count_minus: w.count_minus,
    }
}

impl Claim {
    /// `configs` pairs each configuration with its partition; center
    /// certificates pass `None`.
    pub fn new(
        cert: &Certificate,
        configs: &[(PointConfig, usize, Option<PartitionWitness>)],
        rainbow: bool,
        opts: VerifyOptions,
    ) -> Self {
        Claim {
            kind: cert.kind,
            verdict: cert.verdict,
            d: cert.v.ambient() - 1,
            v: rows(&cert.v),
            w: rows(&cert.w),
            configs: configs.iter().map(|(x, r, p)| claim_config(x, *r, p.as_ref())).collect(),
            rainbow,
            strict_disjoint: opts.strict_disjoint,
            min_count: cert.min_count,
            threshold: cert.threshold,
            witness: cert.witness.as_ref().map(witness_json),
            failing_part: cert.failing_part,
            failing_config: cert.failing_config,
            notes: cert.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub theorem: Option<String>,
    pub verdict: Verdict,
    pub seed: u64,
    pub input_digest: String,
    pub parameters: BTreeMap<String, Value>,
    pub claims: Vec<Claim>,
    pub gates: Vec<GateResult>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demo: Option<DemoSummary>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, theorem: Option<&str>, seed: u64, input_digest: String) -> Self {
        Report {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            theorem: theorem.map(str::to_string),
            verdict: Verdict::Fail,
            seed,
            input_digest,
            parameters: BTreeMap::new(),
            claims: Vec::new(),
            gates: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
            demo: None,
            extra: BTreeMap::new(),
            timing: Timing::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    /// Writes through a temporary file in the same directory and renames.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::InvalidArgument("output path has no file name".into()))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn parse_row(row: &[String], field: &str) -> Result<Vec<Scalar>> {
    row.iter()
        .enumerate()
        .map(|(k, s)| parse_scalar(s).map_err(|_| Error::parse(format!("{field}[{k}]"), format!("malformed number '{s}'"))))
        .collect()
}

fn parse_subspace(rows: &[Vec<String>], d: usize, field: &str) -> Result<LinSubspace> {
    let vecs = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_row(r, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    LinSubspace::span(d + 1, &vecs)
}

fn parse_claim_config(c: &ClaimConfig, d: usize, j: usize) -> Result<PointConfig> {
    let pts = c
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| ProjPoint::new(parse_row(p, &format!("configs[{j}].points[{i}]"))?))
        .collect::<Result<Vec<_>>>()?;
    PointConfig::new(d, pts, c.colors.clone())
}

/// Result of rechecking one claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recheck {
    pub ok: bool,
    pub messages: Vec<String>,
}

/// Reruns the exact verifier on the data embedded in a claim and compares
/// verdict, minimum count and the stored hyperplane pair.
pub fn recheck_claim(claim: &Claim) -> Result<Recheck> {
    let d = claim.d;
    let v = parse_subspace(&claim.v, d, "V")?;
    let w = parse_subspace(&claim.w, d, "W")?;
    let configs = claim
        .configs
        .iter()
        .enumerate()
        .map(|(j, c)| parse_claim_config(c, d, j))
        .collect::<Result<Vec<_>>>()?;
    if configs.is_empty() {
        return Err(Error::parse("configs", "a claim needs at least one configuration"));
    }
    let opts = VerifyOptions { strict_disjoint: claim.strict_disjoint };
    let partition = |j: usize| -> Result<PartitionWitness> {
        let parts = claim.configs[j]
            .partition
            .clone()
            .ok_or_else(|| Error::parse(format!("configs[{j}].partition"), "missing"))?;
        PartitionWitness::new(configs[j].len(), parts)
    };
    let cert = match claim.kind {
        CertificateKind::CenterSubspace => verify_center_subspace(&v, &w, &configs[0], claim.threshold, opts)?,
        CertificateKind::Tverberg => verify_tverberg_witness(&v, &w, &configs[0], &partition(0)?, claim.rainbow, opts)?,
        CertificateKind::Transversal => {
            let pairs = (0..configs.len())
                .map(|j| Ok((configs[j].clone(), partition(j)?)))
                .collect::<Result<Vec<_>>>()?;
            verify_transversal_witness(&v, &w, &pairs, claim.rainbow, opts)?
        }
    };
    let mut messages = Vec::new();
    if cert.verdict != claim.verdict {
        messages.push(format!("verdict {:?} does not match the recomputed {:?}", claim.verdict, cert.verdict));
    }
    if cert.min_count != claim.min_count {
        messages.push(format!("min_count {} does not match the recomputed {}", claim.min_count, cert.min_count));
    }
    if claim.kind == CertificateKind::CenterSubspace && cert.threshold != claim.threshold {
        messages.push("threshold mismatch".into());
    }
    if let Some(wit) = &claim.witness {
        let f = parse_row(&wit.form_f, "witness.form_f")?;
        let g = parse_row(&wit.form_g, "witness.form_g")?;
        if f.len() != d + 1 || g.len() != d + 1 || is_zero_vec(&f) || is_zero_vec(&g) {
            messages.push("witness forms have the wrong shape".into());
        } else {
            if !v.basis().iter().all(|b| dot(&f, b) == Scalar::from_integer(0.into())) {
                messages.push("witness form f does not vanish on V".into());
            }
            if !w.basis().iter().all(|b| dot(&g, b) == Scalar::from_integer(0.into())) {
                messages.push("witness form g does not vanish on W".into());
            }
            let first = &configs[claim.failing_config.unwrap_or(0)];
            let (mut plus, mut minus) = (0, 0);
            for p in &first.points {
                let s = Sign::of(&dot(&f, p.coords())).times(Sign::of(&dot(&g, p.coords())));
                plus += usize::from(s != Sign::Neg);
                minus += usize::from(s != Sign::Pos);
            }
            if (plus, minus) != (wit.count_plus, wit.count_minus) {
                messages.push(format!(
                    "witness counts ({}, {}) differ from the recount ({plus}, {minus})",
                    wit.count_plus, wit.count_minus
                ));
            }
        }
    } else if claim.verdict.passed() {
        messages.push("pass claim without a witness".into());
    }
    Ok(Recheck { ok: messages.is_empty(), messages })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ints;

    fn square_claim() -> Claim {
        let x = PointConfig::from_affine_ints(2, &[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]).unwrap();
        let v = LinSubspace::hyperplane_at_infinity(2);
        let w = LinSubspace::span(3, &[ints(&[0, 0, 1])]).unwrap();
        let cert = verify_center_subspace(&v, &w, &x, 2, VerifyOptions::default()).unwrap();
        Claim::new(&cert, &[(x, 2, None)], false, VerifyOptions::default())
    }

    #[test]
    fn honest_claim_rechecks() {
        let claim = square_claim();
        assert!(claim.verdict.passed());
        let text = serde_json::to_string(&claim).unwrap();
        let back: Claim = serde_json::from_str(&text).unwrap();
        assert!(recheck_claim(&back).unwrap().ok);
    }

    #[test]
    fn tampering_is_caught() {
        let mut claim = square_claim();
        claim.min_count = 3;
        assert!(!recheck_claim(&claim).unwrap().ok);
        let mut claim = square_claim();
        claim.w = vec![vec!["1".into(), "1".into(), "1".into()]];
        assert!(!recheck_claim(&claim).unwrap().ok);
        let mut claim = square_claim();
        claim.witness.as_mut().unwrap().count_plus += 1;
        assert!(!recheck_claim(&claim).unwrap().ok);
    }
}
