//! Closed pieces cut out by a pair of hyperplanes and the exact minimum-count
//! engine.
//!
//! A hyperplane `H1 ⊇ V` is `{u·A x = 0}` for a basis `A` of the annihilator
//! of `V`, and likewise `H2 ⊇ W` with `s·B`. The sign of `f(x)g(x)` on a point
//! only changes when `u` or `s` crosses a hyperplane of the central
//! arrangements `{A x_i}` and `{B x_i}`. Pieces are closed, so counts can only
//! drop when moving off a boundary; the minimum is attained on pairs of open
//! cells.


use crate::arrangement::{enumerate_open_cells, OpenCell, SignVector};
use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig, ProjPoint};
use crate::linalg::{mat_vec, vec_mat, Matrix};
use crate::partition::PartitionWitness;
use crate::scalar::{dot, is_zero_vec, Scalar, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplanePair {
    pub f: Vec<Scalar>,
    pub g: Vec<Scalar>,
}

impl HyperplanePair {
    pub fn new(f: Vec<Scalar>, g: Vec<Scalar>) -> Result<Self> {
        if is_zero_vec(&f) || is_zero_vec(&g) {
            return Err(Error::ZeroForm);
        }
        Error::check_len(f.len(), g.len())?;
        Ok(HyperplanePair { f, g })
    }
}

/// Sign of `f(x) g(x)`. Zero means `x` lies on `H1 ∪ H2` and so in both
/// closed pieces.
pub fn piece_sign(pair: &HyperplanePair, x: &ProjPoint) -> Result<Sign> {
    if is_zero_vec(&pair.f) || is_zero_vec(&pair.g) {
        return Err(Error::ZeroForm);
    }
    Error::check_len(pair.f.len(), x.coords().len())?;
    Ok(Sign::of(&dot(&pair.f, x.coords())).times(Sign::of(&dot(&pair.g, x.coords()))))
}

/// Fixed-width bit set over point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask(Vec<u64>);

impl Mask {
    pub fn empty(n: usize) -> Self {
        Mask(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn and(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn or(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    /// The low word, for configurations of at most 64 points.
    pub fn word(&self) -> u64 {
        self.0[0]
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Mask {
        let mut m = Mask::empty(n);
        for &i in indices {
            m.set(i);
        }
        m
    }
}

/// The cells of one side (`V` or `W`) of the engine for a fixed point set.
#[derive(Clone, Debug)]
pub struct SideArrangement {
    /// Rows spanning the annihilator of the subspace.
    pub basis: Matrix,
    pub cells: Vec<OpenCell>,
    pos: Vec<Mask>,
    neg: Vec<Mask>,
}

impl SideArrangement {
    pub fn new(sub: &LinSubspace, points: &[Vec<Scalar>]) -> Result<Self> {
        let ann = sub.annihilator();
        if ann.is_zero() {
            return Err(Error::FullSubspace);
        }
        for p in points {
            Error::check_len(sub.ambient(), p.len())?;
        }
        let basis = ann.basis().clone();
        let values: Vec<Vec<Scalar>> = points.iter().map(|x| mat_vec(&basis, x)).collect();
        let cells = enumerate_open_cells(basis.len(), &values)?;
        let n = points.len();
        let mut pos = Vec::with_capacity(cells.len());
        let mut neg = Vec::with_capacity(cells.len());
        for c in &cells {
            let mut p = Mask::empty(n);
            let mut m = Mask::empty(n);
            for (i, s) in c.sign_vector.signs.iter().enumerate() {
                match s {
                    Sign::Pos => p.set(i),
                    Sign::Neg => m.set(i),
                    Sign::Zero => {}
                }
            }
            pos.push(p);
            neg.push(m);
        }
        Ok(SideArrangement { basis, cells, pos, neg })
    }

    pub fn form(&self, cell: usize) -> Vec<Scalar> {
        vec_mat(&self.cells[cell].witness, &self.basis)
    }
}

/// Index sets where the sign product is strictly positive / strictly negative.
pub fn product_masks(a: &SideArrangement, i: usize, b: &SideArrangement, j: usize) -> (Mask, Mask) {
    let plus = a.pos[i].and(&b.pos[j]).or(&a.neg[i].and(&b.neg[j]));
    let minus = a.pos[i].and(&b.neg[j]).or(&a.neg[i].and(&b.pos[j]));
    (plus, minus)
}

/// `(count_plus, count_minus)` of the closed pieces for a cell pair.
pub fn pair_counts(a: &SideArrangement, i: usize, b: &SideArrangement, j: usize, n: usize) -> (usize, usize) {
    let (plus, minus) = product_masks(a, i, b, j);
    (n - minus.count(), n - plus.count())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCertificate {
    pub sigma: SignVector,
    pub tau: SignVector,
    pub witness_u: Vec<Scalar>,
    pub witness_s: Vec<Scalar>,
    /// `u·A`, the linear form of `H1`.
    pub form_f: Vec<Scalar>,
    /// `s·B`, the linear form of `H2`.
    pub form_g: Vec<Scalar>,
    pub count_plus: usize,
    pub count_minus: usize,
}

impl CellCertificate {
    fn build(a: &SideArrangement, i: usize, b: &SideArrangement, j: usize, n: usize) -> Self {
        let (count_plus, count_minus) = pair_counts(a, i, b, j, n);
        CellCertificate {
            sigma: a.cells[i].sign_vector.clone(),
            tau: b.cells[j].sign_vector.clone(),
            witness_u: a.cells[i].witness.clone(),
            witness_s: b.cells[j].witness.clone(),
            form_f: a.form(i),
            form_g: b.form(j),
            count_plus,
            count_minus,
        }
    }

    pub fn min_count(&self) -> usize {
        self.count_plus.min(self.count_minus)
    }

    /// Recomputes both counts from the forms alone.
    pub fn recount(&self, points: &[Vec<Scalar>]) -> (usize, usize) {
        let mut plus = 0;
        let mut minus = 0;
        for x in points {
            let s = Sign::of(&dot(&self.form_f, x)).times(Sign::of(&dot(&self.form_g, x)));
            if s != Sign::Neg {
                plus += 1;
            }
            if s != Sign::Pos {
                minus += 1;
            }
        }
        (plus, minus)
    }
}

/// Lexicographically first cell pair of smallest piece count.
pub fn minimizing_pair(a: &SideArrangement, b: &SideArrangement, n: usize) -> (usize, usize, usize) {
    let mut best = (usize::MAX, 0, 0);
    for i in 0..a.cells.len() {
        for j in 0..b.cells.len() {
            let (p, m) = pair_counts(a, i, b, j, n);
            let c = p.min(m);
            if c < best.0 {
                best = (c, i, j);
            }
        }
    }
    best
}

/// Search objective: the minimum count and the total shortfall below `r`
/// summed over all cell pairs.
pub fn shortfall(a: &SideArrangement, b: &SideArrangement, n: usize, r: usize) -> (usize, usize) {
    let mut min = usize::MAX;
    let mut total = 0;
    for i in 0..a.cells.len() {
        for j in 0..b.cells.len() {
            let (p, m) = pair_counts(a, i, b, j, n);
            let c = p.min(m);
            min = min.min(c);
            total += r.saturating_sub(c);
        }
    }
    (min, total)
}

/// Sets a part may not be contained in: the strictly positive and strictly
/// negative index sets of every cell pair.
pub fn one_sided_masks(a: &SideArrangement, b: &SideArrangement) -> Vec<Mask> {
    let mut out = Vec::with_capacity(2 * a.cells.len() * b.cells.len());
    for i in 0..a.cells.len() {
        for j in 0..b.cells.len() {
            let (plus, minus) = product_masks(a, i, b, j);
            out.push(plus);
            out.push(minus);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Minimum over all pairs `H1 ⊇ V`, `H2 ⊇ W` of the smaller closed piece
/// count, with a minimizing cell pair.
pub fn min_piece_counts(v: &LinSubspace, w: &LinSubspace, x: &PointConfig) -> Result<(usize, CellCertificate)> {
    Error::check_len(x.ambient(), v.ambient())?;
    Error::check_len(x.ambient(), w.ambient())?;
    let pts = x.vectors();
    let a = SideArrangement::new(v, &pts)?;
    let b = SideArrangement::new(w, &pts)?;
    let (min, i, j) = minimizing_pair(&a, &b, pts.len());
    Ok((min, CellCertificate::build(&a, i, &b, j, pts.len())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    CenterSubspace,
    Tverberg,
    Transversal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub kind: CertificateKind,
    pub min_count: usize,
    pub threshold: usize,
    pub witness: Option<CellCertificate>,
    /// Part that fails to meet both pieces of `witness`.
    pub failing_part: Option<usize>,
    pub failing_config: Option<usize>,
    pub v: LinSubspace,
    pub w: LinSubspace,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Demand that `V` and `W` do not meet.
    pub strict_disjoint: bool,
}

fn disjointness_note(v: &LinSubspace, w: &LinSubspace, opts: VerifyOptions) -> Result<Option<String>> {
    if !opts.strict_disjoint {
        return Ok(None);
    }
    let m = v.meet(w)?;
    Ok((!m.is_zero()).then(|| format!("V and W meet in a subspace of rank {}", m.rank())))
}

pub fn verify_center_subspace(
    v: &LinSubspace,
    w: &LinSubspace,
    x: &PointConfig,
    r: usize,
    opts: VerifyOptions,
) -> Result<Certificate> {
    let (min, cert) = min_piece_counts(v, w, x)?;
    let mut notes = Vec::new();
    let mut ok = min >= r;
    if let Some(note) = disjointness_note(v, w, opts)? {
        ok = false;
        notes.push(note);
    }
    Ok(Certificate {
        verdict: Verdict::from_bool(ok),
        kind: CertificateKind::CenterSubspace,
        min_count: min,
        threshold: r,
        witness: Some(cert),
        failing_part: None,
        failing_config: None,
        v: v.clone(),
        w: w.clone(),
        notes,
    })
}

fn rainbow_violation(x: &PointConfig, partition: &PartitionWitness) -> Result<Option<usize>> {
    let colors = x.colors.as_ref().ok_or(Error::MissingColors)?;
    Ok(partition.parts.iter().position(|p| {
        let mut cs: Vec<u32> = p.iter().map(|&i| colors[i]).collect();
        cs.sort_unstable();
        cs.windows(2).any(|w| w[0] == w[1])
    }))
}

/// Checks that every part meets both closed pieces of every hyperplane pair.
pub fn verify_tverberg_witness(
    v: &LinSubspace,
    w: &LinSubspace,
    x: &PointConfig,
    partition: &PartitionWitness,
    rainbow: bool,
    opts: VerifyOptions,
) -> Result<Certificate> {
    Error::check_len(x.ambient(), v.ambient())?;
    Error::check_len(x.ambient(), w.ambient())?;
    let n = x.len();
    let partition = PartitionWitness::new(n, partition.parts.clone())?;
    let pts = x.vectors();
    let a = SideArrangement::new(v, &pts)?;
    let b = SideArrangement::new(w, &pts)?;
    let parts: Vec<Mask> = partition.parts.iter().map(|p| Mask::from_indices(n, p)).collect();
    let (min, mi, mj) = minimizing_pair(&a, &b, n);
    let mut notes = Vec::new();
    let mut failure = None;
    'outer: for i in 0..a.cells.len() {
        for j in 0..b.cells.len() {
            let (plus, minus) = product_masks(&a, i, &b, j);
            if let Some(k) = parts.iter().position(|p| p.is_subset(&plus) || p.is_subset(&minus)) {
                failure = Some((i, j, k));
                break 'outer;
            }
        }
    }
    let mut ok = failure.is_none();
    let mut failing_part = failure.map(|f| f.2);
    if rainbow {
        if let Some(k) = rainbow_violation(x, &partition)? {
            ok = false;
            notes.push(format!("part {k} repeats a color"));
            failing_part = failing_part.or(Some(k));
        }
    }
    if let Some(note) = disjointness_note(v, w, opts)? {
        ok = false;
        notes.push(note);
    }
    let (wi, wj) = failure.map_or((mi, mj), |f| (f.0, f.1));
    Ok(Certificate {
        verdict: Verdict::from_bool(ok),
        kind: CertificateKind::Tverberg,
        min_count: min,
        threshold: partition.r(),
        witness: Some(CellCertificate::build(&a, wi, &b, wj, n)),
        failing_part,
        failing_config: None,
        v: v.clone(),
        w: w.clone(),
        notes,
    })
}

/// One pair `(V, W)` checked against several configurations and partitions.
pub fn verify_transversal_witness(
    v: &LinSubspace,
    w: &LinSubspace,
    configs: &[(PointConfig, PartitionWitness)],
    rainbow: bool,
    opts: VerifyOptions,
) -> Result<Certificate> {
    if configs.is_empty() {
        return Err(Error::InvalidArgument("no configurations given".into()));
    }
    let mut min_count = usize::MAX;
    let mut first_fail: Option<(usize, Certificate)> = None;
    let mut last = None;
    for (j, (x, partition)) in configs.iter().enumerate() {
        let cert = verify_tverberg_witness(v, w, x, partition, rainbow, opts)?;
        min_count = min_count.min(cert.min_count);
        if !cert.verdict.passed() && first_fail.is_none() {
            first_fail = Some((j, cert.clone()));
        }
        last = Some(cert);
    }
    let (failing_config, base) = match first_fail {
        Some((j, c)) => (Some(j), c),
        None => (None, last.expect("at least one configuration")),
    };
    Ok(Certificate {
        kind: CertificateKind::Transversal,
        min_count,
        threshold: configs.iter().map(|c| c.1.r()).min().unwrap_or(0),
        failing_config,
        ..base
    })
}

/// Convenience: all hyperplane-pair forms of a certificate evaluate to the
/// recorded sign vectors.
pub fn witness_is_consistent(cert: &CellCertificate, points: &[Vec<Scalar>]) -> bool {
    let signs = |form: &[Scalar], sv: &SignVector| {
        points.iter().enumerate().all(|(i, x)| {
            let s = Sign::of(&dot(form, x));
            if sv.zero_support.contains(&i) {
                s.is_zero()
            } else {
                s == sv.signs[i] && !s.is_zero()
            }
        })
    };
    !is_zero_vec(&cert.form_f)
        && !is_zero_vec(&cert.form_g)
        && signs(&cert.form_f, &cert.sigma)
        && signs(&cert.form_g, &cert.tau)
        && cert.recount(points) == (cert.count_plus, cert.count_minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ints;

    fn square() -> PointConfig {
        PointConfig::from_affine_ints(2, &[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]).unwrap()
    }

    fn center() -> LinSubspace {
        LinSubspace::point(&ProjPoint::from_ints(&[0, 0, 1]).unwrap())
    }

    #[test]
    fn piece_signs() {
        let h = HyperplanePair::new(ints(&[0, 0, 1]), ints(&[0, 0, 1])).unwrap();
        assert_eq!(piece_sign(&h, &ProjPoint::from_ints(&[1, 1, 1]).unwrap()).unwrap(), Sign::Pos);
        assert_eq!(piece_sign(&h, &ProjPoint::from_ints(&[1, 0, 0]).unwrap()).unwrap(), Sign::Zero);
        let h = HyperplanePair::new(ints(&[1, 0, 0]), ints(&[0, 1, 0])).unwrap();
        assert_eq!(piece_sign(&h, &ProjPoint::from_ints(&[1, 1, 1]).unwrap()).unwrap(), Sign::Pos);
        assert_eq!(piece_sign(&h, &ProjPoint::from_ints(&[-1, 1, 1]).unwrap()).unwrap(), Sign::Neg);
        assert_eq!(piece_sign(&h, &ProjPoint::from_ints(&[0, 5, 1]).unwrap()).unwrap(), Sign::Zero);
        assert!(HyperplanePair::new(ints(&[0, 0, 0]), ints(&[0, 1, 0])).is_err());
    }

    #[test]
    fn square_around_its_center() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let (min, cert) = min_piece_counts(&v, &center(), &square()).unwrap();
        assert_eq!(min, 2);
        assert!(witness_is_consistent(&cert, &square().vectors()));
        let opts = VerifyOptions::default();
        assert!(verify_center_subspace(&v, &center(), &square(), 2, opts).unwrap().verdict.passed());
        let fail = verify_center_subspace(&v, &center(), &square(), 3, opts).unwrap();
        assert!(!fail.verdict.passed());
        assert_eq!(fail.witness.unwrap().min_count(), 2);
        assert!(verify_center_subspace(&v, &center(), &square(), 0, opts).unwrap().verdict.passed());
    }

    #[test]
    fn single_point_and_saturation() {
        let x = PointConfig::from_affine_ints(2, &[vec![3, 1]]).unwrap();
        let v = LinSubspace::point(&ProjPoint::from_ints(&[1, 2, 5]).unwrap());
        let w = LinSubspace::hyperplane(&ints(&[1, -1, 2])).unwrap();
        assert_eq!(min_piece_counts(&v, &w, &x).unwrap().0, 0);
        let on_v = PointConfig::from_affine_ints(2, &[vec![1, 0], vec![5, 0], vec![-2, 0]]).unwrap();
        let v = LinSubspace::hyperplane(&ints(&[0, 1, 0])).unwrap();
        let w = LinSubspace::point(&ProjPoint::from_ints(&[0, 1, 1]).unwrap());
        assert_eq!(min_piece_counts(&v, &w, &on_v).unwrap().0, 3);
    }

    #[test]
    fn radon_diagonals() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let diag = PartitionWitness::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap();
        let opts = VerifyOptions::default();
        let cert = verify_tverberg_witness(&v, &center(), &square(), &diag, false, opts).unwrap();
        assert!(cert.verdict.passed());
        let sides = PartitionWitness::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let cert = verify_tverberg_witness(&v, &center(), &square(), &sides, false, opts).unwrap();
        assert!(!cert.verdict.passed());
        let single = PartitionWitness::new(4, vec![vec![0], vec![1, 2, 3]]).unwrap();
        let cert = verify_tverberg_witness(&v, &center(), &square(), &single, false, opts).unwrap();
        assert!(!cert.verdict.passed());
        assert_eq!(cert.failing_part, Some(0));
        let rainbow = verify_tverberg_witness(&v, &center(), &square(), &diag, true, opts);
        assert!(matches!(rainbow, Err(Error::MissingColors)));
    }

    #[test]
    fn strictness_flag() {
        let v = LinSubspace::hyperplane_at_infinity(2);
        let w = LinSubspace::point(&ProjPoint::from_ints(&[1, 0, 0]).unwrap());
        let strict = VerifyOptions { strict_disjoint: true };
        let cert = verify_center_subspace(&v, &w, &square(), 0, strict).unwrap();
        assert!(!cert.verdict.passed());
        assert!(verify_center_subspace(&v, &w, &square(), 0, VerifyOptions::default()).unwrap().verdict.passed());
    }

    #[test]
    fn full_subspace_is_rejected() {
        let full = LinSubspace::full(3);
        assert!(matches!(min_piece_counts(&full, &center(), &square()), Err(Error::FullSubspace)));
    }

    #[test]
    fn masks() {
        let mut m = Mask::empty(70);
        m.set(3);
        m.set(65);
        assert_eq!(m.count(), 2);
        assert!(m.contains(65));
        assert!(Mask::from_indices(70, &[3]).is_subset(&m));
        assert!(!m.is_subset(&Mask::from_indices(70, &[3])));
    }
}
