//! Finite-sample demonstration for probability measures. Samples are drawn
//! with a seeded generator, rounded to a grid of `1/1000` and handed to the
//! exact center searches. The result describes the sample only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::centerpoint::{search_center_subspace, SearchConfig};
use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig};
use crate::pieces::Certificate;
use crate::scalar::{frac, Scalar};
use crate::tverberg::search_center_transversal;

pub const DEFAULT_SAMPLE_CAP: usize = 5000;
pub const SAMPLE_CAP_ENV: &str = "PROJTVERBERG_MAX_SAMPLES";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Density {
    /// Uniform on the box `[low, high]` of the affine chart.
    Uniform { low: Vec<f64>, high: Vec<f64> },
    /// Axis-aligned normal distribution.
    Gaussian { mean: Vec<f64>, std: Vec<f64> },
    Mixture { weights: Vec<f64>, components: Vec<Density> },
    /// Atoms at the given locations, equally likely unless weighted.
    PointMass {
        locations: Vec<Vec<f64>>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
    },
}

impl Density {
    pub fn unit_box(d: usize) -> Self {
        Density::Uniform { low: vec![0.0; d], high: vec![1.0; d] }
    }

    pub fn check(&self, d: usize) -> Result<()> {
        let bad = |m: String| Err(Error::parse("measure", m));
        match self {
            Density::Uniform { low, high } => {
                if low.len() != d || high.len() != d {
                    return bad(format!("uniform box needs {d} coordinates"));
                }
                if low.iter().zip(high).any(|(a, b)| !(a < b)) {
                    return bad("uniform box needs low < high".into());
                }
            }
            Density::Gaussian { mean, std } => {
                if mean.len() != d || std.len() != d {
                    return bad(format!("gaussian needs {d} coordinates"));
                }
                if std.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return bad("gaussian needs positive deviations".into());
                }
            }
            Density::Mixture { weights, components } => {
                if weights.len() != components.len() || components.is_empty() {
                    return bad("mixture needs one weight per component".into());
                }
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || weights.iter().sum::<f64>() <= 0.0 {
                    return bad("mixture weights must be nonnegative and not all zero".into());
                }
                for c in components {
                    c.check(d)?;
                }
            }
            Density::PointMass { locations, weights } => {
                if locations.is_empty() || locations.iter().any(|l| l.len() != d) {
                    return bad(format!("point masses need locations with {d} coordinates"));
                }
                if let Some(w) = weights {
                    if w.len() != locations.len() || w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                        return bad("point mass weights must match the locations".into());
                    }
                }
            }
        }
        Ok(())
    }

    fn pick(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
        let total: f64 = weights.iter().sum();
        let mut t = rng.random::<f64>() * total;
        for (i, w) in weights.iter().enumerate() {
            if t < *w {
                return i;
            }
            t -= w;
        }
        weights.len() - 1
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            Density::Uniform { low, high } => low.iter().zip(high).map(|(a, b)| rng.random_range(*a..*b)).collect(),
            Density::Gaussian { mean, std } => mean
                .iter()
                .zip(std)
                .map(|(m, s)| Normal::new(*m, *s).expect("checked deviation").sample(rng))
                .collect(),
            Density::Mixture { weights, components } => components[Self::pick(weights, rng)].sample(rng),
            Density::PointMass { locations, weights } => {
                let i = match weights {
                    Some(w) => Self::pick(w, rng),
                    None => rng.random_range(0..locations.len()),
                };
                locations[i].clone()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    /// One density per measure.
    pub densities: Vec<Density>,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoSummary {
    pub label: String,
    pub samples: usize,
    /// Smallest piece fraction per measure.
    pub fractions: Vec<f64>,
    pub bound: f64,
    pub gap: f64,
}

pub struct DemoOutcome {
    pub summary: DemoSummary,
    pub v: LinSubspace,
    pub w: LinSubspace,
    pub configs: Vec<(PointConfig, usize)>,
    pub certificates: Vec<Certificate>,
}

pub fn sample_cap() -> usize {
    std::env::var(SAMPLE_CAP_ENV).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SAMPLE_CAP)
}

fn round_to_grid(x: f64) -> Scalar {
    frac((x * 1000.0).round() as i64, 1000)
}

/// Samples every measure, searches `W` and reports the smallest piece
/// fractions against `1/(D+1)`.
pub fn demo_measure(spec: &MeasureSpec, d: usize, v_dim: usize, seed: u64, cfg: &SearchConfig) -> Result<DemoOutcome> {
    if v_dim >= d {
        return Err(Error::InvalidArgument(format!("need v < d, got v = {v_dim}, d = {d}")));
    }
    let cap = sample_cap();
    if spec.samples > cap {
        return Err(Error::TooLarge(format!("{} samples exceed the cap {cap}", spec.samples)));
    }
    if spec.samples == 0 || spec.densities.is_empty() {
        return Err(Error::parse("measure", "need at least one density and one sample"));
    }
    for dens in &spec.densities {
        dens.check(d)?;
    }
    let m = spec.densities.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut configs = Vec::with_capacity(m);
    for dens in &spec.densities {
        let pts: Vec<Vec<Scalar>> =
            (0..spec.samples).map(|_| dens.sample(&mut rng).into_iter().map(round_to_grid).collect()).collect();
        configs.push(PointConfig::from_affine(d, &pts)?);
    }
    // coordinate directions at infinity; the line at infinity when v = d - 1
    let rows: Vec<Vec<Scalar>> = (0..=v_dim)
        .map(|i| (0..=d).map(|k| if k == i { frac(1, 1) } else { frac(0, 1) }).collect())
        .collect();
    let v = LinSubspace::span(d + 1, &rows)?;
    let n = spec.samples;
    let (w, certificates, big_d) = if m == 1 {
        let big_d = (d - v_dim) * (v_dim + 1);
        let r = n.div_ceil(big_d + 1);
        let out = search_center_subspace(&v, &configs[0], r, cfg)?;
        (out.w, vec![out.certificate], big_d)
    } else {
        let w_dim = m * (d - v_dim) - 1;
        if w_dim >= d {
            return Err(Error::InvalidArgument(format!("m(d-v)-1 = {w_dim} must be below d = {d}")));
        }
        let big_d = (d - v_dim) * (d - w_dim);
        let r = n.div_ceil(big_d + 1);
        let pairs: Vec<(PointConfig, usize)> = configs.iter().map(|x| (x.clone(), r)).collect();
        let out = search_center_transversal(&v, &pairs, w_dim, cfg)?;
        (out.w, out.certificates, big_d)
    };
    let fractions: Vec<f64> = certificates.iter().map(|c| c.min_count as f64 / n as f64).collect();
    let bound = 1.0 / (big_d + 1) as f64;
    let worst = fractions.iter().cloned().fold(f64::INFINITY, f64::min);
    let summary = DemoSummary {
        label: "demonstration on a finite sample; not a certificate about the continuous measure".into(),
        samples: n,
        fractions,
        bound,
        gap: worst - bound,
    };
    let r = certificates.first().map_or(0, |c| c.threshold);
    let configs = configs.into_iter().map(|x| (x, r)).collect();
    Ok(DemoOutcome { summary, v, w, configs, certificates })
}
