//! Arithmetic and mod 2 cohomological conditions that gate the existence
//! results: sizes, partition counts, Euler characteristics of Grassmannians,
//! Kummer's digit test and nonvanishing in the flag manifold cohomology.

mod coinvariant;
mod f2poly;

pub use coinvariant::{coinvariant_reduce, CoinvariantRing};
pub use f2poly::F2Poly;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `ceil(n / ((d - v)(v + 1) + 1))`.
pub fn tverberg_r(n: usize, d: usize, v: usize) -> Result<usize> {
    if v >= d {
        return Err(Error::InvalidArgument(format!("need v < d, got v = {v}, d = {d}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    Ok(n.div_ceil((d - v) * (v + 1) + 1))
}

/// `(D + 1)(r - 1) + 1`.
pub fn required_points(big_d: usize, r: usize) -> usize {
    (big_d + 1) * r.saturating_sub(1) + 1
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// `1/(r-1)! * (r/(l+1))^ceil((r-1)(d+1)/2)` with `r = p^l`.
pub fn partition_count_lower_bound(p: u64, l: u32, d: u32) -> Result<Scalar> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if l == 0 || d == 0 {
        return Err(Error::InvalidArgument("need l >= 1 and d >= 1".into()));
    }
    let r = BigInt::from(p).pow(l);
    let mut fact = BigInt::one();
    let mut k = BigInt::one();
    while k < r {
        fact *= &k;
        k += 1;
    }
    let base = Scalar::new(r.clone(), BigInt::from(l + 1));
    let exp = ((&r - 1u32) * BigInt::from(d + 1) + 1u32) / 2u32;
    let exp: u32 = exp.try_into().map_err(|_| Error::TooLarge("exponent".into()))?;
    Ok(num_traits::pow(base, exp as usize) / Scalar::from_integer(fact))
}

/// Gaussian binomial `[n choose k]_q` at `q = -1`.
pub fn q_binomial_minus1(n: u32, k: u32) -> Result<i128> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    // rows of the recursion [n,k] = [n-1,k-1] + (-1)^k [n-1,k]
    let mut row = vec![1i128];
    for m in 1..=n as usize {
        let mut next = vec![0i128; m + 1];
        next[0] = 1;
        next[m] = 1;
        for j in 1..m {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            next[j] = row[j - 1] + sign * row[j];
        }
        row = next;
    }
    Ok(row[k as usize])
}

/// Euler characteristic of the real Grassmannian of `kplus1`-planes in
/// `R^{nplus1}`.
pub fn euler_char_grassmannian(nplus1: u32, kplus1: u32) -> Result<i128> {
    q_binomial_minus1(nplus1, kplus1)
}

fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Whether `C(n, k)` is nonzero mod `p`: every base `p` digit of `k` is at
/// most the matching digit of `n`.
pub fn kummer_nonzero_mod_p(n: u64, k: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let dn = digits(n, p);
    let dk = digits(k, p);
    Ok(dk.iter().enumerate().all(|(i, &x)| x <= dn.get(i).copied().unwrap_or(0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMethod {
    ClosedForm,
    Cohomology,
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateResult {
    pub name: String,
    pub holds: bool,
    pub method: GateMethod,
    pub explanation: String,
    /// Independent confirmation by a cohomology computation, when one ran.
    pub confirmed: Option<bool>,
    /// Reduced class, when a cohomology computation ran.
    pub reduced: Option<String>,
    pub warnings: Vec<String>,
}

/// `D = (v+1)(d-v)` even and `C(floor((d+1)/2), floor((v+1)/2))` nonzero mod `p`.
pub fn thm6_condition(d: u32, v: u32, p: u64) -> Result<GateResult> {
    if v >= d {
        return Err(Error::InvalidArgument(format!("need v < d, got v = {v}, d = {d}")));
    }
    let big_d = (v + 1) * (d - v);
    let (n, k) = (((d + 1) / 2) as u64, ((v + 1) / 2) as u64);
    let kummer = kummer_nonzero_mod_p(n, k, p)?;
    let euler = euler_char_grassmannian(d + 1, v + 1)?;
    let holds = big_d % 2 == 0 && kummer;
    let explanation = if big_d % 2 == 1 {
        format!("D = {big_d} is odd")
    } else if kummer {
        format!("D = {big_d} is even and C({n},{k}) is nonzero mod {p}")
    } else {
        format!("D = {big_d} is even but C({n},{k}) vanishes mod {p}")
    };
    let mut warnings = Vec::new();
    let euler_nonzero = euler.rem_euclid(p as i128) != 0;
    if euler_nonzero != holds {
        warnings.push(format!("Euler characteristic {euler} disagrees with the closed form mod {p}"));
    }
    Ok(GateResult {
        name: "both_free".into(),
        holds,
        method: GateMethod::ClosedForm,
        explanation: format!("{explanation}; Euler characteristic of G({},{}) is {euler}", d + 1, v + 1),
        confirmed: Some(euler_nonzero),
        reduced: None,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagResult {
    pub holds: bool,
    pub reduced: F2Poly,
    pub degree: u32,
}

/// Nonvanishing of `prod (e_i + e_j)^(m-1)`, `i <= d-v < j <= (d-v)+(d-w)`,
/// in the mod 2 cohomology of the complete flag manifold of `R^{d+1}`.
pub fn flag_condition(d: u32, v: u32, w: u32, m: u32) -> Result<FlagResult> {
    if v >= d || w >= d || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need v, w < d and m >= 1, got d = {d}, v = {v}, w = {w}, m = {m}"
        )));
    }
    let n = (d + 1) as usize;
    let (vh, wh) = ((d - v) as usize, (d - w) as usize);
    if vh + wh > n {
        return Err(Error::InvalidArgument(format!(
            "(d-v) + (d-w) = {} exceeds d + 1 = {n}",
            vh + wh
        )));
    }
    let ring = CoinvariantRing::new(n);
    let degree = (vh * wh) as u32 * (m - 1);
    if degree > ring.top_degree() {
        return Ok(FlagResult { holds: false, reduced: F2Poly::zero(n), degree });
    }
    let mut class = F2Poly::one(n);
    for _ in 0..m - 1 {
        for i in 0..vh {
            for j in vh..vh + wh {
                let factor = F2Poly::var(n, i).add(&F2Poly::var(n, j));
                class = ring.mul(&class, &factor);
                if class.is_zero() {
                    return Ok(FlagResult { holds: false, reduced: class, degree });
                }
            }
        }
    }
    Ok(FlagResult { holds: !class.is_zero(), reduced: class, degree })
}

/// `(e_1 ... e_k)^exponent` in the flag ring of `R^n`; the pullback of a
/// power of the top Stiefel-Whitney class of the tautological bundle over
/// the Grassmannian of `k`-planes in `R^n`.
pub fn grassmannian_top_power(n: usize, k: usize, exponent: u32) -> F2Poly {
    let ring = CoinvariantRing::new(n);
    let mut e = vec![0u32; n];
    for x in e.iter_mut().take(k) {
        *x = 1;
    }
    let wk = coinvariant_reduce(&F2Poly::monomial(e), &ring).expect("arity matches");
    ring.pow(&wk, exponent)
}

/// The Euler class condition for the transversal theorem.
pub fn thm4_condition(d: u32, v: u32, w: u32, m: u32, p: u64) -> Result<GateResult> {
    if v >= d || w >= d || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need v, w < d and m >= 1, got d = {d}, v = {v}, w = {w}, m = {m}"
        )));
    }
    let mut warnings = Vec::new();
    if w + 1 != m * (d - v) {
        warnings.push(format!("w = {w} differs from m(d-v)-1 = {}", m * (d - v) - 1));
    }
    let k = (d - w) as usize;
    let exponent = (d - v) * (m - 1);
    let mut result = GateResult {
        name: "transversal".into(),
        holds: false,
        method: GateMethod::ClosedForm,
        explanation: String::new(),
        confirmed: None,
        reduced: None,
        warnings,
    };
    if m == 1 {
        result.holds = true;
        result.explanation = "m = 1: the base is a point".into();
        return Ok(result);
    }
    if p == 2 {
        result.holds = true;
        result.explanation = "p = 2".into();
        if k <= (v + 1) as usize {
            let class = grassmannian_top_power((v + 1) as usize, k, exponent);
            result.method = GateMethod::Cohomology;
            result.confirmed = Some(!class.is_zero());
            result.reduced = Some(class.to_string());
            result.explanation = format!(
                "p = 2; w_{k}(γ)^{exponent} over G({k}, {}) reduces to {}",
                v + 1,
                result.reduced.as_deref().unwrap_or("0")
            );
        } else {
            result.warnings.push(format!("d - w = {k} exceeds v + 1; the base is empty"));
        }
        return Ok(result);
    }
    if !is_prime(p) {
        result.method = GateMethod::Unverified;
        result.explanation = format!("{p} is not a prime");
        return Ok(result);
    }
    if k % 2 == 0 {
        result.holds = true;
        result.explanation = format!("d - w = {k} is even");
        return Ok(result);
    }
    result.method = GateMethod::Unverified;
    result.explanation = format!("p = {p} odd, m = {m} > 1 and d - w = {k} odd: no sufficient condition applies");
    Ok(result)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
