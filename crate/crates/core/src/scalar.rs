//! Exact rational scalars and the three-valued sign used by every
//! combinatorial certificate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator (guaranteed by `BigRational`).
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn ints(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a scaled division.
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rationalize(x: f64, max_den: u64) -> Scalar {
    if !x.is_finite() {
        return Scalar::zero();
    }
    let max_den = BigInt::from(max_den.max(1));
    let neg = x < 0.0;
    let mut rest = x.abs();
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = rest.floor();
        let a_big = BigInt::from(a as u64);
        let p2 = &a_big * &p1 + &p0;
        let q2 = &a_big * &q1 + &q0;
        if q2 > max_den {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let f = rest - a;
        if f < 1e-15 {
            break;
        }
        rest = 1.0 / f;
        if rest > 1e18 {
            break;
        }
    }
    if q1.is_zero() {
        // Only happens when x itself exceeds every admissible convergent.
        return Scalar::from_integer(BigInt::from(x.round() as i64));
    }
    let r = Scalar::new(p1, q1);
    if neg {
        -r
    } else {
        r
    }
}

/// Parses an integer, a `p/q` fraction or a finite decimal string exactly.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let bad = || Error::parse("number", format!("malformed number '{text}'"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::parse("number", format!("zero denominator in '{text}'")));
        }
        return Ok(Scalar::new(n, d));
    }
    if let Some((whole, decimals)) = t.split_once('.') {
        if decimals.is_empty() || !decimals.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{decimals}");
        let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        let d = num_traits::pow(BigInt::from(10), decimals.len());
        let r = Scalar::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Scalar::from_integer(n))
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_vec(v: &[Scalar]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

/// Scales a nonzero vector to coprime integers with first nonzero entry positive.
pub fn primitive_integer_vector(v: &[Scalar]) -> Vec<Scalar> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    ints.into_iter().map(Scalar::from_integer).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: &Scalar) -> Sign {
        if x.is_positive() {
            Sign::Pos
        } else if x.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn of_f64(x: f64, tol: f64) -> Sign {
        if x > tol {
            Sign::Pos
        } else if x < -tol {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn from_i8(v: i8) -> Sign {
        match v.signum() {
            -1 => Sign::Neg,
            0 => Sign::Zero,
            _ => Sign::Pos,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * other.as_i8())
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_scalar("2/3").unwrap(), frac(2, 3));
        assert_eq!(parse_scalar("-4/6").unwrap(), frac(-2, 3));
        assert_eq!(parse_scalar("17").unwrap(), int(17));
        assert_eq!(parse_scalar("-0.25").unwrap(), frac(-1, 4));
        assert_eq!(parse_scalar("1.5").unwrap(), frac(3, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1.").is_err());
    }

    #[test]
    fn format_roundtrip() {
        for s in ["0", "-3", "5/7", "-11/2"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
    }

    #[test]
    fn rationalize_respects_bound() {
        let pi = rationalize(std::f64::consts::PI, 1000);
        assert_eq!(pi, frac(355, 113));
        assert_eq!(rationalize(0.5, 10), frac(1, 2));
        assert_eq!(rationalize(-0.75, 10), frac(-3, 4));
        assert_eq!(rationalize(3.0, 1), int(3));
        let x = rationalize(0.123456789, 1_000_000);
        assert!(*x.denom() <= BigInt::from(1_000_000));
        assert!((to_f64(&x) - 0.123456789).abs() < 1e-6);
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[frac(-1, 2), int(1), int(0)]);
        assert_eq!(v, ints(&[1, -2, 0]));
        let v = primitive_integer_vector(&ints(&[0, 4, 6]));
        assert_eq!(v, ints(&[0, 2, 3]));
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Pos.times(Sign::Neg), Sign::Neg);
        assert_eq!(Sign::Neg.times(Sign::Neg), Sign::Pos);
        assert_eq!(Sign::Zero.times(Sign::Neg), Sign::Zero);
        assert_eq!(Sign::of(&frac(-1, 9)), Sign::Neg);
        assert_eq!(Sign::Pos.flip(), Sign::Neg);
    }
}
