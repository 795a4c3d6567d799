use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Polynomial over the two-element field. Monomials are exponent vectors,
/// ordered lexicographically with `e_1` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Poly {
    nvars: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl F2Poly {
    pub fn zero(nvars: usize) -> Self {
        F2Poly { nvars, terms: BTreeSet::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars])
    }

    pub fn monomial(exps: Vec<u32>) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeSet::new();
        terms.insert(exps);
        F2Poly { nvars, terms }
    }

    /// The variable `e_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for t in terms {
            Error::check_len(nvars, t.len())?;
            p.toggle(t);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Vec<u32>> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.iter().sum()).max()
    }

    pub fn leading(&self) -> Option<&Vec<u32>> {
        self.terms.last()
    }

    pub(crate) fn toggle(&mut self, m: Vec<u32>) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms = self.terms.symmetric_difference(&other.terms).cloned().collect();
        F2Poly { nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &[u32]) -> Self {
        let terms = self.terms.iter().map(|t| t.iter().zip(m).map(|(x, y)| x + y).collect()).collect();
        F2Poly { nvars: self.nvars, terms }
    }

    /// Squaring is additive in characteristic two, so it only doubles exponents.
    pub fn square(&self) -> Self {
        let terms = self.terms.iter().map(|t| t.iter().map(|x| 2 * x).collect()).collect();
        F2Poly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Complete homogeneous symmetric polynomial of degree `k` in the
    /// variables listed.
    pub fn complete_homogeneous(nvars: usize, vars: &[usize], k: u32) -> Self {
        let mut out = Self::zero(nvars);
        let mut exps = vec![0u32; nvars];
        fn rec(vars: &[usize], left: u32, exps: &mut Vec<u32>, out: &mut F2Poly) {
            match vars.split_first() {
                None => {
                    if left == 0 {
                        out.toggle(exps.clone());
                    }
                }
                Some((&v, rest)) => {
                    for e in 0..=left {
                        exps[v] = e;
                        rec(rest, left - e, exps, out);
                    }
                    exps[v] = 0;
                }
            }
        }
        rec(vars, k, &mut exps, &mut out);
        out
    }

    /// Elementary symmetric polynomial of degree `k` in all variables.
    pub fn elementary(nvars: usize, k: usize) -> Self {
        let mut out = Self::zero(nvars);
        for subset in itertools::Itertools::combinations(0..nvars, k) {
            let mut e = vec![0; nvars];
            for i in subset {
                e[i] = 1;
            }
            out.toggle(e);
        }
        out
    }
}

impl fmt::Display for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for t in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let factors: Vec<String> = t
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("e{}", i + 1) } else { format!("e{}^{}", i + 1, e) })
                .collect();
            if factors.is_empty() {
                f.write_str("1")?;
            } else {
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_characteristic_two() {
        let x = F2Poly::var(2, 0);
        let y = F2Poly::var(2, 1);
        let s = x.add(&y);
        assert_eq!(s.add(&s), F2Poly::zero(2));
        // (x + y)^2 = x^2 + y^2
        assert_eq!(s.pow(2), x.pow(2).add(&y.pow(2)));
        assert_eq!(s.pow(3).len(), 4);
        assert_eq!(s.pow(3), s.mul(&s).mul(&s));
        assert_eq!(format!("{}", s), "e1 + e2");
        assert_eq!(F2Poly::complete_homogeneous(3, &[1, 2], 2).len(), 3);
        assert_eq!(F2Poly::elementary(4, 2).len(), 6);
    }
}
