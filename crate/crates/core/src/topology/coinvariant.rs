use crate::error::{Error, Result};

use super::f2poly::F2Poly;

/// `F_2[e_1, .., e_n]` modulo all symmetric polynomials of positive degree.
///
/// Division uses `g_i = h_i(e_i, .., e_n)` for `i = 1..n`, which under lex
/// order with `e_1 > .. > e_n` is a Gröbner basis with leading terms `e_i^i`.
/// Normal forms therefore have exponent of `e_i` at most `i - 1`.
#[derive(Clone, Debug)]
pub struct CoinvariantRing {
    n: usize,
    basis: Vec<F2Poly>,
}

impl CoinvariantRing {
    pub fn new(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let vars: Vec<usize> = (i..n).collect();
                F2Poly::complete_homogeneous(n, &vars, (i + 1) as u32)
            })
            .collect();
        CoinvariantRing { n, basis }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn reduction_basis(&self) -> &[F2Poly] {
        &self.basis
    }

    /// Top degree of the quotient, `n(n-1)/2`.
    pub fn top_degree(&self) -> u32 {
        (self.n * self.n.saturating_sub(1) / 2) as u32
    }

    fn reducer(&self, m: &[u32]) -> Option<usize> {
        (0..self.n).find(|&i| m[i] > i as u32)
    }

    pub fn is_standard(&self, m: &[u32]) -> bool {
        self.reducer(m).is_none()
    }

    /// Standard monomials, i.e. a vector space basis of the quotient.
    pub fn standard_monomials(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0u32; self.n]];
        for i in 0..self.n {
            let mut next = Vec::new();
            for m in &out {
                for e in 0..=i as u32 {
                    let mut m2 = m.clone();
                    m2[i] = e;
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }

    pub fn mul(&self, a: &F2Poly, b: &F2Poly) -> F2Poly {
        let mut out = F2Poly::zero(self.n);
        for x in a.terms() {
            for y in b.terms() {
                let m: Vec<u32> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                if m.iter().sum::<u32>() <= self.top_degree() {
                    out.toggle(m);
                }
            }
        }
        self.reduce_unchecked(out)
    }

    pub fn pow(&self, a: &F2Poly, k: u32) -> F2Poly {
        let mut result = F2Poly::one(self.n);
        for _ in 0..k {
            result = self.mul(&result, a);
            if result.is_zero() {
                break;
            }
        }
        result
    }

    fn reduce_unchecked(&self, p: F2Poly) -> F2Poly {
        // monomials above the top degree lie in the ideal
        let top = self.top_degree();
        let mut p = F2Poly::from_terms(self.n, p.terms().filter(|t| t.iter().sum::<u32>() <= top).cloned())
            .expect("same arity");
        loop {
            // largest reducible monomial; everything above it is standard
            let Some((m, i)) = p
                .terms()
                .rev()
                .find_map(|m| self.reducer(m).map(|i| (m.clone(), i)))
            else {
                return p;
            };
            let mut cofactor = m;
            cofactor[i] -= i as u32 + 1;
            for t in self.basis[i].mul_monomial(&cofactor).terms() {
                p.toggle(t.clone());
            }
        }
    }
}

/// Normal form of `poly` in the coinvariant ring.
pub fn coinvariant_reduce(poly: &F2Poly, ring: &CoinvariantRing) -> Result<F2Poly> {
    Error::check_len(ring.nvars(), poly.nvars())?;
    Ok(ring.reduce_unchecked(poly.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_variables() {
        let ring = CoinvariantRing::new(2);
        let e1 = F2Poly::var(2, 0);
        let e2 = F2Poly::var(2, 1);
        assert!(coinvariant_reduce(&e1.add(&e2), &ring).unwrap().is_zero());
        assert!(coinvariant_reduce(&e1.pow(2), &ring).unwrap().is_zero());
        assert_eq!(coinvariant_reduce(&e1, &ring).unwrap(), e2);
    }

    #[test]
    fn three_variables() {
        let ring = CoinvariantRing::new(3);
        let prod = F2Poly::monomial(vec![1, 1, 1]);
        assert!(coinvariant_reduce(&prod, &ring).unwrap().is_zero());
        let std = F2Poly::monomial(vec![0, 1, 2]);
        assert_eq!(coinvariant_reduce(&std, &ring).unwrap(), std);
        assert_eq!(ring.standard_monomials().len(), 6);
        let e1 = F2Poly::var(3, 0);
        let e2 = F2Poly::var(3, 1);
        assert_eq!(coinvariant_reduce(&e1.add(&e2), &ring).unwrap(), F2Poly::var(3, 2));
    }

    #[test]
    fn wrong_arity() {
        let ring = CoinvariantRing::new(3);
        assert!(coinvariant_reduce(&F2Poly::var(2, 0), &ring).is_err());
    }
}
