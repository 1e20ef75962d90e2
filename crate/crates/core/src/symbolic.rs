//! Multivariate integer polynomials built from homogenised cyclotomic
//! factors `Psi_m(u, v) = v^phi(m) Phi_m(u / v)` with monomial arguments.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cycfield::FieldElem;
use crate::cycpoly::cyclotomic;
use crate::error::Result;
use crate::numth::{divisors, mobius, totient};
use crate::unitlattice::FormalProduct;

/// Sparse polynomial in `x_1..x_r` keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn one(nvars: usize) -> Self {
        MPoly {
            terms: BTreeMap::from([(vec![0; nvars], BigInt::one())]),
        }
    }

    fn insert(&mut self, e: Vec<u32>, c: BigInt) {
        match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(e, c);
                }
            }
        }
    }

    pub fn add_scaled(&self, other: &MPoly, k: &BigInt) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `Psi_m(x^u, x^v)` for exponent vectors `u`, `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiFactor {
    pub m: u64,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

impl PsiFactor {
    pub fn new(m: u64, u: &[u32], v: &[u32]) -> Self {
        PsiFactor {
            m,
            u: u.to_vec(),
            v: v.to_vec(),
        }
    }

    pub fn expand(&self) -> MPoly {
        let phi = cyclotomic(self.m);
        let d = totient(self.m) as u32;
        let mut out = MPoly::default();
        for (i, c) in phi.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = i as u32;
            let e = self
                .u
                .iter()
                .zip(&self.v)
                .map(|(a, b)| a * i + b * (d - i))
                .collect();
            out.insert(e, c.clone());
        }
        out
    }

    fn dot(w: &[u32], x: &[i64]) -> i64 {
        w.iter().zip(x).map(|(&a, &b)| a as i64 * b).sum()
    }

    /// Formal value at `x_i = zeta^{x_i}`:
    /// `Psi_m(zeta^p, zeta^q) = zeta^{q phi(m)} Phi_m(zeta^{p-q})`.
    pub fn eval_formal(&self, ell: u64, level: u32, x: &[i64]) -> FormalProduct {
        let p = Self::dot(&self.u, x);
        let q = Self::dot(&self.v, x);
        let mut fp = phi_formal(ell, level, self.m, p - q);
        fp.zeta_exp += q * totient(self.m) as i64;
        fp
    }

    /// Direct field value at `x_i = zeta^{x_i}`.
    pub fn eval_field(&self, ell: u64, level: u32, x: &[i64]) -> Result<FieldElem> {
        let p = Self::dot(&self.u, x);
        let q = Self::dot(&self.v, x);
        let phi = cyclotomic(self.m);
        let d = totient(self.m) as i64;
        let mut acc = FieldElem::zero(ell, level)?;
        for (i, c) in phi.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = i as i64;
            let term = FieldElem::zeta_pow(ell, level, p * i + q * (d - i))?
                .scale(&num_rational::BigRational::from_integer(c.clone()));
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

/// `Phi_m(zeta^s) = (-1)^[m = 1] prod_{d | m} (1 - zeta^{s d})^{mu(m/d)}` as a formal product.
pub fn phi_formal(ell: u64, level: u32, m: u64, s: i64) -> FormalProduct {
    let factors = divisors(m)
        .into_iter()
        .filter_map(|d| {
            let mu = mobius(m / d);
            (mu != 0).then_some((s * d as i64, mu as i64))
        })
        .collect();
    FormalProduct {
        ell,
        level,
        sign: if m == 1 { -1 } else { 1 },
        zeta_exp: 0,
        factors,
    }
}

/// A product `prod Psi^e` of homogenised cyclotomic factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiProduct {
    pub nvars: usize,
    pub factors: Vec<(PsiFactor, u32)>,
}

impl PsiProduct {
    pub fn expand(&self) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for (f, e) in &self.factors {
            let p = f.expand();
            for _ in 0..*e {
                acc = acc.mul(&p);
            }
        }
        acc
    }

    pub fn eval_formal(&self, ell: u64, level: u32, x: &[i64]) -> FormalProduct {
        let mut acc = FormalProduct::new(ell, level, Vec::new());
        for (f, e) in &self.factors {
            let v = f.eval_formal(ell, level, x);
            for _ in 0..*e {
                acc = acc.mul(&v);
            }
        }
        acc
    }

    pub fn eval_field(&self, ell: u64, level: u32, x: &[i64]) -> Result<FieldElem> {
        let mut acc = FieldElem::one(ell, level)?;
        for (f, e) in &self.factors {
            let v = f.eval_field(ell, level, x)?.pow(*e as i64)?;
            acc = &acc * &v;
        }
        Ok(acc)
    }

    /// Image under the variable permutation `x_i -> x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> PsiProduct {
        let move_vec = |w: &[u32]| {
            let mut out = vec![0; w.len()];
            for (i, &c) in w.iter().enumerate() {
                out[perm[i]] = c;
            }
            out
        };
        PsiProduct {
            nvars: self.nvars,
            factors: self
                .factors
                .iter()
                .map(|(f, e)| {
                    (
                        PsiFactor {
                            m: f.m,
                            u: move_vec(&f.u),
                            v: move_vec(&f.v),
                        },
                        *e,
                    )
                })
                .collect(),
        }
    }
}

/// Symbolic identity `F - G = k H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiIdentity {
    pub f: PsiProduct,
    pub g: PsiProduct,
    pub h: PsiProduct,
    pub k: i64,
}

impl PsiIdentity {
    pub fn holds(&self) -> bool {
        let lhs = self.f.expand().add_scaled(&self.g.expand(), &BigInt::from(-1));
        let diff = lhs.add_scaled(&self.h.expand(), &BigInt::from(-self.k));
        diff.is_zero()
    }

    /// Whether `F`, `G` and `H` are each unchanged, as polynomials, by the cycle
    /// `x_1 -> x_2 -> ... -> x_r -> x_1`.
    pub fn cyclically_invariant(&self) -> bool {
        let r = self.f.nvars;
        let perm: Vec<usize> = (0..r).map(|i| (i + 1) % r).collect();
        [&self.f, &self.g, &self.h]
            .iter()
            .all(|p| p.permute(&perm).expand() == p.expand())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_expansion_matches_hand_forms() {
        // Psi_6(x1, x2) = x1^2 - x1 x2 + x2^2
        let p = PsiFactor::new(6, &[1, 0], &[0, 1]).expand();
        assert_eq!(p.terms.len(), 3);
        assert_eq!(p.terms[&vec![1, 1]], BigInt::from(-1));
        // Psi_1(x1 x2, x3^2) = x1 x2 - x3^2
        let q = PsiFactor::new(1, &[1, 1, 0], &[0, 0, 2]).expand();
        assert_eq!(q.terms[&vec![1, 1, 0]], BigInt::one());
        assert_eq!(q.terms[&vec![0, 0, 2]], BigInt::from(-1));
    }

    #[test]
    fn formal_and_direct_evaluation_agree() {
        for (m, u, v) in [(1u64, [1u32, 0], [0u32, 1]), (2, [2, 1], [0, 3]), (6, [1, 1], [3, 0])] {
            let f = PsiFactor::new(m, &u, &v);
            let x = [1i64, 7];
            let formal = f.eval_formal(5, 2, &x).evaluate().unwrap();
            assert_eq!(formal, f.eval_field(5, 2, &x).unwrap(), "m = {m}");
        }
    }
}
