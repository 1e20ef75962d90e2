//! Elementary scans: inertia of small primes, safe primes with 2 primitive,
//! the residue-avoidance count, a totient lower bound, and irreducibility of
//! the cyclic F_2-module of dimension p - 1.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{is_prime, mod_pow, teichmuller_lift, totient};

pub use crate::numth::order_mod;

/// Whether `p` stays inert in the cyclotomic Z_ell-extension: `p^(ell-1) != 1 mod ell^2`.
pub fn is_inert(p: u64, ell: u64) -> Result<bool> {
    for q in [p, ell] {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
    }
    if p == ell {
        return Err(Error::Precondition(format!("p = ell = {p}")));
    }
    let sq = ell * ell;
    Ok(mod_pow(p % sq, ell - 1, sq) != 1)
}

/// Primes `11 <= ell <= max` with `ell = 2p + 1`, `p` an odd prime and 2 primitive mod `p`.
pub fn safe_prime_scan(max: u64) -> Vec<u64> {
    (11..=max)
        .into_par_iter()
        .filter(|&ell| is_safe_prime_with_two_primitive(ell))
        .collect()
}

pub fn is_safe_prime_with_two_primitive(ell: u64) -> bool {
    if ell < 7 || !is_prime(ell) {
        return false;
    }
    let p = (ell - 1) / 2;
    p % 2 == 1 && is_prime(p) && order_mod(2, p) == Ok(p - 1)
}

/// Zero and the fourteen signed values `1 + a^2` must avoid modulo `ell`.
fn forbidden(a: u64, ell: u64) -> [u64; 15] {
    let m = |x: u64| x % ell;
    let (a2, a3) = (m(a * a), m(m(a * a) * a));
    let base = [
        m(1 + ell - a2),
        m(a + a3),
        m(a + ell - a3),
        m(1 + a3),
        m(1 + ell - a3),
        m(a + a2),
        m(a + ell - a2),
    ];
    let mut out = [0u64; 15];
    for (i, &b) in base.iter().enumerate() {
        out[1 + 2 * i] = b;
        out[2 + 2 * i] = (ell - b) % ell;
    }
    out
}

fn fails_avoidance(a: u64, ell: u64) -> bool {
    let lhs = (1 + a * a) % ell;
    forbidden(a, ell).contains(&lhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountLemma {
    pub ell: u64,
    /// Residues of order `ell - 1` mod `ell` avoiding every forbidden value.
    pub valid: Vec<u64>,
    /// Residues in `F_ell` (including 0) hitting at least one forbidden value.
    pub bad_count: usize,
}

impl CountLemma {
    pub fn passes(&self) -> bool {
        !self.valid.is_empty() && self.bad_count <= 37
    }
}

pub fn count_lemma_check(ell: u64) -> Result<CountLemma> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell < 11 {
        return Err(Error::Precondition(format!("ell = {ell} < 11")));
    }
    let bad_count = (0..ell).filter(|&a| fails_avoidance(a, ell)).count();
    let valid = (1..ell)
        .filter(|&a| order_mod(a as i64, ell) == Ok(ell - 1) && !fails_avoidance(a, ell))
        .collect();
    Ok(CountLemma {
        ell,
        valid,
        bad_count,
    })
}

/// `count_lemma_check` for every prime in `[lo, hi]`.
pub fn count_lemma_scan(lo: u64, hi: u64) -> Result<Vec<CountLemma>> {
    (lo.max(11)..=hi)
        .into_par_iter()
        .filter(|&l| is_prime(l))
        .map(count_lemma_check)
        .collect()
}

/// Smallest valid residue, lifted to the order-(ell-1) element of `(Z/ell^n)^x`.
pub fn count_lemma_pick(ell: u64, n: u32) -> Result<u64> {
    let c = count_lemma_check(ell)?;
    let a = *c
        .valid
        .first()
        .ok_or_else(|| Error::Precondition(format!("no valid residue for ell = {ell}")))?;
    Ok(teichmuller_lift(a, ell, n))
}

/// Exponent pair with `NUM / DEN < log 3 / log 2`, so `phi^NUM > n^DEN`
/// certifies `phi > n^(log 2 / log 3)`.
pub const TOTIENT_EXP_NUM: u32 = 198;
pub const TOTIENT_EXP_DEN: u32 = 125;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotientBound {
    pub lo: u64,
    pub hi: u64,
    pub holds: bool,
    /// Every `n` in range where the certified comparison fails.
    pub failures: Vec<u64>,
}

/// Exact check of `phi(n)^198 > n^125` on `[lo, hi]`.
pub fn totient_bound_check(lo: u64, hi: u64) -> Result<TotientBound> {
    if lo < 30 {
        return Err(Error::Precondition(format!("lo = {lo} < 30")));
    }
    let failures: Vec<u64> = (lo..=hi)
        .into_par_iter()
        .filter(|&n| {
            let lhs = BigUint::from(totient(n)).pow(TOTIENT_EXP_NUM);
            let rhs = BigUint::from(n).pow(TOTIENT_EXP_DEN);
            lhs <= rhs
        })
        .collect();
    Ok(TotientBound {
        lo,
        hi,
        holds: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleIrreducibility {
    pub p: u64,
    /// `2` generates `F_p^x`.
    pub criterion: bool,
    pub oracle: Option<ModuleOracle>,
}

impl ModuleIrreducibility {
    pub fn agrees(&self) -> bool {
        self.oracle
            .as_ref()
            .is_none_or(|o| o.action_free && o.irreducible == self.criterion)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleOracle {
    pub dim: u32,
    /// No nonzero vector is fixed by multiplication by `x`.
    pub action_free: bool,
    pub irreducible: bool,
    /// Basis bitmasks of a proper nonzero submodule, when one exists.
    pub proper_submodule: Option<Vec<u32>>,
}

/// Multiplication by `x` on `F_2[x] / (1 + x + ... + x^(p-1))`, vectors as bitmasks.
fn times_x(v: u32, p: u32) -> u32 {
    let top = 1u32 << (p - 2);
    let shifted = (v & !top) << 1;
    if v & top != 0 {
        shifted ^ ((1u32 << (p - 1)) - 1)
    } else {
        shifted
    }
}

/// Reduced row basis of the span of `vs` over F_2.
fn span_basis(vs: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vs {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

fn module_oracle(p: u32) -> ModuleOracle {
    let dim = p - 1;
    let mut action_free = true;
    let mut proper = None;
    for v in 1u32..(1 << dim) {
        if times_x(v, p) == v {
            action_free = false;
        }
        if proper.is_none() {
            let mut orbit = Vec::with_capacity(dim as usize);
            let mut w = v;
            for _ in 0..dim {
                orbit.push(w);
                w = times_x(w, p);
            }
            let basis = span_basis(orbit);
            if (basis.len() as u32) < dim {
                proper = Some(basis);
            }
        }
    }
    ModuleOracle {
        dim,
        action_free,
        irreducible: proper.is_none(),
        proper_submodule: proper,
    }
}

/// Largest `p` for which the exhaustive cyclic-submodule search runs.
pub const MODULE_ORACLE_MAX_P: u64 = 13;

pub fn module_irreducibility(p: u64) -> Result<ModuleIrreducibility> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::Precondition("p must be odd".into()));
    }
    let criterion = order_mod(2, p)? == p - 1;
    let oracle = (p <= MODULE_ORACLE_MAX_P).then(|| module_oracle(p as u32));
    Ok(ModuleIrreducibility {
        p,
        criterion,
        oracle,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPlusEntry {
    pub ell: u64,
    pub source: String,
}

/// Safe primes up to 509 for which the plus class numbers along the tower are
/// known to be odd. Recorded data, not computed here.
pub fn odd_hplus_table() -> Vec<HPlusEntry> {
    const SOURCE: &str = "h_1 odd: Estes (also Stevenhagen); h_n/h_1 odd for ell <= 509: Ichimura-Nakajima; h_n^+ | h_n";
    [11, 23, 59, 107, 167, 263, 347, 359]
        .into_iter()
        .map(|ell| HPlusEntry {
            ell,
            source: SOURCE.to_string(),
        })
        .collect()
}

pub fn hplus_lookup(ell: u64) -> Option<HPlusEntry> {
    odd_hplus_table().into_iter().find(|e| e.ell == ell)
}

/// Summary record emitted by the scan commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub kind: String,
    pub parameters: serde_json::Value,
    pub verdict: bool,
    pub results: serde_json::Value,
    pub count: usize,
    pub elapsed_ms: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inertia() {
        for ell in [3, 5, 7, 11] {
            assert!(is_inert(2, ell).unwrap());
        }
        assert!(!is_inert(3, 11).unwrap());
        assert!(is_inert(5, 5).is_err());
    }

    #[test]
    fn safe_primes() {
        assert_eq!(
            safe_prime_scan(509),
            vec![11, 23, 59, 107, 167, 263, 347, 359]
        );
        assert_eq!(safe_prime_scan(12), vec![11]);
        assert!(safe_prime_scan(10).is_empty());
        let table: Vec<u64> = odd_hplus_table().iter().map(|e| e.ell).collect();
        assert_eq!(table, safe_prime_scan(509));
        assert!(hplus_lookup(13).is_none());
    }

    #[test]
    fn avoidance_by_hand() {
        // a = 2: 1 + a^2 = 5 = -(a + a^2) mod 11
        assert!(fails_avoidance(2, 11));
        let c = count_lemma_check(11).unwrap();
        assert!(!c.valid.contains(&2));
        assert!(c.passes());
    }

    #[test]
    fn module_oracle_small() {
        let m5 = module_irreducibility(5).unwrap();
        assert!(m5.criterion && m5.agrees());
        let m7 = module_irreducibility(7).unwrap();
        assert!(!m7.criterion && m7.agrees());
        let sub = m7.oracle.unwrap().proper_submodule.unwrap();
        assert_eq!(sub.len(), 3);
        assert!(module_irreducibility(9).is_err());
    }

    #[test]
    fn totient_bound() {
        let t = totient_bound_check(30, 2000).unwrap();
        assert_eq!(t.failures, vec![30]);
        assert!(totient_bound_check(31, 2000).unwrap().holds);
        assert!(totient_bound_check(29, 40).is_err());
    }
}
