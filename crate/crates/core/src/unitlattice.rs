//! Canonical forms for cyclotomic S-units and membership in the subgroup
//! generated by roots of unity and the previous layer.
//!
//! Every product `+-zeta^j * prod (1 - zeta^a)^c` with `a != 0 mod ell^n` is
//! rewritten over the free basis `{1 - zeta^k : 1 <= k < ell^n / 2, ell does not
//! divide k}`. The units coming from level n-1 are exactly the words whose
//! exponents are constant on each signed residue class
//! `{k : k = +-r mod ell^(n-1)}`, which turns subgroup membership into a
//! linear-time scan.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cycfield::{field_shape, FieldElem, RatVal};
use crate::error::{Error, Result};

/// Default cap on `sum |c| * ell^n` when expanding a word into the field.
pub const DEFAULT_MASS_LIMIT: u128 = 1_000_000;

/// `k = {a}_n`: the representative of `+-a mod ell^n` in `[0, ell^n / 2)`,
/// together with whether the negative branch was taken.
pub fn fold_index(ell: u64, level: u32, a: i64) -> Result<(u64, bool)> {
    let (_, big_m, _) = field_shape(ell, level)?;
    let big_m = big_m as i64;
    let r = a.rem_euclid(big_m);
    if r == 0 {
        return Err(Error::ZeroIndex {
            a,
            modulus: big_m as u64,
        });
    }
    if 2 * r <= big_m {
        Ok((r as u64, false))
    } else {
        Ok(((big_m - r) as u64, true))
    }
}

/// The basis indices `1 <= k < ell^n / 2` coprime to ell.
pub fn basis_indices(ell: u64, level: u32) -> Result<Vec<u64>> {
    let (_, big_m, _) = field_shape(ell, level)?;
    Ok((1..big_m as u64)
        .filter(|&k| 2 * k < big_m as u64 && k % ell != 0)
        .collect())
}

/// `sign * zeta^zeta_exp * prod (1 - zeta^a)^c`, not yet canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalProduct {
    pub ell: u64,
    pub level: u32,
    pub sign: i8,
    pub zeta_exp: i64,
    pub factors: Vec<(i64, i64)>,
}

impl FormalProduct {
    pub fn new(ell: u64, level: u32, factors: Vec<(i64, i64)>) -> Self {
        FormalProduct {
            ell,
            level,
            sign: 1,
            zeta_exp: 0,
            factors,
        }
    }

    pub fn mul(&self, other: &FormalProduct) -> FormalProduct {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().copied());
        FormalProduct {
            ell: self.ell,
            level: self.level,
            sign: self.sign * other.sign,
            zeta_exp: self.zeta_exp + other.zeta_exp,
            factors,
        }
    }

    pub fn inv(&self) -> FormalProduct {
        FormalProduct {
            ell: self.ell,
            level: self.level,
            sign: self.sign,
            zeta_exp: -self.zeta_exp,
            factors: self.factors.iter().map(|&(a, c)| (a, -c)).collect(),
        }
    }

    pub fn neg(&self) -> FormalProduct {
        FormalProduct {
            sign: -self.sign,
            ..self.clone()
        }
    }

    /// Direct evaluation in the field, without passing through the basis.
    pub fn evaluate(&self) -> Result<FieldElem> {
        let one = FieldElem::one(self.ell, self.level)?;
        let mut num = one.clone();
        let mut den = one;
        for &(a, c) in &self.factors {
            let f = FieldElem::one_minus_zeta_pow(self.ell, self.level, a)?;
            if f.is_zero() {
                return Err(Error::ZeroIndex {
                    a,
                    modulus: self.ell.pow(self.level),
                });
            }
            let p = f.pow(c.abs())?;
            if c > 0 {
                num = &num * &p;
            } else {
                den = &den * &p;
            }
        }
        let v = num.checked_div(&den)?.mul_zeta_pow(self.zeta_exp);
        Ok(if self.sign < 0 { -v } else { v })
    }
}

mod exps_as_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<u64, i64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(u64, i64)> = m.iter().map(|(&k, &c)| (k, c)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<u64, i64>, D::Error> {
        let v = Vec::<(u64, i64)>::deserialize(d)?;
        Ok(v.into_iter().filter(|&(_, c)| c != 0).collect())
    }
}

/// Canonical word `sign * zeta^zeta_exp * prod_k (1 - zeta^k)^exps[k]` over the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitWord {
    pub ell: u64,
    pub level: u32,
    pub sign: i8,
    pub zeta_exp: u64,
    #[serde(with = "exps_as_pairs")]
    pub exps: BTreeMap<u64, i64>,
}

impl UnitWord {
    pub fn identity(ell: u64, level: u32) -> Result<Self> {
        field_shape(ell, level)?;
        Ok(UnitWord {
            ell,
            level,
            sign: 1,
            zeta_exp: 0,
            exps: BTreeMap::new(),
        })
    }

    /// Word with the given basis exponents and trivial torsion part.
    pub fn from_exps(ell: u64, level: u32, exps: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let mut w = Self::identity(ell, level)?;
        let (_, big_m, _) = field_shape(ell, level)?;
        for (k, c) in exps {
            if k == 0 || k % ell == 0 || 2 * k >= big_m as u64 {
                return Err(Error::Precondition(format!("{k} is not a basis index")));
            }
            *w.exps.entry(k).or_default() += c;
        }
        w.exps.retain(|_, c| *c != 0);
        Ok(w)
    }

    pub fn exponent(&self, k: u64) -> i64 {
        self.exps.get(&k).copied().unwrap_or(0)
    }

    pub fn is_torsion(&self) -> bool {
        self.exps.is_empty()
    }

    /// `sum |c| * ell^n`, the work estimate for expanding into the field.
    pub fn mass(&self) -> u128 {
        let big_m = self.ell.pow(self.level) as u128;
        self.exps.values().map(|c| c.unsigned_abs() as u128).sum::<u128>() * big_m
    }

    fn modulus(&self) -> u64 {
        self.ell.pow(self.level)
    }

    fn with_torsion(mut self, sign: i8, zeta_exp: i128) -> Self {
        let big_m = self.modulus() as i128;
        let mut z = zeta_exp.rem_euclid(big_m);
        let mut s = sign;
        if self.ell == 2 && s < 0 {
            z = (z + big_m / 2).rem_euclid(big_m);
            s = 1;
        }
        self.sign = s;
        self.zeta_exp = z as u64;
        self.exps.retain(|_, c| *c != 0);
        self
    }
}

/// Rewrite a formal product over the basis, keeping its value.
pub fn normalize(p: &FormalProduct) -> Result<UnitWord> {
    let (_, big_m, _) = field_shape(p.ell, p.level)?;
    let big_m = big_m as i64;
    let ell = p.ell as i64;
    let mut word = UnitWord::identity(p.ell, p.level)?;
    let mut sign = p.sign;
    let mut zeta_exp = p.zeta_exp as i128;
    for &(a, c) in &p.factors {
        let r = a.rem_euclid(big_m);
        if r == 0 {
            return Err(Error::ZeroIndex {
                a,
                modulus: big_m as u64,
            });
        }
        if c == 0 {
            continue;
        }
        let mut t = 0u32;
        let mut d = r;
        while d % ell == 0 {
            d /= ell;
            t += 1;
        }
        // 1 - zeta^(d ell^t) = prod_{i < ell^t} (1 - zeta^(d + i ell^(n-t)))
        let step = big_m / ell.pow(t);
        for i in 0..ell.pow(t) {
            let x = (d + i * step).rem_euclid(big_m);
            let (k, flipped) = fold_index(p.ell, p.level, x)?;
            if flipped {
                // 1 - zeta^x = -zeta^x (1 - zeta^(M-x))
                if c % 2 != 0 {
                    sign = -sign;
                }
                zeta_exp += x as i128 * c as i128;
            }
            *word.exps.entry(k).or_default() += c;
        }
    }
    Ok(word.with_torsion(sign, zeta_exp))
}

fn check_same(u: &UnitWord, v: &UnitWord) -> Result<()> {
    if u.ell != v.ell || u.level != v.level {
        return Err(Error::LevelMismatch {
            ell_a: u.ell,
            level_a: u.level,
            ell_b: v.ell,
            level_b: v.level,
        });
    }
    Ok(())
}

pub fn word_mul(u: &UnitWord, v: &UnitWord) -> Result<UnitWord> {
    check_same(u, v)?;
    let mut w = u.clone();
    for (&k, &c) in &v.exps {
        *w.exps.entry(k).or_default() += c;
    }
    let sign = u.sign * v.sign;
    let z = u.zeta_exp as i128 + v.zeta_exp as i128;
    Ok(w.with_torsion(sign, z))
}

pub fn word_pow(u: &UnitWord, e: i64) -> UnitWord {
    let mut w = u.clone();
    for c in w.exps.values_mut() {
        *c *= e;
    }
    let sign = if u.sign < 0 && e % 2 != 0 { -1 } else { 1 };
    let z = u.zeta_exp as i128 * e as i128;
    w.with_torsion(sign, z)
}

pub fn word_inv(u: &UnitWord) -> UnitWord {
    word_pow(u, -1)
}

/// `v_ell` of a word: every basis factor has valuation `1 / (ell^(n-1) (ell-1))`.
pub fn word_valuation(u: &UnitWord) -> RatVal {
    let total: i64 = u.exps.values().sum();
    let phi = (u.ell as i64).pow(u.level - 1) * (u.ell as i64 - 1);
    RatVal::new(total, phi)
}

/// Expand a word into the field, subject to the exponent-mass guard.
pub fn word_to_field(u: &UnitWord, mass_limit: u128) -> Result<FieldElem> {
    let mass = u.mass();
    if mass > mass_limit {
        return Err(Error::MassGuard {
            mass,
            limit: mass_limit,
        });
    }
    let one = FieldElem::one(u.ell, u.level)?;
    let mut num = one.clone();
    let mut den = one;
    for (&k, &c) in &u.exps {
        for _ in 0..c.unsigned_abs() {
            if c > 0 {
                num = num.mul_one_minus_zeta_pow(k as i64);
            } else {
                den = den.mul_one_minus_zeta_pow(k as i64);
            }
        }
    }
    let v = if den.is_one() { num } else { num.checked_div(&den)? };
    let v = v.mul_zeta_pow(u.zeta_exp as i64);
    Ok(if u.sign < 0 { -v } else { v })
}

/// Image of a word under the inclusion of level n into a higher level.
pub fn embed_word(u: &UnitWord, higher_level: u32) -> Result<UnitWord> {
    if higher_level < u.level {
        return Err(Error::LevelDecrease {
            from: u.level,
            to: higher_level,
        });
    }
    let scale = u.ell.pow(higher_level - u.level) as i64;
    let p = FormalProduct {
        ell: u.ell,
        level: higher_level,
        sign: u.sign,
        zeta_exp: u.zeta_exp as i64 * scale,
        factors: u.exps.iter().map(|(&k, &c)| (k as i64 * scale, c)).collect(),
    };
    normalize(&p)
}

/// Two basis indices in one signed class whose exponents disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Smallest non-negative representative `r` of the class `+-r mod ell^(n-1)`.
    pub class: u64,
    pub k: u64,
    pub m: u64,
    pub exp_k: i64,
    pub exp_m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCert {
    pub verdict: bool,
    pub witness: Option<Witness>,
}

/// Signed class key of a basis index: `min(k mod m, m - k mod m)` with `m = ell^(n-1)`.
pub fn signed_class(ell: u64, level: u32, k: u64) -> u64 {
    let m = ell.pow(level - 1);
    let r = k % m;
    r.min(m - r)
}

/// The basis indices grouped by signed class, in increasing order of class key.
pub fn signed_classes(ell: u64, level: u32) -> Result<BTreeMap<u64, Vec<u64>>> {
    let mut out: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for k in basis_indices(ell, level)? {
        out.entry(signed_class(ell, level, k)).or_default().push(k);
    }
    Ok(out)
}

fn check_membership_level(u: &UnitWord) -> Result<()> {
    let min = if u.ell == 2 { 3 } else { 2 };
    if u.level < min {
        return Err(Error::LevelTooSmall {
            level: u.level,
            min,
        });
    }
    Ok(())
}

fn class_scan(u: &UnitWord, key: impl Fn(i64) -> i64) -> Result<MembershipCert> {
    check_membership_level(u)?;
    let m = u.ell.pow(u.level - 1);
    for (class, mut members) in signed_classes(u.ell, u.level)? {
        let first = members[0];
        // report a same-residue partner before a negated one
        members.sort_by_key(|&k| (k % m != first % m, k));
        let e0 = u.exponent(first);
        for &k in &members[1..] {
            let ek = u.exponent(k);
            if key(ek) != key(e0) {
                return Ok(MembershipCert {
                    verdict: false,
                    witness: Some(Witness {
                        class,
                        k: first,
                        m: k,
                        exp_k: e0,
                        exp_m: ek,
                    }),
                });
            }
        }
    }
    Ok(MembershipCert {
        verdict: true,
        witness: None,
    })
}

/// Membership in the subgroup generated by `+-zeta` and the units of level n-1.
#[allow(non_snake_case)]
pub fn in_zetaVprev(u: &UnitWord) -> Result<MembershipCert> {
    class_scan(u, |e| e)
}

/// Membership in the subgroup generated by `+-zeta`, level n-1 units and squares.
#[allow(non_snake_case)]
pub fn in_zetaVprevVsq(u: &UnitWord) -> Result<MembershipCert> {
    class_scan(u, |e| e.rem_euclid(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding() {
        assert_eq!(fold_index(5, 2, 23), Ok((2, true)));
        assert_eq!(fold_index(5, 2, 2), Ok((2, false)));
        assert_eq!(fold_index(3, 2, 4), Ok((4, false)));
        assert!(fold_index(5, 2, 50).is_err());
    }

    #[test]
    fn basis_size() {
        for (ell, n) in [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let (phi, _, _) = field_shape(ell, n).unwrap();
            assert_eq!(basis_indices(ell, n).unwrap().len(), phi / 2);
        }
    }

    #[test]
    fn normalize_examples() {
        let p = FormalProduct::new(5, 2, vec![(5, 1)]);
        let w = normalize(&p).unwrap();
        let keys: Vec<u64> = w.exps.keys().copied().collect();
        assert_eq!(keys, vec![1, 4, 6, 9, 11]);
        assert!(w.exps.values().all(|&c| c == 1));
        assert_eq!(
            word_to_field(&w, DEFAULT_MASS_LIMIT).unwrap(),
            p.evaluate().unwrap()
        );

        let w = normalize(&FormalProduct::new(5, 2, vec![(2, 1)])).unwrap();
        assert_eq!((w.sign, w.zeta_exp), (1, 0));
        assert_eq!(w.exps, BTreeMap::from([(2, 1)]));

        let p = FormalProduct::new(5, 2, vec![(23, 1)]);
        let w = normalize(&p).unwrap();
        assert_eq!((w.sign, w.zeta_exp), (-1, 23));
        assert_eq!(w.exps, BTreeMap::from([(2, 1)]));
        assert_eq!(
            word_to_field(&w, DEFAULT_MASS_LIMIT).unwrap(),
            p.evaluate().unwrap()
        );
    }

    #[test]
    fn group_operations() {
        let u = normalize(&FormalProduct::new(3, 3, vec![(1, 2), (5, -1), (22, 3)])).unwrap();
        let id = word_mul(&u, &word_inv(&u)).unwrap();
        assert_eq!(id, UnitWord::identity(3, 3).unwrap());
        let sq = word_pow(&u, 2);
        for (k, c) in &u.exps {
            assert_eq!(sq.exponent(*k), 2 * c);
        }
        assert_eq!(word_valuation(&UnitWord::identity(5, 2).unwrap()), RatVal::from(0));
        let one = UnitWord::from_exps(5, 2, [(1, 1)]).unwrap();
        assert_eq!(word_valuation(&one), RatVal::new(1, 20));
    }

    #[test]
    fn field_bridge() {
        // (1 - z)(1 + z) = 1 - z^2
        let q = |v: i64| num_rational::BigRational::from_integer(v.into());
        let lhs = FieldElem::reduce(5, 1, &[q(1), q(-1)]).unwrap()
            * FieldElem::reduce(5, 1, &[q(1), q(1)]).unwrap();
        let w = UnitWord::from_exps(5, 1, [(2, 1)]).unwrap();
        assert_eq!(word_to_field(&w, DEFAULT_MASS_LIMIT).unwrap(), lhs);
        let p = FormalProduct::new(5, 1, vec![(1, 1), (4, 1), (2, 1), (3, 1)]);
        let w = normalize(&p).unwrap();
        assert_eq!(
            word_to_field(&w, DEFAULT_MASS_LIMIT).unwrap(),
            FieldElem::from_int(5, 1, 5).unwrap()
        );
        let heavy = UnitWord::from_exps(5, 2, [(1, 100_000)]).unwrap();
        assert!(matches!(
            word_to_field(&heavy, DEFAULT_MASS_LIMIT),
            Err(Error::MassGuard { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let w = normalize(&FormalProduct::new(5, 2, vec![(5, 1)])).unwrap();
        assert!(in_zetaVprev(&w).unwrap().verdict);
        let bad = UnitWord::from_exps(5, 2, [(1, -5)]).unwrap();
        let cert = in_zetaVprev(&bad).unwrap();
        assert!(!cert.verdict);
        let wit = cert.witness.unwrap();
        assert_eq!((wit.k, wit.m), (1, 6));
        assert!(in_zetaVprevVsq(&word_pow(&bad, 2)).unwrap().verdict);
        assert!(in_zetaVprevVsq(&UnitWord::identity(5, 2).unwrap()).unwrap().verdict);
        assert!(in_zetaVprev(&UnitWord::identity(5, 1).unwrap()).is_err());
        assert!(in_zetaVprev(&UnitWord::identity(2, 2).unwrap()).is_err());
    }
}
