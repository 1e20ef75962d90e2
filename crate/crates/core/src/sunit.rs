//! Infinite families of solutions to `eps + delta = k` in cyclotomic S-units,
//! generated one layer at a time and certified per layer.
//!
//! Four constructions are provided: the nine univariate identities (with
//! power-of-ell rescaling for k = 12, 24), the two-parameter unit equation
//! `E + F = 1`, and the four- and three-variable identities that land in the
//! Z_5- and Z_7-extensions.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cycfield::{hensel_root, FieldElem, RatVal};
use crate::cycpoly::{known_identities, IntPoly, SuperCyc};
use crate::error::{Error, Result};
use crate::numth::{gcd, ord_p};
use crate::symbolic::{phi_formal, PsiFactor, PsiIdentity, PsiProduct};
use crate::unitlattice::{
    in_zetaVprev, normalize, word_mul, word_to_field, word_valuation, FormalProduct,
    MembershipCert, UnitWord, DEFAULT_MASS_LIMIT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubfieldTag {
    /// The maximal real subfield of the cyclotomic tower.
    OmegaPlus,
    /// The cyclotomic Z_ell-extension of Q.
    QInf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeSet {
    /// Units.
    Empty,
    /// Units away from the prime above ell.
    Ell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Identity,
    UnitEquation,
    Q5,
    Q7,
}

/// A certified pair `eps + delta = k` at one layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SUnitSolution {
    pub family: Family,
    pub ell: u64,
    pub level: u32,
    /// The target, already multiplied by `scale`.
    pub k: u64,
    pub scale: u64,
    pub eps: UnitWord,
    pub delta: UnitWord,
    pub eps_f: FieldElem,
    pub delta_f: FieldElem,
    pub eps_formal: FormalProduct,
    pub delta_formal: FormalProduct,
    pub subfield_tag: SubfieldTag,
    pub s_set: PrimeSet,
    /// Exponents `s` with `zeta -> zeta^s` fixing both members.
    pub invariance: Vec<i64>,
    /// Whether distinctness across layers is argued through subgroup membership.
    pub novelty_required: bool,
    /// `(i, j)` for the unit equation family.
    pub unit_pair: Option<(i64, i64)>,
    pub notes: Vec<String>,
}

/// Smallest level at which every cyclotomic factor of the identity for `k`
/// stays nonzero and membership against the previous layer is defined.
pub fn identity_min_level(ell: u64, k: u64) -> Result<u32> {
    let (f, g, h, _) = base_identity(k)?;
    let ms: Vec<u64> = [f, g, h]
        .iter()
        .flat_map(|s| s.factors.iter().map(|&(m, _)| m))
        .collect();
    let mut n = if ell == 2 { 3 } else { 2 };
    while ms.iter().any(|&m| m % ell.pow(n) == 0) {
        n += 1;
    }
    Ok(n)
}

fn base_identity(k: u64) -> Result<(SuperCyc, SuperCyc, SuperCyc, i64)> {
    known_identities()
        .into_iter()
        .find(|t| t.3 as u64 == k)
        .ok_or_else(|| Error::Unsupported(format!("no base identity with k = {k}")))
}

/// `(base k, scale)` producing the target `k` for the given ell.
pub fn identity_route(ell: u64, k: u64) -> Result<(u64, u64)> {
    match (ell, k) {
        (_, 1..=8 | 10) => Ok((k, 1)),
        (2, 12) => Ok((6, 2)),
        (2, 24) => Ok((6, 4)),
        (3, 12) => Ok((4, 3)),
        (3, 24) => Ok((8, 3)),
        _ => Err(Error::Unsupported(format!(
            "k = {k} has no identity route for ell = {ell}"
        ))),
    }
}

fn supercyc_formal(ell: u64, level: u32, s: &SuperCyc) -> FormalProduct {
    let mut acc = FormalProduct::new(ell, level, Vec::new());
    acc.zeta_exp = s.x_power as i64;
    for &(m, e) in &s.factors {
        let p = phi_formal(ell, level, m, 1);
        for _ in 0..e {
            acc = acc.mul(&p);
        }
    }
    acc
}

fn supercyc_field(ell: u64, level: u32, s: &SuperCyc) -> Result<FieldElem> {
    FieldElem::eval_int_poly(ell, level, &s.expand(), 1)
}

/// The word for `ell^e`, the product of all `1 - zeta^j` with `j` a unit, raised to `e`.
fn ell_power_formal(ell: u64, level: u32, e: u32) -> FormalProduct {
    let big_m = ell.pow(level) as i64;
    let factors = (1..big_m)
        .filter(|&j| gcd(j as u64, ell) == 1)
        .map(|j| (j, e as i64))
        .collect();
    FormalProduct::new(ell, level, factors)
}

fn finish(
    eps_formal: FormalProduct,
    delta_formal: FormalProduct,
    eps_f: FieldElem,
    delta_f: FieldElem,
) -> Result<(UnitWord, UnitWord, FieldElem, FieldElem, FormalProduct, FormalProduct)> {
    let eps = normalize(&eps_formal)?;
    let delta = normalize(&delta_formal)?;
    Ok((eps, delta, eps_f, delta_f, eps_formal, delta_formal))
}

/// Solutions of `eps + delta = k` from the univariate identities, `k` in
/// `{1..8, 10}`, or `{12, 24}` by rescaling for ell = 2, 3.
pub fn gen_identity_family(ell: u64, k: u64, level: u32) -> Result<SUnitSolution> {
    let (base_k, scale) = identity_route(ell, k)?;
    let (f, g, h, _) = base_identity(base_k)?;
    let min = identity_min_level(ell, base_k)?;
    if level < min {
        return Err(Error::LevelTooSmall { level, min });
    }
    let hf = supercyc_formal(ell, level, &h);
    let mut eps_formal = supercyc_formal(ell, level, &f).mul(&hf.inv());
    let mut delta_formal = supercyc_formal(ell, level, &g).mul(&hf.inv()).neg();
    let hv = supercyc_field(ell, level, &h)?;
    let mut eps_f = supercyc_field(ell, level, &f)?.checked_div(&hv)?;
    let mut delta_f = -supercyc_field(ell, level, &g)?.checked_div(&hv)?;
    let mut notes = Vec::new();
    if scale > 1 {
        let e = ord_p(scale as i128, ell).expect("scale is a power of ell");
        let sw = ell_power_formal(ell, level, e);
        eps_formal = eps_formal.mul(&sw);
        delta_formal = delta_formal.mul(&sw);
        let q = BigRational::from_integer(BigInt::from(scale));
        eps_f = eps_f.scale(&q);
        delta_f = delta_f.scale(&q);
        notes.push(format!("{scale} * (solution for k = {base_k})"));
    }
    let (eps, delta, eps_f, delta_f, eps_formal, delta_formal) =
        finish(eps_formal, delta_formal, eps_f, delta_f)?;
    Ok(SUnitSolution {
        family: Family::Identity,
        ell,
        level,
        k,
        scale,
        eps,
        delta,
        eps_f,
        delta_f,
        eps_formal,
        delta_formal,
        subfield_tag: SubfieldTag::OmegaPlus,
        s_set: PrimeSet::Ell,
        invariance: vec![-1],
        novelty_required: true,
        unit_pair: None,
        notes,
    })
}

/// `Phi_8(x) / (Phi_4(x y) Phi_4(x / y))` at `x = zeta^i`, `y = zeta^j`, as a formal product.
fn e_formal(ell: u64, level: u32, i: i64, j: i64) -> FormalProduct {
    let phi8 = FormalProduct::new(ell, level, vec![(8 * i, 1), (4 * i, -1)]);
    let phi4 = |s: i64| FormalProduct::new(ell, level, vec![(4 * s, 1), (2 * s, -1)]);
    phi8.mul(&phi4(i + j).inv()).mul(&phi4(i - j).inv())
}

fn e_field(ell: u64, level: u32, i: i64, j: i64) -> Result<FieldElem> {
    let phi8 = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
    let phi4 = IntPoly::from_i64(&[1, 0, 1]);
    let num = FieldElem::eval_int_poly(ell, level, &phi8, i)?;
    let d1 = FieldElem::eval_int_poly(ell, level, &phi4, i + j)?;
    let d2 = FieldElem::eval_int_poly(ell, level, &phi4, i - j)?;
    num.checked_div(&(&d1 * &d2))
}

/// The unit solution `E(zeta^i, zeta^j) + F(zeta^i, zeta^j) = 1` for odd ell.
pub fn gen_unit_equation(ell: u64, i: i64, j: i64, level: u32) -> Result<SUnitSolution> {
    if ell == 2 {
        return Err(Error::TwoAdicObstruction);
    }
    crate::cycfield::field_shape(ell, level)?;
    let big_m = ell.pow(level) as i64;
    for (name, v) in [("i", i), ("j", j), ("i+j", i + j), ("i-j", i - j)] {
        if v.rem_euclid(big_m) == 0 {
            return Err(Error::Precondition(format!(
                "{name} = {v} vanishes modulo {big_m}"
            )));
        }
    }
    let (eps, delta, eps_f, delta_f, eps_formal, delta_formal) = finish(
        e_formal(ell, level, i, j),
        e_formal(ell, level, j, i),
        e_field(ell, level, i, j)?,
        e_field(ell, level, j, i)?,
    )?;
    Ok(SUnitSolution {
        family: Family::UnitEquation,
        ell,
        level,
        k: 1,
        scale: 1,
        eps,
        delta,
        eps_f,
        delta_f,
        eps_formal,
        delta_formal,
        subfield_tag: SubfieldTag::OmegaPlus,
        s_set: PrimeSet::Empty,
        invariance: vec![-1],
        novelty_required: false,
        unit_pair: Some((i, j)),
        notes: Vec::new(),
    })
}

/// `(ell^ord(i+j) + ell^ord(i-j)) / (ell^(n-1) (ell-1))`.
pub fn valij_formula(ell: u64, level: u32, i: i64, j: i64) -> Result<RatVal> {
    let big_m = ell.pow(level) as i128;
    let o = |v: i64| {
        ord_p((v as i128).rem_euclid(big_m), ell)
            .filter(|&t| t < level)
            .ok_or_else(|| Error::Precondition(format!("{v} vanishes modulo {big_m}")))
    };
    let (a, b) = (o(i + j)?, o(i - j)?);
    let num = (ell as i64).pow(a) + (ell as i64).pow(b);
    Ok(RatVal::new(num, (ell as i64).pow(level - 1) * (ell as i64 - 1)))
}

fn psi(m: u64, u: &[u32], v: &[u32]) -> (PsiFactor, u32) {
    (PsiFactor::new(m, u, v), 1)
}

fn psi_sq(m: u64, u: &[u32], v: &[u32]) -> (PsiFactor, u32) {
    (PsiFactor::new(m, u, v), 2)
}

fn product(nvars: usize, factors: Vec<(PsiFactor, u32)>) -> PsiProduct {
    PsiProduct { nvars, factors }
}

/// The four-variable identities `F - G = k H`, k in {1, 2, 4}, invariant under
/// the 4-cycle of the variables.
pub fn q5_identity(k: u64) -> Result<PsiIdentity> {
    let p = |f| product(4, f);
    let id = match k {
        1 => PsiIdentity {
            f: p(vec![psi(2, &[1, 2, 0, 0], &[0, 0, 1, 2]), psi(2, &[2, 0, 0, 1], &[0, 1, 2, 0])]),
            g: p(vec![psi(2, &[2, 1, 0, 0], &[0, 0, 2, 1]), psi(2, &[1, 0, 0, 2], &[0, 2, 1, 0])]),
            h: p(vec![
                psi(1, &[1, 0, 0, 0], &[0, 0, 1, 0]),
                psi(1, &[0, 1, 0, 0], &[0, 0, 0, 1]),
                psi(1, &[1, 1, 0, 0], &[0, 0, 1, 1]),
                psi(1, &[1, 0, 0, 1], &[0, 1, 1, 0]),
            ]),
            k: 1,
        },
        2 => PsiIdentity {
            f: p(vec![psi(3, &[1, 0, 0, 0], &[0, 0, 1, 0]), psi(3, &[0, 1, 0, 0], &[0, 0, 0, 1])]),
            g: p(vec![psi(6, &[1, 0, 0, 0], &[0, 0, 1, 0]), psi(6, &[0, 1, 0, 0], &[0, 0, 0, 1])]),
            h: p(vec![psi(2, &[1, 0, 0, 1], &[0, 1, 1, 0]), psi(2, &[1, 1, 0, 0], &[0, 0, 1, 1])]),
            k: 2,
        },
        4 => PsiIdentity {
            f: p(vec![
                psi_sq(2, &[1, 0, 0, 0], &[0, 0, 1, 0]),
                psi_sq(2, &[0, 1, 0, 0], &[0, 0, 0, 1]),
            ]),
            g: p(vec![
                psi_sq(1, &[1, 0, 0, 0], &[0, 0, 1, 0]),
                psi_sq(1, &[0, 1, 0, 0], &[0, 0, 0, 1]),
            ]),
            h: p(vec![psi(2, &[1, 1, 0, 0], &[0, 0, 1, 1]), psi(2, &[1, 0, 0, 1], &[0, 1, 1, 0])]),
            k: 4,
        },
        _ => return Err(Error::Unsupported(format!("no four-variable identity for k = {k}"))),
    };
    Ok(id)
}

/// The three-variable identity `F - G = H`, invariant under the 3-cycle.
pub fn q7_identity() -> PsiIdentity {
    let p = |f| product(3, f);
    PsiIdentity {
        f: p(vec![
            psi(2, &[1, 2, 0], &[0, 0, 3]),
            psi(2, &[0, 1, 2], &[3, 0, 0]),
            psi(2, &[2, 0, 1], &[0, 3, 0]),
        ]),
        g: p(vec![
            psi(1, &[1, 0, 0], &[0, 1, 0]),
            psi(1, &[0, 1, 0], &[0, 0, 1]),
            psi(1, &[0, 0, 1], &[1, 0, 0]),
            psi(1, &[1, 1, 0], &[0, 0, 2]),
            psi(1, &[0, 1, 1], &[2, 0, 0]),
            psi(1, &[1, 0, 1], &[0, 2, 0]),
        ]),
        h: p(vec![
            psi(2, &[2, 1, 0], &[0, 0, 3]),
            psi(2, &[0, 2, 1], &[3, 0, 0]),
            psi(2, &[1, 0, 2], &[0, 3, 0]),
        ]),
        k: 1,
    }
}

/// The Galois generator used by the Z_5 family: `a^2 = -1`, `a = 2 mod 5`, modulo `5^n`.
pub fn q5_generator(level: u32) -> Result<i64> {
    let r = hensel_root(&IntPoly::from_i64(&[1, 0, 1]), 5, 2, level)?;
    Ok(r.residue_mod(level)? as i64)
}

/// The Galois generator used by the Z_7 family: `a^2 + a + 1 = 0`, `a = 2 mod 7`, modulo `7^n`.
pub fn q7_generator(level: u32) -> Result<i64> {
    let r = hensel_root(&IntPoly::from_i64(&[1, 1, 1]), 7, 2, level)?;
    Ok(r.residue_mod(level)? as i64)
}

#[allow(clippy::too_many_arguments)]
fn psi_solution(
    family: Family,
    ell: u64,
    level: u32,
    id: &PsiIdentity,
    x: &[i64],
    invariance: Vec<i64>,
    s_set: PrimeSet,
    notes: Vec<String>,
) -> Result<SUnitSolution> {
    let hf = id.h.eval_formal(ell, level, x);
    let eps_formal = id.f.eval_formal(ell, level, x).mul(&hf.inv());
    let delta_formal = id.g.eval_formal(ell, level, x).mul(&hf.inv()).neg();
    let hv = id.h.eval_field(ell, level, x)?;
    let eps_f = id.f.eval_field(ell, level, x)?.checked_div(&hv)?;
    let delta_f = -id.g.eval_field(ell, level, x)?.checked_div(&hv)?;
    let (eps, delta, eps_f, delta_f, eps_formal, delta_formal) =
        finish(eps_formal, delta_formal, eps_f, delta_f)?;
    Ok(SUnitSolution {
        family,
        ell,
        level,
        k: id.k as u64,
        scale: 1,
        eps,
        delta,
        eps_f,
        delta_f,
        eps_formal,
        delta_formal,
        subfield_tag: SubfieldTag::QInf,
        s_set,
        invariance,
        novelty_required: true,
        unit_pair: None,
        notes,
    })
}

/// Solutions in the Z_5-extension for k in {1, 2, 4}, from the four-variable
/// identities at `(zeta, zeta^a, zeta^(a^2), zeta^(a^3))`.
pub fn gen_q5(k: u64, level: u32) -> Result<SUnitSolution> {
    if level < 2 {
        return Err(Error::LevelTooSmall { level, min: 2 });
    }
    let id = q5_identity(k)?;
    let a = q5_generator(level)?;
    let m = 5i64.pow(level);
    let x = [1, a, (a * a).rem_euclid(m), (a * a * a).rem_euclid(m)];
    let (s_set, notes) = if k == 2 {
        (
            PrimeSet::Empty,
            vec!["k = 2 is certified with S empty: both members have valuation 0".to_string()],
        )
    } else {
        (PrimeSet::Ell, Vec::new())
    };
    psi_solution(Family::Q5, 5, level, &id, &x, vec![a], s_set, notes)
}

/// The solution in the Z_7-extension, from the three-variable identity at
/// `(zeta^2, zeta^(2a), zeta^(2a^2))`.
pub fn gen_q7(level: u32) -> Result<SUnitSolution> {
    if level < 2 {
        return Err(Error::LevelTooSmall { level, min: 2 });
    }
    let a = q7_generator(level)?;
    let m = 7i64.pow(level);
    let x = [2, (2 * a).rem_euclid(m), (2 * a * a).rem_euclid(m)];
    psi_solution(Family::Q7, 7, level, &q7_identity(), &x, vec![a, -1], PrimeSet::Ell, Vec::new())
}

/// The raw exponents `s` of the factors `1 - zeta^s` in a formal product, with
/// their ell-adic orders.
pub fn formal_exponents(p: &FormalProduct) -> Vec<(i64, i64, u32)> {
    let big_m = p.ell.pow(p.level) as i64;
    p.factors
        .iter()
        .map(|&(a, c)| {
            let r = a.rem_euclid(big_m);
            (r, c, ord_p(r as i128, p.ell).unwrap_or(p.level))
        })
        .collect()
}

/// Independent re-check of every property a solution claims.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCert {
    pub sum_ok: bool,
    pub eps_word_ok: bool,
    pub delta_word_ok: bool,
    pub eps_valuation: String,
    pub delta_valuation: String,
    pub valuations_ok: bool,
    pub invariance_ok: bool,
    pub novelty: Option<MembershipCert>,
    pub novelty_ok: bool,
    pub novelty_error: Option<String>,
    pub valij: Option<ValijCert>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValijCert {
    pub i: i64,
    pub j: i64,
    pub formula: String,
    pub direct: String,
    pub ok: bool,
}

impl SolutionCert {
    pub fn passed(&self) -> bool {
        self.sum_ok
            && self.eps_word_ok
            && self.delta_word_ok
            && self.valuations_ok
            && self.invariance_ok
            && self.novelty_ok
            && self.valij.as_ref().is_none_or(|v| v.ok)
    }
}

fn rat_string(q: RatVal) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Direct `v_ell(eps - delta)` against the closed form, for the unit equation family.
pub fn check_valij(s: &SUnitSolution) -> Result<ValijCert> {
    let (i, j) = s
        .unit_pair
        .ok_or_else(|| Error::Precondition("not a unit-equation solution".into()))?;
    let formula = valij_formula(s.ell, s.level, i, j)?;
    let direct = s.eps_f.checked_sub(&s.delta_f)?.valuation()?;
    Ok(ValijCert {
        i,
        j,
        formula: rat_string(formula),
        direct: rat_string(direct),
        ok: formula == direct,
    })
}

/// Recompute the sum, word/field agreement, valuations, Galois invariance and
/// (where the family needs it) novelty against the previous layer.
pub fn verify_solution(s: &SUnitSolution) -> Result<SolutionCert> {
    let target = FieldElem::from_int(s.ell, s.level, s.k)?;
    let sum_ok = s
        .eps_f
        .checked_add(&s.delta_f)
        .map(|v| v == target)
        .unwrap_or(false);
    let eps_word_ok = word_to_field(&s.eps, DEFAULT_MASS_LIMIT * 100)
        .map(|v| v == s.eps_f)
        .unwrap_or(false);
    let delta_word_ok = word_to_field(&s.delta, DEFAULT_MASS_LIMIT * 100)
        .map(|v| v == s.delta_f)
        .unwrap_or(false);
    let ve = s.eps_f.valuation()?;
    let vd = s.delta_f.valuation()?;
    let mut valuations_ok = ve == word_valuation(&s.eps) && vd == word_valuation(&s.delta);
    if s.s_set == PrimeSet::Empty {
        valuations_ok &= ve == RatVal::from(0) && vd == RatVal::from(0);
    }
    let mut invariance_ok = true;
    for &g in &s.invariance {
        invariance_ok &= s.eps_f.galois(g).map(|v| v == s.eps_f).unwrap_or(false);
        invariance_ok &= s.delta_f.galois(g).map(|v| v == s.delta_f).unwrap_or(false);
    }
    let (novelty, novelty_ok, novelty_error) = match in_zetaVprev(&s.eps) {
        Ok(cert) => {
            let ok = !s.novelty_required || !cert.verdict;
            (Some(cert), ok, None)
        }
        Err(e) => (None, !s.novelty_required, Some(e.to_string())),
    };
    let valij = match s.family {
        Family::UnitEquation => Some(check_valij(s)?),
        _ => None,
    };
    Ok(SolutionCert {
        sum_ok,
        eps_word_ok,
        delta_word_ok,
        eps_valuation: rat_string(ve),
        delta_valuation: rat_string(vd),
        valuations_ok,
        invariance_ok,
        novelty,
        novelty_ok,
        novelty_error,
        valij,
    })
}

/// Whether `eps` at level n differs from the embedded `eps` of level m < n.
pub fn distinct_across_layers(high: &SUnitSolution, low: &SUnitSolution) -> Result<bool> {
    let lifted = low.eps_f.embed(high.level)?;
    Ok(lifted != high.eps_f)
}

/// The product of two words at the same level, convenience for callers composing solutions.
pub fn combine(u: &UnitWord, v: &UnitWord) -> Result<UnitWord> {
    word_mul(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_family_k4_ell3() {
        let s = gen_identity_family(3, 4, 2).unwrap();
        let c = verify_solution(&s).unwrap();
        assert!(c.passed(), "{c:?}");
    }

    #[test]
    fn identity_family_k10_ell2() {
        let s = gen_identity_family(2, 10, 3).unwrap();
        // (1-z^2)^7 (1-z^5) / (z (1-z)^5 (1-z^4)^3)
        let direct = FormalProduct {
            ell: 2,
            level: 3,
            sign: 1,
            zeta_exp: -1,
            factors: vec![(2, 7), (5, 1), (1, -5), (4, -3)],
        };
        assert_eq!(s.eps, normalize(&direct).unwrap());
        assert_eq!(word_valuation(&s.eps), RatVal::new(-1, 2));
        assert!(verify_solution(&s).unwrap().passed());
    }

    #[test]
    fn scaled_family() {
        let s = gen_identity_family(3, 12, 2).unwrap();
        assert_eq!(s.scale, 3);
        assert!(verify_solution(&s).unwrap().passed());
    }

    #[test]
    fn unit_equation_examples() {
        let s = gen_unit_equation(3, 2, 1, 2).unwrap();
        let c = verify_solution(&s).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.valij.unwrap().direct, "2/3");
        let s = gen_unit_equation(5, 2, 1, 2).unwrap();
        assert_eq!(check_valij(&s).unwrap().direct, "1/10");
        assert!(gen_unit_equation(3, 1, 1, 2).is_err());
        assert_eq!(gen_unit_equation(2, 2, 1, 3), Err(Error::TwoAdicObstruction));
    }

    #[test]
    fn symbolic_identities() {
        for k in [1, 2, 4] {
            let id = q5_identity(k).unwrap();
            assert!(id.holds(), "k = {k}");
            assert!(id.cyclically_invariant(), "k = {k}");
        }
        assert!(q7_identity().holds());
        assert!(q7_identity().cyclically_invariant());
    }

    #[test]
    fn generators() {
        assert_eq!(q5_generator(2).unwrap(), 7);
        assert_eq!(q7_generator(2).unwrap(), 30);
    }
}
