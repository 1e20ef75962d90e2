//! Legendre elliptic curves from unit solutions of `eps + delta = 1`, and
//! hyperelliptic curves whose roots are Galois orbits of `zeta^e + zeta^-e`.
//!
//! Every claim about a curve (reduction, rationality, separability,
//! non-isomorphism across layers) is returned as a certificate that records
//! what was checked.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithscan::{count_lemma_pick, hplus_lookup};
use crate::cycfield::{ratio_string, FieldElem, RatVal};
use crate::error::{Error, Result};
use crate::numth::{is_prime, primitive_root, teichmuller_lift};
use crate::sunit::SUnitSolution;
use crate::symbolic::phi_formal;
use crate::unitlattice::{
    embed_word, in_zetaVprev, in_zetaVprevVsq, normalize, word_pow, word_to_field,
    word_valuation, FormalProduct, MembershipCert, UnitWord, DEFAULT_MASS_LIMIT,
};

fn rat_string(q: RatVal) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn int(ell: u64, level: u32, c: i64) -> Result<FieldElem> {
    FieldElem::from_int(ell, level, c)
}

// ---------------------------------------------------------------- Legendre

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegendreCurve {
    pub ell: u64,
    pub level: u32,
    pub lambda: FieldElem,
    pub lambda_word: Option<UnitWord>,
    pub discriminant: FieldElem,
    pub j_inv: FieldElem,
    pub reduction: Option<ReductionCert>,
}

/// Norms of `lambda` and `1 - lambda` only involve the primes 2 and ell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCert {
    pub lambda_norm: String,
    pub one_minus_lambda_norm: String,
    pub allowed_primes: Vec<u64>,
    pub ok: bool,
}

/// `Y^2 = X (X - 1) (X - lambda)`: `Delta = 16 l^2 (1-l)^2`, `j = 256 (l^2 - l + 1)^3 / (l^2 (1-l)^2)`.
pub fn legendre_from_field(lambda: &FieldElem) -> Result<LegendreCurve> {
    let (ell, level) = (lambda.ell(), lambda.level());
    let one = FieldElem::one(ell, level)?;
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::Degenerate("lambda must avoid 0 and 1".into()));
    }
    let om = &one - lambda;
    let sq = lambda * &om;
    let sq = &sq * &sq;
    let discriminant = sq.scale(&BigRational::from_integer(16.into()));
    let t = &(&(lambda * lambda) - lambda) + &one;
    let num = (&(&t * &t) * &t).scale(&BigRational::from_integer(256.into()));
    let j_inv = num.checked_div(&sq)?;
    Ok(LegendreCurve {
        ell,
        level,
        lambda: lambda.clone(),
        lambda_word: None,
        discriminant,
        j_inv,
        reduction: None,
    })
}

fn strip_primes(mut n: BigInt, primes: &[u64]) -> BigInt {
    for &p in primes {
        let p = BigInt::from(p);
        while !n.is_zero() && n.is_multiple_of(&p) {
            n /= &p;
        }
    }
    n.abs()
}

fn norm_supported(q: &BigRational, primes: &[u64]) -> bool {
    strip_primes(q.numer().clone(), primes).is_one() && strip_primes(q.denom().clone(), primes).is_one()
}

/// The Legendre curve at `lambda = eps` for a solution of `eps + delta = 1`.
pub fn legendre(sol: &SUnitSolution) -> Result<LegendreCurve> {
    if sol.k != 1 {
        return Err(Error::Precondition(format!(
            "Legendre curves need eps + delta = 1, got k = {}",
            sol.k
        )));
    }
    let mut c = legendre_from_field(&sol.eps_f)?;
    c.lambda_word = Some(sol.eps.clone());
    let primes = if sol.ell == 2 { vec![2] } else { vec![2, sol.ell] };
    let ln = sol.eps_f.norm();
    let on = sol.delta_f.norm();
    let ok = norm_supported(&ln, &primes) && norm_supported(&on, &primes);
    c.reduction = Some(ReductionCert {
        lambda_norm: ratio_string(&ln),
        one_minus_lambda_norm: ratio_string(&on),
        allowed_primes: primes,
        ok,
    });
    Ok(c)
}

/// `lambda, 1/lambda, 1-lambda, 1/(1-lambda), lambda/(lambda-1), (lambda-1)/lambda`.
pub fn legendre_orbit(lambda: &FieldElem) -> Result<Vec<FieldElem>> {
    let one = FieldElem::one(lambda.ell(), lambda.level())?;
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::Degenerate("lambda must avoid 0 and 1".into()));
    }
    let om = &one - lambda;
    let lm = lambda - &one;
    Ok(vec![
        lambda.clone(),
        lambda.inv()?,
        om.clone(),
        om.inv()?,
        lambda.checked_div(&lm)?,
        lm.checked_div(lambda)?,
    ])
}

/// The six orbit members as words, in the order of [`legendre_orbit`].
pub fn legendre_orbit_words(sol: &SUnitSolution) -> Result<Vec<(String, UnitWord)>> {
    let (e, d) = (&sol.eps_formal, &sol.delta_formal);
    let list = [
        ("eps", e.clone()),
        ("1/eps", e.inv()),
        ("delta", d.clone()),
        ("1/delta", d.inv()),
        ("-eps/delta", e.mul(&d.inv()).neg()),
        ("-delta/eps", d.mul(&e.inv()).neg()),
    ];
    list.into_iter()
        .map(|(name, p)| Ok((name.to_string(), normalize(&p)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMemberCert {
    pub label: String,
    pub membership: MembershipCert,
    /// The embedded word evaluates to the embedded field value.
    pub field_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreNonisoCert {
    pub ell: u64,
    pub n: u32,
    pub m: u32,
    pub eps_n_membership: MembershipCert,
    pub orbit: Vec<OrbitMemberCert>,
    pub passed: bool,
}

/// `E_n` and `E_m` are not isomorphic: `eps_n` leaves `<+-zeta, V_(n-1)>` while
/// every orbit member of `eps_m` lies in it.
pub fn legendre_noniso(sol_n: &SUnitSolution, sol_m: &SUnitSolution) -> Result<LegendreNonisoCert> {
    if sol_n.ell != sol_m.ell || sol_n.level <= sol_m.level {
        return Err(Error::Precondition(format!(
            "need the same ell and n > m, got ({}, {}) and ({}, {})",
            sol_n.ell, sol_n.level, sol_m.ell, sol_m.level
        )));
    }
    if sol_n.k != 1 || sol_m.k != 1 {
        return Err(Error::Precondition("both solutions must have k = 1".into()));
    }
    let n = sol_n.level;
    let eps_n_membership = in_zetaVprev(&sol_n.eps)?;
    let values = legendre_orbit(&sol_m.eps_f)?;
    let words = legendre_orbit_words(sol_m)?;
    let orbit = words
        .into_par_iter()
        .zip(values.into_par_iter())
        .map(|((label, w), v)| {
            let lifted = embed_word(&w, n)?;
            let membership = in_zetaVprev(&lifted)?;
            let field_consistent = word_to_field(&lifted, DEFAULT_MASS_LIMIT * 100)? == v.embed(n)?;
            Ok(OrbitMemberCert {
                label,
                membership,
                field_consistent,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = !eps_n_membership.verdict
        && orbit.iter().all(|o| o.membership.verdict && o.field_consistent);
    Ok(LegendreNonisoCert {
        ell: sol_n.ell,
        n,
        m: sol_m.level,
        eps_n_membership,
        orbit,
        passed,
    })
}

// ------------------------------------------------------------ hyperelliptic

/// A root of `X (X - 1) (X + 1)` adjoined to the hyperelliptic polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HRoot {
    Zero,
    One,
    MinusOne,
}

impl HRoot {
    pub fn value(self) -> i64 {
        match self {
            HRoot::Zero => 0,
            HRoot::One => 1,
            HRoot::MinusOne => -1,
        }
    }
}

impl fmt::Display for HRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HRoot::Zero => "X",
            HRoot::One => "X-1",
            HRoot::MinusOne => "X+1",
        })
    }
}

impl FromStr for HRoot {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace(' ', "").as_str() {
            "X" | "x" => Ok(HRoot::Zero),
            "X-1" | "x-1" => Ok(HRoot::One),
            "X+1" | "x+1" => Ok(HRoot::MinusOne),
            other => Err(Error::Parse(format!("unknown factor of X(X-1)(X+1): {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusParams {
    pub ell: u64,
    pub genus: u64,
    pub h_degree: u64,
    pub k: u64,
    /// `k (ell - 1) / 2 + h_degree`, either `2g + 1` or `2g + 2`.
    pub degree: u64,
    pub min_level: u32,
}

pub fn genus_params(ell: u64, genus: u64) -> Result<GenusParams> {
    genus_params_with_h(ell, genus, 0)
}

/// Smallest `k` with `k (ell - 1) / 2 + h_degree` in `{2g + 1, 2g + 2}`.
pub fn genus_params_with_h(ell: u64, genus: u64, h_degree: u64) -> Result<GenusParams> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::Precondition(format!("ell = {ell} must be an odd prime")));
    }
    if genus < 2 {
        return Err(Error::Precondition(format!("genus {genus} < 2")));
    }
    if h_degree > 3 {
        return Err(Error::Precondition("h divides X(X-1)(X+1)".into()));
    }
    let half = (ell - 1) / 2;
    let k = (1..=2 * genus + 2)
        .find(|&k| {
            let d = k * half + h_degree;
            d == 2 * genus + 1 || d == 2 * genus + 2
        })
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "no k with k*{half} + {h_degree} in {{{}, {}}}",
                2 * genus + 1,
                2 * genus + 2
            ))
        })?;
    let mut min_level = 2;
    while ell.pow(min_level - 1) < k {
        min_level += 1;
    }
    Ok(GenusParams {
        ell,
        genus,
        h_degree,
        k,
        degree: k * half + h_degree,
        min_level,
    })
}

/// Generator `zeta -> zeta^a` of `Gal(Omega_n / Q_(n-1))`: the order-(ell-1)
/// lift of the smallest primitive root mod ell.
pub fn generator_a(ell: u64, level: u32) -> Result<u64> {
    Ok(teichmuller_lift(primitive_root(ell)?, ell, level))
}

/// Orbit of `zeta^e + zeta^-e` under `<zeta -> zeta^a>`, as exponents.
fn orbit_exponents(e: u64, a: u64, ell: u64, level: u32) -> Vec<u64> {
    let big_m = ell.pow(level);
    let len = (ell - 1) / 2;
    let mut out = Vec::with_capacity(len as usize);
    let mut x = e % big_m;
    for _ in 0..len {
        out.push(x);
        x = ((x as u128 * a as u128) % big_m as u128) as u64;
    }
    out
}

fn class_key(x: u64, big_m: u64) -> u64 {
    x.min(big_m - x)
}

/// Exponents `e_j` of the `eta_j = zeta^e_j + zeta^-e_j`, with disjoint orbits.
pub fn eta_exponents(ell: u64, level: u32, k: u64) -> Result<Vec<u64>> {
    let big_m = ell.pow(level);
    let step = ell.pow(level - 1);
    let a = generator_a(ell, level)?;
    let mut used: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    let take = |e: u64, used: &mut BTreeSet<u64>, out: &mut Vec<u64>| -> bool {
        let keys: Vec<u64> = orbit_exponents(e, a, ell, level)
            .into_iter()
            .map(|x| class_key(x, big_m))
            .collect();
        if keys.iter().any(|k| used.contains(k)) {
            return false;
        }
        used.extend(keys);
        out.push(e);
        true
    };
    for i in 0..k.min(ell) {
        if !take(1 + step * i, &mut used, &mut out) {
            return Err(Error::Degenerate(format!("orbit collision at eta_{}", i + 1)));
        }
    }
    if ell == 3 && k >= 4 && !take(2, &mut used, &mut out) {
        return Err(Error::Degenerate("orbit collision at eta_4 = zeta^2 + zeta^-2".into()));
    }
    let mut e = 2;
    while (out.len() as u64) < k {
        if e >= big_m {
            return Err(Error::LevelTooSmall {
                level,
                min: level + 1,
            });
        }
        if e % ell != 0 {
            take(e, &mut used, &mut out);
        }
        e += 1;
    }
    Ok(out)
}

/// A root of the hyperelliptic polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Root {
    /// `zeta^e + zeta^-e`.
    Cyc(u64),
    Rational(i64),
}

/// One factor of the discriminant, `u_i - u_j`, in certified form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiffFactor {
    Unit(FormalProduct),
    Rational(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCert {
    pub i: usize,
    pub j: usize,
    pub factor: DiffFactor,
    pub valuation: String,
    /// The factorization evaluates to the actual difference of roots.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultantCheck {
    /// `(-1)^(d(d-1)/2) Res(f, f')` equals the product of squared differences.
    pub discriminant_equal: bool,
    pub valuation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperModel {
    pub ell: u64,
    pub level: u32,
    pub genus: u64,
    pub k: u64,
    pub a: u64,
    pub h_divisor: Vec<HRoot>,
    pub eta_exponents: Vec<u64>,
    pub eta_list: Vec<FieldElem>,
    pub root_list: Vec<Root>,
    pub roots: Vec<FieldElem>,
    /// Monic, lowest degree first.
    pub poly_coeffs: Vec<FieldElem>,
    pub rational: bool,
    pub separable: bool,
    pub disc_cert: Vec<PairCert>,
    pub disc_valuation: String,
    pub resultant_check: Option<ResultantCheck>,
}

impl HyperModel {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn disc_complete(&self) -> bool {
        let d = self.roots.len();
        self.disc_cert.len() == d * (d - 1) / 2 && self.disc_cert.iter().all(|p| p.verified)
    }

    pub fn passed(&self) -> bool {
        let d = self.degree() as u64;
        self.rational
            && self.separable
            && self.disc_complete()
            && (d == 2 * self.genus + 1 || d == 2 * self.genus + 2)
            && self
                .resultant_check
                .as_ref()
                .is_none_or(|r| r.discriminant_equal && r.valuation == self.disc_valuation)
    }
}

/// Largest field degree at which the resultant cross-check runs.
pub const RESULTANT_CHECK_MAX_DIM: usize = 40;

fn root_value(ell: u64, level: u32, r: Root) -> Result<FieldElem> {
    match r {
        Root::Cyc(e) => {
            let z = FieldElem::zeta_pow(ell, level, e as i64)?;
            Ok(&z + &z.conj())
        }
        Root::Rational(c) => int(ell, level, c),
    }
}

/// `c - (b + 1/b)` for `b = zeta^y`, via `Phi_4`, `Phi_3`, `Phi_6`.
fn rational_minus_cyc(ell: u64, level: u32, c: i64, y: u64) -> FormalProduct {
    let m = match c {
        0 => 4,
        -1 => 3,
        _ => 6,
    };
    let mut p = phi_formal(ell, level, m, y as i64);
    p.zeta_exp -= y as i64;
    p.neg()
}

fn diff_factor(ell: u64, level: u32, u: Root, v: Root) -> DiffFactor {
    match (u, v) {
        (Root::Cyc(x), Root::Cyc(y)) => {
            let (x, y) = (x as i64, y as i64);
            let mut p = FormalProduct::new(ell, level, vec![(x + y, 1), (x - y, 1)]);
            p.zeta_exp = -x;
            DiffFactor::Unit(p)
        }
        (Root::Rational(c), Root::Cyc(y)) => DiffFactor::Unit(rational_minus_cyc(ell, level, c, y)),
        (Root::Cyc(x), Root::Rational(c)) => {
            DiffFactor::Unit(rational_minus_cyc(ell, level, c, x).neg())
        }
        (Root::Rational(c), Root::Rational(d)) => DiffFactor::Rational(c - d),
    }
}

fn diff_valuation(ell: u64, f: &DiffFactor) -> Result<RatVal> {
    match f {
        DiffFactor::Unit(p) => Ok(word_valuation(&normalize(p)?)),
        DiffFactor::Rational(c) => {
            let mut c = c.unsigned_abs();
            let mut v = 0;
            while c % ell == 0 {
                c /= ell;
                v += 1;
            }
            Ok(RatVal::from(v))
        }
    }
}

fn diff_value(ell: u64, level: u32, f: &DiffFactor) -> Result<FieldElem> {
    match f {
        DiffFactor::Unit(p) => p.evaluate(),
        DiffFactor::Rational(c) => int(ell, level, *c),
    }
}

// Dense polynomials over the field, lowest degree first.

fn poly_trim(mut p: Vec<FieldElem>) -> Vec<FieldElem> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_from_roots(ell: u64, level: u32, roots: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let mut p = vec![FieldElem::one(ell, level)?];
    for r in roots {
        let mut next = vec![FieldElem::zero(ell, level)?; p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * r);
        }
        p = next;
    }
    Ok(p)
}

fn poly_derivative(p: &[FieldElem]) -> Vec<FieldElem> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&BigRational::from_integer(BigInt::from(i))))
        .collect()
}

fn poly_rem(f: &[FieldElem], g: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let mut r = f.to_vec();
    let lc_inv = g.last().expect("nonzero divisor").inv()?;
    while r.len() >= g.len() && !r.is_empty() {
        let shift = r.len() - g.len();
        let q = r.last().unwrap() * &lc_inv;
        for (i, c) in g.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&q * c);
        }
        r.pop();
        r = poly_trim(r);
    }
    Ok(r)
}

/// Degree of `gcd(f, g)` by the Euclidean algorithm.
fn poly_gcd_degree(f: &[FieldElem], g: &[FieldElem]) -> Result<usize> {
    let (mut a, mut b) = (poly_trim(f.to_vec()), poly_trim(g.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b)?;
        a = b;
        b = r;
    }
    Ok(a.len().saturating_sub(1))
}

fn resultant(f: &[FieldElem], g: &[FieldElem]) -> Result<FieldElem> {
    let (ell, level) = (f[0].ell(), f[0].level());
    let (mut a, mut b) = (poly_trim(f.to_vec()), poly_trim(g.to_vec()));
    let mut acc = FieldElem::one(ell, level)?;
    loop {
        if b.is_empty() {
            return FieldElem::zero(ell, level);
        }
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            return Ok(&acc * &b[0].pow(da as i64)?);
        }
        let r = poly_rem(&a, &b)?;
        if r.is_empty() {
            return FieldElem::zero(ell, level);
        }
        let dr = r.len() - 1;
        acc = &acc * &b[db].pow((da - dr) as i64)?;
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        a = b;
        b = r;
    }
}

/// `Y^2 = h(X) prod_j prod_(sigma in G_n) (X - sigma(eta_j))`.
pub fn build_dn(ell: u64, genus: u64, level: u32, h_divisor: &[HRoot]) -> Result<HyperModel> {
    let mut h: Vec<HRoot> = h_divisor.to_vec();
    h.sort();
    h.dedup();
    let params = genus_params_with_h(ell, genus, h.len() as u64)?;
    if level < params.min_level {
        return Err(Error::LevelTooSmall {
            level,
            min: params.min_level,
        });
    }
    let a = generator_a(ell, level)?;
    let etas = eta_exponents(ell, level, params.k)?;
    let mut root_list: Vec<Root> = etas
        .iter()
        .flat_map(|&e| orbit_exponents(e, a, ell, level))
        .map(Root::Cyc)
        .collect();
    root_list.extend(h.iter().map(|r| Root::Rational(r.value())));
    if root_list.len() as u64 != params.degree {
        return Err(Error::Degenerate(format!(
            "{} roots for degree {}",
            root_list.len(),
            params.degree
        )));
    }
    let roots = root_list
        .iter()
        .map(|&r| root_value(ell, level, r))
        .collect::<Result<Vec<_>>>()?;
    let eta_list = etas
        .iter()
        .map(|&e| root_value(ell, level, Root::Cyc(e)))
        .collect::<Result<Vec<_>>>()?;
    let poly_coeffs = poly_from_roots(ell, level, &roots)?;
    let rational = poly_coeffs
        .iter()
        .map(|c| c.galois(a as i64).map(|g| &g == c))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let separable = poly_gcd_degree(&poly_coeffs, &poly_derivative(&poly_coeffs))? == 0;

    let d = roots.len();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    let disc_cert = pairs
        .par_iter()
        .map(|&(i, j)| {
            let factor = diff_factor(ell, level, root_list[i], root_list[j]);
            let verified = diff_value(ell, level, &factor)? == &roots[i] - &roots[j];
            Ok(PairCert {
                i,
                j,
                valuation: rat_string(diff_valuation(ell, &factor)?),
                factor,
                verified,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = RatVal::from(0);
    for p in &disc_cert {
        let f = diff_valuation(ell, &p.factor)?;
        total += f * 2;
    }
    let disc_valuation = rat_string(total);

    let resultant_check = if roots[0].dim() <= RESULTANT_CHECK_MAX_DIM {
        let mut res = resultant(&poly_coeffs, &poly_derivative(&poly_coeffs))?;
        if (d * (d - 1) / 2) % 2 == 1 {
            res = -res;
        }
        let mut prod = FieldElem::one(ell, level)?;
        for &(i, j) in &pairs {
            let diff = &roots[i] - &roots[j];
            prod = &prod * &(&diff * &diff);
        }
        Some(ResultantCheck {
            discriminant_equal: res == prod,
            valuation: rat_string(res.valuation()?),
        })
    } else {
        None
    };

    Ok(HyperModel {
        ell,
        level,
        genus,
        k: params.k,
        a,
        h_divisor: h,
        eta_exponents: etas,
        eta_list,
        root_list,
        roots,
        poly_coeffs,
        rational,
        separable,
        disc_cert,
        disc_valuation,
        resultant_check,
    })
}

// ------------------------------------------------------------ cross ratios

/// `(z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))`.
pub fn cross_ratio(z: [&FieldElem; 4]) -> Result<FieldElem> {
    for i in 0..4 {
        for j in i + 1..4 {
            if z[i] == z[j] {
                return Err(Error::Degenerate(format!("points {i} and {j} coincide")));
            }
        }
    }
    let num = &(z[0] - z[2]) * &(z[1] - z[3]);
    let den = &(z[0] - z[3]) * &(z[1] - z[2]);
    num.checked_div(&den)
}

/// Exact cross ratio of four rationals, for testing.
pub fn cross_ratio_q(z: [&BigRational; 4]) -> Result<BigRational> {
    let den = (z[0] - z[3]) * (z[1] - z[2]);
    if den.is_zero() || z[0] == z[2] || z[1] == z[3] {
        return Err(Error::Degenerate("repeated points".into()));
    }
    Ok((z[0] - z[2]) * (z[1] - z[3]) / den)
}

/// Cross ratio of `zeta^x_i + zeta^-x_i` as a formal product of `1 - zeta^s`.
pub fn cross_ratio_formal(ell: u64, level: u32, x: [u64; 4]) -> FormalProduct {
    let d = |i: usize, j: usize| match diff_factor(ell, level, Root::Cyc(x[i]), Root::Cyc(x[j])) {
        DiffFactor::Unit(p) => p,
        DiffFactor::Rational(_) => unreachable!(),
    };
    d(0, 2)
        .mul(&d(1, 3))
        .mul(&d(0, 3).inv())
        .mul(&d(1, 2).inv())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonisoCase {
    /// `k >= 2`, `ell >= 5`: roots `eta_1, mu(eta_1), eta_2, mu(eta_2)`.
    KAtLeastTwo,
    /// `k = 1`: roots `mu^i(eta_1)` with `a` avoiding the forbidden residues.
    KOne,
    /// `ell = 3`: roots `eta_1 .. eta_4` with `eta_4 = zeta^2 + zeta^-2`.
    EllThree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossRatioCert {
    pub ell: u64,
    pub genus: u64,
    pub level: u32,
    pub case: NonisoCase,
    pub a: u64,
    pub exponents: [u64; 4],
    pub roots_on_curve: bool,
    pub cross_ratio: FieldElem,
    pub formal: FormalProduct,
    pub word: UnitWord,
    /// The formal product evaluates to the directly computed cross ratio.
    pub field_consistent: bool,
    pub membership: MembershipCert,
    pub passed: bool,
}

/// Cross-ratio certificate that `D_n` is not isomorphic to any earlier layer.
pub fn noniso_certificate(ell: u64, genus: u64, level: u32) -> Result<CrossRatioCert> {
    let params = genus_params(ell, genus)?;
    if level < params.min_level {
        return Err(Error::LevelTooSmall {
            level,
            min: params.min_level,
        });
    }
    let big_m = ell.pow(level);
    let step = ell.pow(level - 1);
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % big_m as u128) as u64;
    let (case, a, exponents) = if ell == 3 {
        (NonisoCase::EllThree, generator_a(ell, level)?, [1, 1 + step, 1 + 2 * step, 2])
    } else if params.k >= 2 {
        let a = generator_a(ell, level)?;
        let b = 1 + step;
        (NonisoCase::KAtLeastTwo, a, [1, a, b, mulm(a, b)])
    } else {
        let a = count_lemma_pick(ell, level)?;
        let a2 = mulm(a, a);
        (NonisoCase::KOne, a, [1, a, a2, mulm(a2, a)])
    };
    let model = build_dn(ell, genus, level, &[])?;
    let keys: BTreeSet<u64> = model
        .root_list
        .iter()
        .filter_map(|r| match r {
            Root::Cyc(e) => Some(class_key(*e, big_m)),
            Root::Rational(_) => None,
        })
        .collect();
    let roots_on_curve = exponents.iter().all(|&e| keys.contains(&class_key(e, big_m)));
    let zs = exponents
        .iter()
        .map(|&e| root_value(ell, level, Root::Cyc(e)))
        .collect::<Result<Vec<_>>>()?;
    let cross = cross_ratio([&zs[0], &zs[1], &zs[2], &zs[3]])?;
    let formal = cross_ratio_formal(ell, level, exponents);
    let field_consistent = formal.evaluate()? == cross;
    let word = normalize(&formal)?;
    let membership = in_zetaVprev(&word)?;
    let passed = roots_on_curve && field_consistent && !membership.verdict;
    Ok(CrossRatioCert {
        ell,
        genus,
        level,
        case,
        a,
        exponents,
        roots_on_curve,
        cross_ratio: cross,
        formal,
        word,
        field_consistent,
        membership,
        passed,
    })
}

/// Search for a root permutation matching every ordered-quadruple cross ratio
/// of two models. `None` rules out an isomorphism over the algebraic closure.
pub fn cross_ratio_permutation(x: &HyperModel, y: &HyperModel) -> Result<Option<Vec<usize>>> {
    let d = x.degree();
    if d != y.degree() || x.ell != y.ell {
        return Ok(None);
    }
    if d > 6 {
        return Err(Error::Unsupported(format!("permutation search needs degree <= 6, got {d}")));
    }
    let level = x.level.max(y.level);
    let cyc = |m: &HyperModel| -> Result<Vec<u64>> {
        m.root_list
            .iter()
            .map(|r| match r {
                Root::Cyc(e) => Ok(*e),
                Root::Rational(_) => Err(Error::Unsupported("models with rational roots".into())),
            })
            .collect()
    };
    let quads: Vec<[usize; 4]> = (0..d)
        .flat_map(|p| (0..d).flat_map(move |q| (0..d).flat_map(move |r| (0..d).map(move |s| [p, q, r, s]))))
        .filter(|v| {
            let set: BTreeSet<usize> = v.iter().copied().collect();
            set.len() == 4
        })
        .collect();
    let words = |m: &HyperModel| -> Result<Vec<UnitWord>> {
        let ex = cyc(m)?;
        quads
            .par_iter()
            .map(|q| {
                let w = normalize(&cross_ratio_formal(m.ell, m.level, q.map(|i| ex[i])))?;
                embed_word(&w, level)
            })
            .collect()
    };
    let wx = words(x)?;
    let index = |q: [usize; 4]| quads.iter().position(|v| *v == q).expect("quadruple");
    let wy = words(y)?;
    let mut perm: Vec<usize> = (0..d).collect();
    loop {
        let ok = quads
            .iter()
            .enumerate()
            .all(|(qi, q)| wx[qi] == wy[index(q.map(|i| perm[i]))]);
        if ok {
            return Ok(Some(perm));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

// ------------------------------------------------------- isogeny obstruction

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyCert {
    pub ell: u64,
    pub n: u32,
    pub m: u32,
    pub a: u64,
    /// `(1 - zeta^(a+1)) (1 - zeta^(a-1))` at level n.
    pub word: UnitWord,
    pub membership: MembershipCert,
    /// The square of the word is in the subgroup, as it must be.
    pub square_membership: MembershipCert,
    pub passed: bool,
}

/// Parity obstruction to `(1 - zeta^(a+1))(1 - zeta^(a-1))` lying in
/// `<+-zeta, V_(n-1), V_n^2>`.
pub fn isogeny_obstruction(ell: u64, n: u32, m: u32) -> Result<IsogenyCert> {
    if hplus_lookup(ell).is_none() {
        return Err(Error::Unsupported(format!(
            "ell = {ell} is not in the odd plus-class-number table"
        )));
    }
    if m < 2 || n <= m {
        return Err(Error::Precondition(format!("need n > m >= 2, got n = {n}, m = {m}")));
    }
    let a = generator_a(ell, n)?;
    let p = FormalProduct::new(ell, n, vec![(a as i64 + 1, 1), (a as i64 - 1, 1)]);
    let word = normalize(&p)?;
    let membership = in_zetaVprevVsq(&word)?;
    let square_membership = in_zetaVprevVsq(&word_pow(&word, 2))?;
    let passed = !membership.verdict && square_membership.verdict;
    Ok(IsogenyCert {
        ell,
        n,
        m,
        a,
        word,
        membership,
        square_membership,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn legendre_minus_one() {
        let lam = FieldElem::from_int(5, 2, -1).unwrap();
        let c = legendre_from_field(&lam).unwrap();
        assert_eq!(c.j_inv.as_rational(), Some(q(1728, 1)));
        assert_eq!(c.discriminant.as_rational(), Some(q(64, 1)));
        let orbit: Vec<_> = legendre_orbit(&lam)
            .unwrap()
            .into_iter()
            .map(|v| v.as_rational().unwrap())
            .collect();
        assert_eq!(orbit, vec![q(-1, 1), q(-1, 1), q(2, 1), q(1, 2), q(1, 2), q(2, 1)]);
        assert!(legendre_from_field(&FieldElem::zero(5, 2).unwrap()).is_err());
    }

    #[test]
    fn genus_parameters() {
        let p = genus_params(11, 2).unwrap();
        assert_eq!((p.k, p.degree, p.min_level), (1, 5, 2));
        let p = genus_params(13, 2).unwrap();
        assert_eq!((p.k, p.degree), (1, 6));
        assert!(genus_params(11, 3).is_err());
        let p = genus_params(3, 2).unwrap();
        assert_eq!((p.k, p.min_level), (5, 3));
        let p = genus_params_with_h(7, 3, 1).unwrap();
        assert_eq!((p.k, p.degree), (2, 7));
    }

    #[test]
    fn cross_ratio_rational() {
        let z = [q(0, 1), q(2, 1), q(1, 1), q(3, 1)];
        assert_eq!(cross_ratio_q([&z[0], &z[1], &z[2], &z[3]]).unwrap(), q(-1, 3));
    }

    #[test]
    fn small_model() {
        let m = build_dn(5, 2, 2, &[]).unwrap();
        assert_eq!(m.degree(), 6);
        assert!(m.passed(), "{:?}", m.resultant_check);
    }

    #[test]
    fn isogeny_preconditions() {
        assert!(isogeny_obstruction(13, 3, 2).is_err());
        assert!(isogeny_obstruction(23, 2, 1).is_err());
    }
}
