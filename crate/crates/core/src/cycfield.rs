//! Exact arithmetic in Q(zeta) for zeta a primitive ell^n-th root of unity.
//!
//! Elements are stored in the power basis 1, zeta, ..., zeta^(N-1), with
//! N = phi(ell^n), as an integer numerator vector over one positive common
//! denominator. Reduction uses `Phi_{ell^n}(X) = Phi_ell(X^(ell^(n-1)))`, so it
//! costs O(N) per reduced monomial block instead of a general polynomial
//! remainder.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cycpoly::IntPoly;
use crate::error::{Error, Result};
use crate::numth::{gcd, is_prime, ord_p};

/// Exact valuation value.
pub type RatVal = Rational64;

/// Shape of the field Q(zeta_{ell^n}): `(N, M, m)` with `M = ell^n`,
/// `m = ell^(n-1)` and `N = phi(M)`.
pub fn field_shape(ell: u64, level: u32) -> Result<(usize, usize, usize)> {
    if !is_prime(ell) || level == 0 || (ell == 2 && level < 2) {
        return Err(Error::InvalidLevel { ell, level });
    }
    let big_m = ell
        .checked_pow(level)
        .filter(|&v| v <= 1 << 24)
        .ok_or(Error::InvalidLevel { ell, level })? as usize;
    let small_m = big_m / ell as usize;
    Ok((big_m - small_m, big_m, small_m))
}

/// Reduce an integer vector representing `sum v_i X^i` modulo `Phi_{ell^n}`.
fn reduce_vec(mut v: Vec<BigInt>, big_n: usize, big_m: usize, small_m: usize) -> Vec<BigInt> {
    if v.len() > big_m {
        let tail = v.split_off(big_m);
        for (i, c) in tail.into_iter().enumerate() {
            if !c.is_zero() {
                v[i % big_m] += c;
            }
        }
    }
    v.resize(big_m.max(v.len()), BigInt::zero());
    // X^i for N <= i < M equals -sum_{j=0}^{ell-2} X^{i-N+j*m}
    let ell_minus_1 = big_n / small_m;
    for i in big_n..big_m {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        for j in 0..ell_minus_1 {
            v[i - big_n + j * small_m] -= &c;
        }
    }
    v.truncate(big_n);
    v
}

/// Element of Q(zeta_{ell^n}).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    ell: u64,
    level: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    fn from_parts(ell: u64, level: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = FieldElem {
            ell,
            level,
            num,
            den,
        };
        e.normalise();
        e
    }

    fn normalise(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    fn shape(&self) -> (usize, usize, usize) {
        field_shape(self.ell, self.level).expect("validated at construction")
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Degree of the field over Q.
    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn zero(ell: u64, level: u32) -> Result<Self> {
        let (n, _, _) = field_shape(ell, level)?;
        Ok(FieldElem {
            ell,
            level,
            num: vec![BigInt::zero(); n],
            den: BigInt::one(),
        })
    }

    pub fn from_int(ell: u64, level: u32, c: impl Into<BigInt>) -> Result<Self> {
        Self::from_rational(ell, level, BigRational::from_integer(c.into()))
    }

    pub fn from_rational(ell: u64, level: u32, q: BigRational) -> Result<Self> {
        let mut z = Self::zero(ell, level)?;
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z.normalise();
        Ok(z)
    }

    pub fn one(ell: u64, level: u32) -> Result<Self> {
        Self::from_int(ell, level, 1)
    }

    /// `zeta^e` for any integer `e`.
    pub fn zeta_pow(ell: u64, level: u32, e: i64) -> Result<Self> {
        let (n, big_m, small_m) = field_shape(ell, level)?;
        let idx = e.rem_euclid(big_m as i64) as usize;
        let mut v = vec![BigInt::zero(); big_m];
        v[idx] = BigInt::one();
        Ok(FieldElem {
            ell,
            level,
            num: reduce_vec(v, n, big_m, small_m),
            den: BigInt::one(),
        })
    }

    /// `1 - zeta^e`.
    pub fn one_minus_zeta_pow(ell: u64, level: u32, e: i64) -> Result<Self> {
        Ok(&Self::one(ell, level)? - &Self::zeta_pow(ell, level, e)?)
    }

    /// Reduce a rational-coefficient polynomial in zeta.
    pub fn reduce(ell: u64, level: u32, poly: &[BigRational]) -> Result<Self> {
        let (n, big_m, small_m) = field_shape(ell, level)?;
        let den = poly
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let v: Vec<BigInt> = poly
            .iter()
            .map(|q| q.numer() * (&den / q.denom()))
            .collect();
        Ok(Self::from_parts(
            ell,
            level,
            reduce_vec(v, n, big_m, small_m),
            den,
        ))
    }

    /// Evaluate an integer polynomial at `zeta^s`.
    pub fn eval_int_poly(ell: u64, level: u32, poly: &IntPoly, s: i64) -> Result<Self> {
        let (n, big_m, small_m) = field_shape(ell, level)?;
        let mut v = vec![BigInt::zero(); big_m];
        for (i, c) in poly.coeffs().iter().enumerate() {
            let idx = (i as i128 * s as i128).rem_euclid(big_m as i128) as usize;
            v[idx] += c;
        }
        Ok(Self::from_parts(
            ell,
            level,
            reduce_vec(v, n, big_m, small_m),
            BigInt::one(),
        ))
    }

    /// Coefficients in the power basis.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check_same(&self, other: &FieldElem) -> Result<()> {
        if self.ell != other.ell || self.level != other.level {
            return Err(Error::LevelMismatch {
                ell_a: self.ell,
                level_a: self.level,
                ell_b: other.ell,
                level_b: other.level,
            });
        }
        Ok(())
    }

    fn add_sub(&self, other: &FieldElem, sign: i32) -> FieldElem {
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                if sign > 0 {
                    a * &fa + b * &fb
                } else {
                    a * &fa - b * &fb
                }
            })
            .collect();
        Self::from_parts(self.ell, self.level, num, l)
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        Ok(self.add_sub(other, 1))
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        Ok(self.add_sub(other, -1))
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        let (n, big_m, small_m) = self.shape();
        let mut v = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_parts(
            self.ell,
            self.level,
            reduce_vec(v, n, big_m, small_m),
            &self.den * &other.den,
        ))
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn arith(&self, other: &FieldElem, op: ArithOp) -> Result<FieldElem> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElem {
        Self::from_parts(
            self.ell,
            self.level,
            self.num.iter().map(|c| c * q.numer()).collect(),
            &self.den * q.denom(),
        )
    }

    /// `self * zeta^e` by index shift.
    pub fn mul_zeta_pow(&self, e: i64) -> FieldElem {
        let (n, big_m, small_m) = self.shape();
        let shift = e.rem_euclid(big_m as i64) as usize;
        let mut v = vec![BigInt::zero(); big_m];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[(i + shift) % big_m] = c.clone();
            }
        }
        FieldElem {
            ell: self.ell,
            level: self.level,
            num: reduce_vec(v, n, big_m, small_m),
            den: self.den.clone(),
        }
    }

    /// `self * (1 - zeta^e)` in linear time.
    pub fn mul_one_minus_zeta_pow(&self, e: i64) -> FieldElem {
        self.add_sub(&self.mul_zeta_pow(e), -1)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.ell, self.level)?;
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&b)?;
            }
            k >>= 1;
            if k > 0 {
                b = b.checked_mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// The automorphism `zeta -> zeta^s`.
    pub fn galois(&self, s: i64) -> Result<FieldElem> {
        if s.rem_euclid(self.ell as i64) == 0 {
            return Err(Error::NotCoprime { s, ell: self.ell });
        }
        let (n, big_m, small_m) = self.shape();
        let s = s.rem_euclid(big_m as i64) as usize;
        let mut v = vec![BigInt::zero(); big_m];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[(i * s) % big_m] = c.clone();
            }
        }
        Ok(FieldElem {
            ell: self.ell,
            level: self.level,
            num: reduce_vec(v, n, big_m, small_m),
            den: self.den.clone(),
        })
    }

    /// Complex conjugation.
    pub fn conj(&self) -> FieldElem {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Image under `zeta_{ell^n} -> zeta_{ell^h}^{ell^(h-n)}`.
    pub fn embed(&self, higher_level: u32) -> Result<FieldElem> {
        if higher_level < self.level {
            return Err(Error::LevelDecrease {
                from: self.level,
                to: higher_level,
            });
        }
        let (n, _, _) = field_shape(self.ell, higher_level)?;
        let step = (self.ell as usize).pow(higher_level - self.level);
        let mut num = vec![BigInt::zero(); n];
        for (i, c) in self.num.iter().enumerate() {
            num[i * step] = c.clone();
        }
        Ok(FieldElem {
            ell: self.ell,
            level: higher_level,
            num,
            den: self.den.clone(),
        })
    }

    /// Whether the base field of the tower below this level is Q itself.
    fn bottom_level(&self) -> bool {
        self.level == 1 || (self.ell == 2 && self.level == 2)
    }

    /// Product of the nontrivial conjugates over the next field down the
    /// tower (over Q at the bottom), and the relative norm it produces.
    fn relative_norm_cofactor(&self) -> (FieldElem, FieldElem) {
        let (_, big_m, small_m) = self.shape();
        let exps: Vec<i64> = if self.bottom_level() {
            (2..big_m as i64)
                .filter(|&s| gcd(s as u64, self.ell) == 1)
                .collect()
        } else {
            (1..self.ell as i64)
                .map(|i| 1 + i * small_m as i64)
                .collect()
        };
        let mut p = Self::one(self.ell, self.level).expect("valid level");
        for s in exps {
            p = p
                .checked_mul(&self.galois(s).expect("unit exponent"))
                .expect("same level");
        }
        let rel = self.checked_mul(&p).expect("same level");
        (p, rel)
    }

    /// Restrict an element known to lie in the level-(n-1) subfield.
    fn descend(&self) -> FieldElem {
        let ell = self.ell as usize;
        let (n_low, _, _) = field_shape(self.ell, self.level - 1).expect("lower level valid");
        let num: Vec<BigInt> = (0..n_low).map(|j| self.num[j * ell].clone()).collect();
        debug_assert!(self
            .num
            .iter()
            .enumerate()
            .all(|(i, c)| i % ell == 0 || c.is_zero()));
        FieldElem {
            ell: self.ell,
            level: self.level - 1,
            num,
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse via relative norms down the tower.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (p, rel) = self.relative_norm_cofactor();
        if self.bottom_level() {
            let q = rel
                .as_rational()
                .expect("norm to Q is rational");
            return Ok(p.scale(&q.recip()));
        }
        let low_inv = rel.descend().inv()?;
        p.checked_mul(&low_inv.embed(self.level)?)
    }

    /// Absolute norm to Q.
    pub fn norm(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (_, rel) = self.relative_norm_cofactor();
        if self.bottom_level() {
            rel.as_rational().expect("norm to Q is rational")
        } else {
            rel.descend().norm()
        }
    }

    /// The ell-adic valuation, normalised so that `v(ell) = 1`.
    ///
    /// The numerator vector is made primitive (its content contributes
    /// `ord_ell(content)`), then divided by `1 - zeta` until the sum of the
    /// coefficients is no longer divisible by ell.
    pub fn valuation(&self) -> Result<RatVal> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let (n, _, small_m) = self.shape();
        let ell = BigInt::from(self.ell);
        let content = self.num.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let whole = big_ord(&content, &ell) as i64 - big_ord(&self.den, &ell) as i64;
        let mut a: Vec<BigInt> = self.num.iter().map(|c| c / &content).collect();
        let mut steps = 0i64;
        loop {
            let s: BigInt = a.iter().sum();
            let (t, r) = s.div_rem(&ell);
            if !r.is_zero() {
                break;
            }
            // a(X) - t*Phi(X) vanishes at 1; divide by 1 - X
            let mut prev = BigInt::zero();
            for (i, c) in a.iter_mut().enumerate() {
                let mut b = &*c + &prev;
                if i % small_m == 0 {
                    b -= &t;
                }
                prev = b.clone();
                *c = b;
            }
            steps += 1;
            debug_assert!(steps < n as i64, "primitive element has valuation < 1");
        }
        Ok(RatVal::new(whole * n as i64 + steps, n as i64))
    }

    /// Serialisable view.
    pub fn to_json_value(&self) -> FieldElemJson {
        FieldElemJson {
            ell: self.ell,
            level: self.level,
            coeffs: self.coeffs().iter().map(ratio_string).collect(),
        }
    }

    pub fn from_json_value(j: &FieldElemJson) -> Result<FieldElem> {
        let (n, _, _) = field_shape(j.ell, j.level)?;
        if j.coeffs.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} coefficients, found {}",
                j.coeffs.len()
            )));
        }
        let qs = j
            .coeffs
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()?;
        Self::reduce(j.ell, j.level, &qs)
    }
}

fn big_ord(x: &BigInt, p: &BigInt) -> u32 {
    let mut x = x.abs();
    let mut t = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() || x.is_zero() {
            return t;
        }
        x = q;
        t += 1;
    }
}

pub fn ratio_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// JSON shape `{ell, level, coeffs: ["p/q", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldElemJson {
    pub ell: u64,
    pub level: u32,
    pub coeffs: Vec<String>,
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FieldElemJson::deserialize(d)?;
        FieldElem::from_json_value(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = IntPoly::new(self.num.clone()).to_string().replace('x', "z");
        if self.den.is_one() {
            write!(f, "{poly}")
        } else {
            write!(f, "({poly})/{}", self.den)
        }
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect(concat!("FieldElem ", stringify!($method)))
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            ell: self.ell,
            level: self.level,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

/// Closed form `v(1 - zeta^s) = 1 / (ell^(n-1-t) (ell - 1))` with `t = ord_ell(s)`.
pub fn valuation_formula(ell: u64, level: u32, s: i64) -> Result<RatVal> {
    field_shape(ell, level)?;
    let t = ord_p(s as i128, ell).unwrap_or(u32::MAX);
    if t >= level {
        return Err(Error::FormulaInapplicable { s, t, level });
    }
    let den = (ell as i64).pow(level - 1 - t) * (ell as i64 - 1);
    Ok(RatVal::new(1, den))
}

/// A simple root of an integer polynomial in Z_ell, known modulo ell^precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicRoot {
    pub ell: u64,
    pub precision: u32,
    pub residue: BigInt,
    pub defining_poly: IntPoly,
}

impl PadicRoot {
    /// The root modulo `ell^n`; requires `n <= precision`.
    pub fn residue_mod(&self, n: u32) -> Result<u64> {
        if n > self.precision {
            return Err(Error::Precision {
                have: self.precision,
                need: n,
            });
        }
        let modulus = BigInt::from(self.ell).pow(n);
        self.residue
            .mod_floor(&modulus)
            .to_u64()
            .ok_or_else(|| Error::Precondition("residue does not fit in 64 bits".into()))
    }
}

/// Newton iteration lifting a simple root `r0` of `f` modulo ell to modulo `ell^precision`.
pub fn hensel_root(f: &IntPoly, ell: u64, r0: i64, precision: u32) -> Result<PadicRoot> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if precision == 0 {
        return Err(Error::HenselPrecondition("precision must be positive".into()));
    }
    let p = BigInt::from(ell);
    let mut r = BigInt::from(r0).mod_floor(&p);
    if !f.eval(&r).mod_floor(&p).is_zero() {
        return Err(Error::HenselPrecondition(format!(
            "{r0} is not a root modulo {ell}"
        )));
    }
    let df = f.derivative();
    let d0 = df.eval(&r).mod_floor(&p);
    if d0.is_zero() {
        return Err(Error::HenselPrecondition(format!(
            "{r0} is a multiple root modulo {ell}"
        )));
    }
    let target = p.pow(precision);
    let mut modulus = p.clone();
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let d = df.eval(&r).mod_floor(&modulus);
        let dinv = d
            .extended_gcd(&modulus)
            .x
            .mod_floor(&modulus);
        r = (&r - f.eval(&r) * dinv).mod_floor(&modulus);
    }
    debug_assert!(f.eval(&r).mod_floor(&target).is_zero());
    Ok(PadicRoot {
        ell,
        precision,
        residue: r,
        defining_poly: f.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn reduction() {
        let mut x5 = vec![q(0); 6];
        x5[5] = q(1);
        assert!(FieldElem::reduce(5, 1, &x5).unwrap().is_one());
        let mut v = vec![q(0); 7];
        v[6] = q(1);
        v[3] = q(1);
        assert_eq!(
            FieldElem::reduce(3, 2, &v).unwrap(),
            FieldElem::from_int(3, 2, -1).unwrap()
        );
        let x2 = vec![q(0), q(0), q(1)];
        assert_eq!(
            FieldElem::reduce(2, 2, &x2).unwrap(),
            FieldElem::from_int(2, 2, -1).unwrap()
        );
        assert!(FieldElem::zero(2, 1).is_err());
        assert!(FieldElem::zero(4, 2).is_err());
    }

    #[test]
    fn basic_products() {
        let mut p = FieldElem::one(5, 1).unwrap();
        for e in 1..5 {
            p = &p * &FieldElem::one_minus_zeta_pow(5, 1, e).unwrap();
        }
        assert_eq!(p, FieldElem::from_int(5, 1, 5).unwrap());
        let z = FieldElem::zeta_pow(3, 2, 1).unwrap();
        assert!((&z * &FieldElem::zeta_pow(3, 2, 8).unwrap()).is_one());
        assert_eq!(
            z.checked_div(&FieldElem::zero(3, 2).unwrap()),
            Err(Error::DivisionByZero)
        );
        assert!(z.checked_add(&FieldElem::one(3, 3).unwrap()).is_err());
    }

    #[test]
    fn inverses() {
        for (ell, n) in [(2, 2), (2, 3), (3, 1), (3, 2), (5, 2), (7, 1)] {
            let a = &FieldElem::one_minus_zeta_pow(ell, n, 1).unwrap()
                + &FieldElem::zeta_pow(ell, n, 3).unwrap().scale(&q(7));
            let inv = a.inv().unwrap();
            assert!((&a * &inv).is_one(), "ell={ell} n={n}");
        }
    }

    #[test]
    fn embedding_and_galois() {
        let z5 = FieldElem::zeta_pow(5, 1, 1).unwrap();
        assert_eq!(z5.embed(2).unwrap(), FieldElem::zeta_pow(5, 2, 5).unwrap());
        assert_eq!(z5.embed(1).unwrap(), z5);
        assert!(z5.embed(2).unwrap().embed(1).is_err());
        let z = FieldElem::zeta_pow(5, 2, 1).unwrap();
        assert_eq!(z.galois(7).unwrap(), FieldElem::zeta_pow(5, 2, 7).unwrap());
        assert!(z.galois(10).is_err());
    }

    #[test]
    fn valuations() {
        let v = |ell, n, s| {
            FieldElem::one_minus_zeta_pow(ell, n, s)
                .unwrap()
                .valuation()
                .unwrap()
        };
        assert_eq!(v(5, 2, 1), RatVal::new(1, 20));
        assert_eq!(v(5, 2, 5), RatVal::new(1, 4));
        assert_eq!(v(3, 2, 3), RatVal::new(1, 2));
        assert_eq!(
            FieldElem::from_rational(5, 2, BigRational::new(10.into(), 3.into()))
                .unwrap()
                .valuation()
                .unwrap(),
            RatVal::new(1, 1)
        );
        assert_eq!(valuation_formula(5, 2, 1), Ok(RatVal::new(1, 20)));
        assert_eq!(valuation_formula(3, 2, 3), Ok(RatVal::new(1, 2)));
        assert!(valuation_formula(5, 2, 25).is_err());
        assert!(FieldElem::zero(5, 2).unwrap().valuation().is_err());
    }

    #[test]
    fn hensel() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(hensel_root(&f, 5, 2, 2).unwrap().residue, BigInt::from(7));
        assert_eq!(hensel_root(&f, 5, 2, 3).unwrap().residue, BigInt::from(57));
        let g = IntPoly::from_i64(&[1, 1, 1]);
        assert_eq!(hensel_root(&g, 7, 2, 2).unwrap().residue, BigInt::from(30));
        assert!(hensel_root(&f, 5, 1, 2).is_err());
        let r = hensel_root(&f, 5, 2, 2).unwrap();
        assert_eq!(r.residue_mod(1), Ok(2));
        assert!(r.residue_mod(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = FieldElem::one_minus_zeta_pow(3, 2, 2)
            .unwrap()
            .scale(&BigRational::new(2.into(), 9.into()));
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"coeffs\":[\"2/9\""));
        let b: FieldElem = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
