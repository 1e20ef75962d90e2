//! Integer polynomials, cyclotomic polynomials and super-cyclotomic products.
//!
//! A super-cyclotomic polynomial is `X^e * prod Phi_m^c`. The ternary
//! relations `F - G = k H` searched for elsewhere live entirely in this
//! representation, so it carries its own canonical form and text syntax.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{divisors, mobius, totient};

/// Dense polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * X^d`
    pub fn monomial(c: BigInt, d: usize) -> Self {
        let mut v = vec![BigInt::zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    /// `X^d - 1`
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut v = vec![BigInt::zero(); d + 1];
        v[0] = BigInt::from(-1);
        v[d] += BigInt::one();
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division; `None` unless `other` divides `self` in Z[X].
    pub fn div_exact(&self, other: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_integral(other)?;
        r.is_zero().then_some(q)
    }

    /// Long division that succeeds as long as every quotient coefficient is integral.
    fn div_rem_integral(&self, other: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        let dd = other.degree()?;
        let lead = other.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (c, r) = rem[i].div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * b;
            }
            q[i - dd] = c;
        }
        Some((Self::new(q), Self::new(rem)))
    }

    /// `self(X^k)`
    pub fn substitute_power(&self, k: usize) -> IntPoly {
        assert!(k >= 1, "substitution exponent must be positive");
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(v)
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Greatest common divisor in Z[X], normalised to positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return normalise_sign(other.clone());
        }
        if other.is_zero() {
            return normalise_sign(self.clone());
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        // primitive pseudo-remainder sequence
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&content)
    }

    fn pseudo_rem(&self, other: &IntPoly) -> IntPoly {
        let dd = other.degree().expect("pseudo-remainder by zero");
        let lead = other.leading();
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let c = rem.leading();
            let shifted = IntPoly::monomial(c, dr - dd).mul(other);
            rem = rem.scale(&lead).sub(&shifted);
        }
        rem
    }
}

fn normalise_sign(p: IntPoly) -> IntPoly {
    if p.leading().is_negative() {
        p.scale(&BigInt::from(-1))
    } else {
        p
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{abs}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Parses sums of terms like `3*x^2`, `-x`, `7`, with `x` or `X`.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !cleaned[..i].ends_with('^') {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let bad = || Error::Parse(format!("bad term '{term}'"));
            let (coef, deg) = match body.find(['x', 'X']) {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let c = match &body[..pos] {
                        "" => BigInt::one(),
                        pre => pre
                            .strip_suffix('*')
                            .ok_or_else(bad)?
                            .parse::<BigInt>()
                            .map_err(|_| bad())?,
                    };
                    let d = match &body[pos + 1..] {
                        "" => 1,
                        rest => rest
                            .strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<usize>()
                            .map_err(|_| bad())?,
                    };
                    (c, d)
                }
            };
            *acc.entry(deg).or_default() += if neg { -coef } else { coef };
        }
        let top = acc.keys().next_back().copied().unwrap_or(0);
        let mut v = vec![BigInt::zero(); top + 1];
        for (d, c) in acc {
            v[d] = c;
        }
        Ok(IntPoly::new(v))
    }
}

/// The m-th cyclotomic polynomial, via the Moebius product of `X^d - 1`.
pub fn cyclotomic(m: u64) -> IntPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in divisors(m) {
        match mobius(m / d) {
            1 => num = num.mul(&IntPoly::x_pow_minus_one(d as usize)),
            -1 => den = den.mul(&IntPoly::x_pow_minus_one(d as usize)),
            _ => {}
        }
    }
    num.div_exact(&den)
        .expect("Moebius quotient is always exact")
}

/// `X^x_power * prod Phi_m^e`, factors sorted by `m` with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SuperCyc {
    pub x_power: u32,
    pub factors: Vec<(u64, u32)>,
}

impl SuperCyc {
    pub fn new(x_power: u32, factors: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut map: BTreeMap<u64, u32> = BTreeMap::new();
        for (m, e) in factors {
            assert!(m >= 1, "cyclotomic index must be positive");
            if e > 0 {
                *map.entry(m).or_default() += e;
            }
        }
        SuperCyc {
            x_power,
            factors: map.into_iter().collect(),
        }
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn degree(&self) -> u64 {
        self.x_power as u64
            + self
                .factors
                .iter()
                .map(|&(m, e)| e as u64 * totient(m))
                .sum::<u64>()
    }

    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::monomial(BigInt::one(), self.x_power as usize);
        for &(m, e) in &self.factors {
            acc = acc.mul(&cyclotomic(m).pow(e));
        }
        acc
    }

    pub fn mul(&self, other: &SuperCyc) -> SuperCyc {
        SuperCyc::new(
            self.x_power + other.x_power,
            self.factors.iter().chain(other.factors.iter()).copied(),
        )
    }

    /// The product with X replaced by X^k, rewritten as a canonical product.
    ///
    /// The exponent of `Phi_e` in `Phi_m(X^k)` is the sum of `mu(m/d)` over the
    /// divisors `d` of `m` with `e | dk`.
    pub fn substitute_power(&self, k: u64) -> SuperCyc {
        assert!(k >= 1, "substitution exponent must be positive");
        let mut out: Vec<(u64, u32)> = Vec::new();
        for &(m, e) in &self.factors {
            for (idx, c) in phi_of_power(m, k) {
                out.push((idx, c * e));
            }
        }
        SuperCyc::new(self.x_power * k as u32, out)
    }
}

/// Factorisation of `Phi_m(X^k)` into cyclotomic polynomials.
pub fn phi_of_power(m: u64, k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for e in divisors(m * k) {
        let c: i32 = divisors(m)
            .into_iter()
            .filter(|&d| (d * k).is_multiple_of(e))
            .map(|d| mobius(m / d))
            .sum();
        if c < 0 {
            unreachable!("cyclotomic factor exponents are non-negative");
        }
        if c > 0 {
            out.push((e, c as u32));
        }
    }
    out
}

impl fmt::Display for SuperCyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.x_power > 0 {
            parts.push(format!("X^{}", self.x_power));
        }
        for &(m, e) in &self.factors {
            if e == 1 {
                parts.push(format!("Phi{m}"));
            } else {
                parts.push(format!("Phi{m}^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

impl FromStr for SuperCyc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(SuperCyc::one());
        }
        let mut x_power = 0u32;
        let mut factors = Vec::new();
        for part in s.split('*').map(str::trim) {
            let bad = || Error::Parse(format!("bad factor '{part}'"));
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (part, 1),
            };
            if base == "X" || base == "x" {
                x_power += exp;
            } else if let Some(idx) = base.strip_prefix("Phi") {
                let m = idx.parse::<u64>().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                factors.push((m, exp));
            } else {
                return Err(bad());
            }
        }
        Ok(SuperCyc::new(x_power, factors))
    }
}

/// Outcome of checking `F - G = k H` together with `gcd(F, G, H) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub equality: bool,
    pub gcd: IntPoly,
    pub coprime: bool,
}

impl VerifyReport {
    pub fn holds(&self) -> bool {
        self.equality && self.coprime
    }
}

pub fn verify_ternary(f: &SuperCyc, g: &SuperCyc, h: &SuperCyc, k: i64) -> VerifyReport {
    let (ef, eg, eh) = (f.expand(), g.expand(), h.expand());
    let equality = ef.sub(&eg) == eh.scale(&BigInt::from(k));
    let gcd = ef.gcd(&eg).gcd(&eh);
    let coprime = gcd == IntPoly::one();
    VerifyReport {
        equality,
        gcd,
        coprime,
    }
}

/// The nine ternary identities `F - G = k H` among super-cyclotomic polynomials
/// of small degree, as `(F, G, H, k)`.
pub fn known_identities() -> Vec<(SuperCyc, SuperCyc, SuperCyc, i64)> {
    let sc = |x: u32, f: &[(u64, u32)]| SuperCyc::new(x, f.iter().copied());
    vec![
        (sc(0, &[(2, 2)]), sc(0, &[(3, 1)]), sc(1, &[]), 1),
        (sc(0, &[(2, 2)]), sc(0, &[(4, 1)]), sc(1, &[]), 2),
        (sc(0, &[(2, 2)]), sc(0, &[(6, 1)]), sc(1, &[]), 3),
        (sc(0, &[(2, 2)]), sc(0, &[(1, 2)]), sc(1, &[]), 4),
        (sc(0, &[(2, 4)]), sc(0, &[(10, 1)]), sc(1, &[(3, 1)]), 5),
        (
            sc(0, &[(2, 2), (3, 1)]),
            sc(0, &[(1, 2), (6, 1)]),
            sc(1, &[(4, 1)]),
            6,
        ),
        (sc(0, &[(7, 1)]), sc(0, &[(1, 6)]), sc(1, &[(6, 2)]), 7),
        (sc(0, &[(2, 4)]), sc(0, &[(1, 4)]), sc(1, &[(4, 1)]), 8),
        (
            sc(0, &[(2, 4), (5, 1)]),
            sc(0, &[(1, 4), (10, 1)]),
            sc(1, &[(4, 3)]),
            10,
        ),
    ]
}

/// Bivariate integer polynomial, keyed by `(deg_x, deg_y)`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BivarPoly {
    pub terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivarPoly {
    /// `Y` set to 1.
    pub fn dehomogenize(&self) -> IntPoly {
        let mut v: Vec<BigInt> = Vec::new();
        for (&(dx, _), c) in &self.terms {
            let dx = dx as usize;
            if v.len() <= dx {
                v.resize(dx + 1, BigInt::zero());
            }
            v[dx] += c;
        }
        IntPoly::new(v)
    }

    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|&(a, b)| a + b == d)
    }
}

/// Homogenisation `Y^phi(m) Phi_m(X/Y)` of the m-th cyclotomic polynomial.
pub fn psi(m: u64) -> BivarPoly {
    let phi = cyclotomic(m);
    let d = phi.degree().unwrap_or(0) as u32;
    let terms = phi
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| ((i as u32, d - i as u32), c.clone()))
        .collect();
    BivarPoly { terms }
}
