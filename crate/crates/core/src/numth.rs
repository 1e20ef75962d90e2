//! Small-integer number theory shared by the other modules.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as (prime, multiplicity) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The exponent of `p` in `n`; `None` for `n == 0`.
pub fn ord_p(n: i128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i128;
    let mut n = n;
    let mut t = 0;
    while n % p == 0 {
        n /= p;
        t += 1;
    }
    Some(t)
}

/// Multiplicative order of `a` modulo `m`.
pub fn order_mod(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    let a = a.rem_euclid(m as i64) as u64;
    if gcd(a, m) != 1 {
        return Err(Error::Precondition(format!("gcd({a}, {m}) != 1")));
    }
    if m == 1 {
        return Ok(1);
    }
    let group = totient(m);
    let mut ord = group;
    for (p, _) in factorize(group) {
        while ord.is_multiple_of(p) && mod_pow(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Smallest positive primitive root modulo the odd prime `p` (or 1 for p = 2).
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    (2..p)
        .find(|&g| order_mod(g as i64, p) == Ok(p - 1))
        .ok_or_else(|| Error::Precondition(format!("no primitive root mod {p}")))
}

/// The unique element of order dividing ell-1 in (Z/ell^n)^x congruent to `a` mod ell.
pub fn teichmuller_lift(a: u64, ell: u64, n: u32) -> u64 {
    let modulus = ell.pow(n);
    mod_pow(a % ell, ell.pow(n - 1), modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(30), 8);
        assert_eq!(totient(125), 100);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(ord_p(250, 5), Some(3));
        assert_eq!(ord_p(0, 5), None);
    }

    #[test]
    fn orders_and_roots() {
        assert_eq!(order_mod(2, 11), Ok(10));
        assert_eq!(order_mod(2, 7), Ok(3));
        assert_eq!(order_mod(1, 9), Ok(1));
        assert!(order_mod(3, 9).is_err());
        assert_eq!(primitive_root(5), Ok(2));
        assert_eq!(primitive_root(7), Ok(3));
        assert_eq!(teichmuller_lift(2, 5, 2), 7);
        assert_eq!(mod_inverse(3, 7), Some(5));
    }
}
