//! Choice of coefficient field for rank computations.
//!
//! Everything in this crate is exact: either the rationals (the default) or a
//! prime field `F_p`. All matrices we ever reduce have small integer entries,
//! so "over Q" means fraction-free elimination on integers and "over F_p"
//! means elimination modulo `p`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coefficient field for homology and rank computations.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    /// The rational numbers.
    #[default]
    Rationals,
    /// The field with `p` elements; `p` must be prime.
    PrimeField(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse field spec {0:?}; expected \"q\" or \"p:PRIME\"")]
    Unparseable(String),
}

impl FieldSpec {
    /// Builds a prime-field spec, verifying primality.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// Parses the CLI syntax: `"q"` for the rationals, `"p:7"` for `F_7`.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = t.strip_prefix("p:").or_else(|| t.strip_prefix("P:")) {
            let p: u64 = rest
                .parse()
                .map_err(|_| FieldError::Unparseable(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(FieldError::Unparseable(s.to_string()))
    }

    /// The label used in JSON output: `"Q"` or `"Fp(7)"`.
    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::PrimeField(p) => format!("Fp({p})"),
        }
    }
}


impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Deterministic Miller-Rabin for `u64`.
///
/// The base set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to be
/// exact for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}
