//! Exact rationals, primes and p-adic valuations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "num/den" or "num".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Print a rational as "num" or "num/den".
pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A p-adic valuation: an integer for nonzero inputs, `Infinity` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Val {
    Finite(i64),
    Infinity,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinity => None,
        }
    }

    pub fn is_nonneg(self) -> bool {
        match self {
            Val::Finite(v) => v >= 0,
            Val::Infinity => true,
        }
    }

    pub fn min(self, other: Val) -> Val {
        match (self, other) {
            (Val::Infinity, v) | (v, Val::Infinity) => v,
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a.min(b)),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinity => write!(f, "inf"),
        }
    }
}

/// The local data: a prime p standing in for the uniformiser, with
/// valuation `v_p` and residue field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalContext {
    p: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {0} is not p-integral at p={1}")]
    NonIntegralCoefficient(String, u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl LocalContext {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if is_prime(p) {
            Ok(LocalContext { p })
        } else {
            Err(ArithError::NotPrime(p))
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn prime_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// v_p of an integer; `Infinity` for zero.
    pub fn val_int(&self, n: &BigInt) -> Val {
        if n.is_zero() {
            return Val::Infinity;
        }
        let p = self.prime_big();
        let mut n = n.abs();
        let mut v = 0i64;
        loop {
            let (q, r) = n.div_rem(&p);
            if r.is_zero() {
                v += 1;
                n = q;
            } else {
                return Val::Finite(v);
            }
        }
    }

    /// The p-adic valuation of a rational.
    pub fn valuation(&self, x: &Rat) -> Val {
        if x.is_zero() {
            return Val::Infinity;
        }
        let vn = self.val_int(x.numer()).finite().unwrap();
        let vd = self.val_int(x.denom()).finite().unwrap();
        Val::Finite(vn - vd)
    }

    /// Reduce a p-integral rational to its residue in [0, p).
    pub fn residue(&self, x: &Rat) -> Result<u64, ArithError> {
        if !self.valuation(x).is_nonneg() {
            return Err(ArithError::NonIntegralCoefficient(
                rat_string(x),
                self.p,
            ));
        }
        let p = self.prime_big();
        let num = x.numer().mod_floor(&p);
        let den = x.denom().mod_floor(&p);
        let num_u = num.to_string().parse::<u64>().unwrap();
        let den_u = den.to_string().parse::<u64>().unwrap();
        let inv = mod_inverse(den_u, self.p).expect("denominator is a p-unit");
        Ok(mulmod(num_u, inv, self.p))
    }
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    Some(powmod(a, p - 2, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_prime_power() {
        let ctx = LocalContext::new(2).unwrap();
        assert_eq!(ctx.valuation(&rat_i64(8)), Val::Finite(3));
    }

    #[test]
    fn valuation_zero_is_infinity() {
        let ctx = LocalContext::new(5).unwrap();
        assert_eq!(ctx.valuation(&rat_i64(0)), Val::Infinity);
    }

    #[test]
    fn valuation_fraction() {
        // 45/14 = 3^2 * 5 / (2 * 7), so v_7 = -1.
        let ctx = LocalContext::new(7).unwrap();
        assert_eq!(ctx.valuation(&rat(45, 14)), Val::Finite(-1));
    }

    #[test]
    fn valuation_multiplicative() {
        let ctx = LocalContext::new(3).unwrap();
        let x = rat(18, 5);
        let y = rat(10, 27);
        let vx = ctx.valuation(&x).finite().unwrap();
        let vy = ctx.valuation(&y).finite().unwrap();
        assert_eq!(ctx.valuation(&(x * y)), Val::Finite(vx + vy));
    }

    #[test]
    fn residue_of_fraction() {
        // 3/2 mod 5: 3 * inverse(2) = 3 * 3 = 9 = 4.
        let ctx = LocalContext::new(5).unwrap();
        assert_eq!(ctx.residue(&rat(3, 2)).unwrap(), 4);
    }

    #[test]
    fn composite_rejected() {
        assert!(LocalContext::new(6).is_err());
        assert!(LocalContext::new(1).is_err());
    }
}
