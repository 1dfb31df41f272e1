//! Ground fields: the rationals, or a prime field `F_p` with `2 < p < 2^62`.
//!
//! Field elements travel through the public API as [`BigRational`] values. Over
//! `F_p` they are always stored in canonical form: an integer in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The Mersenne prime `2^61 - 1`, used whenever a prime is requested as `auto`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldConfig {
    Rational,
    Prime(u64),
}

impl FieldConfig {
    /// Prime field `F_p`. Rejects composites and moduli outside `(2, 2^62)`.
    pub fn prime(p: u64) -> Result<Self> {
        if p <= 2 || p >= (1 << 62) || !primal_check::miller_rabin(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldConfig::Prime(p))
    }

    pub fn is_prime(&self) -> bool {
        matches!(self, FieldConfig::Prime(_))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            FieldConfig::Rational => None,
            FieldConfig::Prime(p) => Some(*p),
        }
    }

    /// Short label used in reports: `Q` or `F_p`.
    pub fn label(&self) -> String {
        match self {
            FieldConfig::Rational => "Q".to_string(),
            FieldConfig::Prime(p) => format!("F_{p}"),
        }
    }

    /// Maps a rational into the field's canonical representation.
    pub fn normalize(&self, x: &BigRational) -> Result<BigRational> {
        match self {
            FieldConfig::Rational => Ok(x.clone()),
            FieldConfig::Prime(p) => reduce_mod(x, *p)
                .map(|r| BigRational::from_integer(BigInt::from(r)))
                .ok_or_else(|| Error::InvalidParameter(format!("denominator of {x} vanishes modulo {p}"))),
        }
    }

    pub fn from_i64(&self, x: i64) -> BigRational {
        self.normalize(&BigRational::from_integer(BigInt::from(x))).expect("integers always reduce")
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.normalize(&(a + b)).expect("closed under addition")
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.normalize(&(a * b)).expect("closed under multiplication")
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.normalize(&-a).expect("closed under negation")
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Residue of `x` modulo `p`, or `None` when `p` divides the denominator.
pub fn reduce_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64().expect("residue fits");
    let den = x.denom().mod_floor(&pb).to_u64().expect("residue fits");
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p), p))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Parses `"17"`, `"-3"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not an exact coefficient: {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad()),
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
    }
}

/// Exact decimal (`"5"`) or reduced fraction (`"-7/2"`) text.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Element arithmetic used by the dense reduction routines.
pub(crate) trait Arith: Sync {
    type E: Clone + PartialEq + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn lift(&self, x: &BigRational) -> Self::E;
    fn project(&self, a: &Self::E) -> BigRational;
}

pub(crate) struct RationalArith;

impl Arith for RationalArith {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn lift(&self, x: &BigRational) -> BigRational {
        x.clone()
    }
    fn project(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

pub(crate) struct ModArith(pub u64);

impl Arith for ModArith {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.0)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn neg(&self, a: &u64) -> u64 {
        sub_mod(0, *a, self.0)
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    fn lift(&self, x: &BigRational) -> u64 {
        reduce_mod(x, self.0).expect("entries are canonical residues")
    }
    fn project(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_small_moduli() {
        assert!(FieldConfig::prime(2).is_err());
        assert!(FieldConfig::prime(9).is_err());
        assert!(FieldConfig::prime(1 << 62).is_err());
        assert!(FieldConfig::prime(561).is_err());
        assert_eq!(FieldConfig::prime(101).unwrap(), FieldConfig::Prime(101));
        assert!(FieldConfig::prime(DEFAULT_PRIME).is_ok());
    }

    #[test]
    fn reduction_handles_fractions() {
        let half = parse_rational("1/2").unwrap();
        assert_eq!(reduce_mod(&half, 7), Some(4));
        assert_eq!(reduce_mod(&parse_rational("-1").unwrap(), 7), Some(6));
        assert_eq!(reduce_mod(&parse_rational("1/7").unwrap(), 7), None);
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-5", "7/3", "-2/9", "123456789012345678901234567890"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn modular_inverse() {
        let p = DEFAULT_PRIME;
        for a in [1u64, 2, 3, 12345, p - 1] {
            assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
        }
    }
}
