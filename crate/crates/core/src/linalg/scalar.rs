//! Exact scalars over the rationals or a prime field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field all matrices live over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseRing {
    Rationals,
    PrimeField { p: u64 },
}

impl BaseRing {
    /// GF(p). The modulus is capped at 2^32 so products fit in a `u64`.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::structural(format!("modulus {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::structural(format!("{p} is not prime")));
        }
        Ok(BaseRing::PrimeField { p })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            BaseRing::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            BaseRing::PrimeField { p } => Scalar::Modular {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Parses the canonical string form: `"a/b"` or `"a"` over ℚ, a
    /// representative in `0..p` over GF(p).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match *self {
            BaseRing::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num: BigInt = num
                    .parse()
                    .map_err(|_| Error::structural(format!("bad rational numerator {s:?}")))?;
                let den: BigInt = den
                    .parse()
                    .map_err(|_| Error::structural(format!("bad rational denominator {s:?}")))?;
                if den.is_zero() {
                    return Err(Error::structural(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            BaseRing::PrimeField { p } => {
                let v: u64 = s
                    .parse()
                    .map_err(|_| Error::structural(format!("bad GF({p}) element {s:?}")))?;
                if v >= p {
                    return Err(Error::structural(format!(
                        "GF({p}) element {v} is not a canonical representative"
                    )));
                }
                Ok(Scalar::Modular { value: v, modulus: p })
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            BaseRing::Rationals => "Q".to_string(),
            BaseRing::PrimeField { p } => format!("GF({p})"),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Both operands of a binary operation must come
/// from the same [`BaseRing`]; mixing rings is a programming error and
/// panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn ring(&self) -> BaseRing {
        match self {
            Scalar::Rational(_) => BaseRing::Rationals,
            Scalar::Modular { modulus, .. } => BaseRing::PrimeField { p: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Multiplies by ±1 without allocating a scalar for the sign.
    pub fn signed(self, positive: bool) -> Scalar {
        if positive {
            self
        } else {
            -self
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn ring_mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar ring mismatch: {} vs {}", a.ring(), b.ring())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: m }, Scalar::Modular { value: b, modulus: n }) if m == n => {
                Scalar::Modular {
                    value: (a + b) % m,
                    modulus: *m,
                }
            }
            _ => ring_mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Modular { value: a, modulus: m }, Scalar::Modular { value: b, modulus: n }) if m == n => {
                Scalar::Modular {
                    value: (a + m - b) % m,
                    modulus: *m,
                }
            }
            _ => ring_mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: m }, Scalar::Modular { value: b, modulus: n }) if m == n => {
                Scalar::Modular {
                    value: mul_mod(*a, *b, *m),
                    modulus: *m,
                }
            }
            _ => ring_mismatch(self, rhs),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus,
            },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

/// `(-1)^e`, as a boolean "is positive", valid for negative exponents.
#[inline]
pub fn sign_positive(e: i64) -> bool {
    e.rem_euclid(2) == 0
}

/// Integer helpers used by fraction-free elimination.
pub(crate) fn rational_parts(r: &BigRational) -> (&BigInt, &BigInt) {
    (r.numer(), r.denom())
}

pub(crate) fn content_gcd(row: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in row {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
    }
    g.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_format_is_canonical() {
        let q = BaseRing::Rationals;
        assert_eq!(q.parse_scalar("4/6").unwrap().to_string(), "2/3");
        assert_eq!(q.parse_scalar("-3/-1").unwrap().to_string(), "3");
        assert_eq!(q.parse_scalar("0/5").unwrap().to_string(), "0");
        assert!(q.parse_scalar("1/0").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = BaseRing::prime_field(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!((&a + &b).to_string(), "1");
        assert_eq!((&a - &b).to_string(), "5");
        assert_eq!((&a * &b).to_string(), "1");
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(f.from_i64(-1).to_string(), "6");
        assert!(f.parse_scalar("7").is_err());
        assert!(BaseRing::prime_field(9).is_err());
    }

    #[test]
    fn signs() {
        assert!(sign_positive(0));
        assert!(!sign_positive(-1));
        assert!(sign_positive(-2));
        assert!(!sign_positive(3));
    }
}
