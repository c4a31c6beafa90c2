//! Exact coefficients over the rationals, prime fields and the integers.
//!
//! Every scalar carries enough information to recover its ring, so mixing
//! rings is caught at the point of use. The operator impls panic on a ring
//! mismatch (a programming error inside the crate); the `checked_*` methods
//! report it as [`Error::RingMismatch`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Rationals,
    PrimeField(u64),
    Integers,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) && p < (1 << 31) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            RingSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            RingSpec::PrimeField(p) => Scalar::Modular {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
            RingSpec::Integers => Scalar::Integer(BigInt::from(v)),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            RingSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            RingSpec::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Modular {
                    value: u64::try_from(r).expect("residue fits"),
                    modulus: p,
                }
            }
            RingSpec::Integers => Scalar::Integer(v.clone()),
        }
    }

    /// `+1` or `-1` according to the parity of `exponent`.
    pub fn sign(&self, exponent: i64) -> Scalar {
        if exponent.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Parses `"3/2"`, `"-1"`, `"4"` into an element of this ring.
    ///
    /// Over a prime field a fraction is read as `num * den^{-1}`; over the
    /// integers fractions must have unit denominator.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::ParseScalar(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(t).map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match *self {
            RingSpec::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            RingSpec::Integers => {
                let (q, r) = num.div_rem(&den);
                if r.is_zero() {
                    Ok(Scalar::Integer(q))
                } else {
                    Err(bad())
                }
            }
            RingSpec::PrimeField(_) => {
                let d = self.from_bigint(&den);
                let d = d.inverse().map_err(|_| bad())?;
                Ok(&self.from_bigint(&num) * &d)
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
            RingSpec::Integers => write!(f, "Z"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "rationals" => Ok(RingSpec::Rationals),
            "Z" | "integers" => Ok(RingSpec::Integers),
            other => {
                let digits = other
                    .strip_prefix("F")
                    .or_else(|| other.strip_prefix("GF"))
                    .ok_or_else(|| Error::ParseScalar(other.to_string()))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::ParseScalar(other.to_string()))?;
                RingSpec::prime_field(p)
            }
        }
    }
}

/// An exact ring element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
    Integer(BigInt),
}

impl Scalar {
    pub fn ring(&self) -> RingSpec {
        match self {
            Scalar::Rational(_) => RingSpec::Rationals,
            Scalar::Modular { modulus, .. } => RingSpec::PrimeField(*modulus),
            Scalar::Integer(_) => RingSpec::Integers,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
            Scalar::Integer(z) => z.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
            Scalar::Integer(z) => z.is_one(),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Integer(z) => z.abs().is_one(),
            other => !other.is_zero(),
        }
    }

    fn same_ring(&self, other: &Scalar) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring(), other.ring()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(self * other)
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if !self.is_unit() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            // units of Z are self-inverse
            Scalar::Integer(z) => Scalar::Integer(z.clone()),
        })
    }

    /// The integer value, if this is an element of Z or an integral rational.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Integer(z) => Some(z.clone()),
            Scalar::Rational(q) if q.is_integer() => Some(q.to_integer()),
            Scalar::Modular { value, .. } => Some(BigInt::from(*value)),
            _ => None,
        }
    }

    /// Multiplies by `(-1)^exponent`.
    pub fn signed(self, exponent: i64) -> Scalar {
        if exponent.rem_euclid(2) == 0 {
            self
        } else {
            -self
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
            Scalar::Integer(z) => write!(f, "{z}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("ring mismatch: {} vs {}", a.ring(), b.ring())
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular {
                    value: (a + b) % p,
                    modulus: *p,
                }
            }
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a + b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular {
                    value: (a + p - b) % p,
                    modulus: *p,
                }
            }
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a - b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a * b),
            _ => mismatch(self, rhs),
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
            Scalar::Integer(a) => Scalar::Integer(-a),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -(self.clone())
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
