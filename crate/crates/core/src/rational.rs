//! Exact non-negative rationals.
//!
//! Entries of a generated word are fractions `a/t` with `gcd(a, t) = 1` and
//! zero stored as `0/1`. `num-rational` keeps the value reduced; this wrapper
//! adds the sign invariant and the JSON shape `{"num": a, "den": t}`.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced, non-negative rational number of arbitrary precision.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<BigInt>);

impl Rational {
    /// Builds `num/den` in lowest terms. Fails on a zero denominator.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        Self::from_bigint(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_bigint(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() || num.is_negative() || den.is_negative() {
            return Err(Error::InvalidRational {
                num: num.to_string(),
                den: den.to_string(),
            });
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    /// Wraps an already computed ratio, rejecting negative values.
    pub(crate) fn from_ratio(r: Ratio<BigInt>) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidRational {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
            });
        }
        Ok(Rational(r))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn integer(v: u64) -> Self {
        Rational(Ratio::from_integer(BigInt::from(v)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Denominator as `u64`, saturating for absurdly large values.
    pub fn denom_u64(&self) -> u64 {
        self.0.denom().to_u64().unwrap_or(u64::MAX)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn in_unit_interval(&self) -> bool {
        self.0 <= Ratio::one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub(crate) fn as_ratio(&self) -> &Ratio<BigInt> {
        &self.0
    }
}

/// `lcm` of a sequence of denominators, saturating at `u64::MAX`.
pub(crate) fn lcm_u64(values: impl IntoIterator<Item = u64>) -> u64 {
    let mut acc: u64 = 1;
    for v in values {
        let g = acc.gcd(&v);
        acc = match (acc / g).checked_mul(v) {
            Some(x) => x,
            None => return u64::MAX,
        };
    }
    acc
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct RawRational {
    num: u64,
    den: u64,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let num = self
            .0
            .numer()
            .to_u64()
            .ok_or_else(|| S::Error::custom("numerator does not fit in u64"))?;
        let den = self
            .0
            .denom()
            .to_u64()
            .ok_or_else(|| S::Error::custom("denominator does not fit in u64"))?;
        RawRational { num, den }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRational::deserialize(d)?;
        Rational::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}
