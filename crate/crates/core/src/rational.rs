//! Exact rational arithmetic over machine integers.
//!
//! Every closed-form RLCT in this crate is a ratio of small integers (the
//! denominator always divides 8), so a compact `i64` rational with checked
//! multiplication is all the exactness the formulas need. Values are kept
//! reduced with a positive denominator, which makes `PartialEq` structural
//! equality coincide with numeric equality.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Rational {
    /// Builds `num/den`, reducing to lowest terms and normalizing the sign
    /// into the numerator. Errors on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("rational with zero denominator".into()));
        }
        if num == 0 {
            return Ok(Self { num: 0, den: 1 });
        }
        let g = gcd(num, den);
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Self {
            num: sign * (num / g),
            den: (den / g).abs(),
        })
    }

    /// The integer `n` as a rational.
    pub fn from_int(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Checked addition.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let lhs = self
            .num
            .checked_mul(other.den)
            .ok_or(Error::Overflow("rational addition"))?;
        let rhs = other
            .num
            .checked_mul(self.den)
            .ok_or(Error::Overflow("rational addition"))?;
        let num = lhs
            .checked_add(rhs)
            .ok_or(Error::Overflow("rational addition"))?;
        let den = self
            .den
            .checked_mul(other.den)
            .ok_or(Error::Overflow("rational addition"))?;
        Self::new(num, den)
    }

    /// Checked subtraction.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&Self {
            num: -other.num,
            den: other.den,
        })
    }

    /// Checked multiplication.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let num = self
            .num
            .checked_mul(other.num)
            .ok_or(Error::Overflow("rational multiplication"))?;
        let den = self
            .den
            .checked_mul(other.den)
            .ok_or(Error::Overflow("rational multiplication"))?;
        Self::new(num, den)
    }

    /// Nearest floating-point value; exact whenever `num` and `den` fit in
    /// the 53-bit mantissa, which every RLCT in scope does.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // i128 cross-multiplication cannot overflow for i64 operands.
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for Rational {
    /// Serializes as `{"text": "p/q", "float": p/q}` so downstream tooling
    /// gets both the exact form and a numeric convenience field.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Rational", 2)?;
        s.serialize_field("text", &self.to_string())?;
        s.serialize_field("float", &self.to_f64())?;
        s.end()
    }
}
