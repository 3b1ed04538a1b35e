use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-size signed integer produced by the exact combinatorics.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactInteger(pub BigInt);

impl ExactInteger {
    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.0.clone())
    }
}

impl fmt::Display for ExactInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<BigInt> for ExactInteger {
    fn from(v: BigInt) -> Self {
        ExactInteger(v)
    }
}

impl PartialEq<i64> for ExactInteger {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigInt::from(*other)
    }
}

/// `n!`, exact.
pub fn factorial(n: i64) -> Result<ExactInteger> {
    if n < 0 {
        return Err(Error::Negative { what: "factorial argument", value: n });
    }
    Ok(ExactInteger(fact(n as u32)))
}

/// `C(n, k)`, zero whenever `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> ExactInteger {
    ExactInteger(binom(n, k))
}

pub(crate) fn fact(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub(crate) fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub(crate) fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}


/// `(-1)^n` as a rational.
pub(crate) fn sign(n: i64) -> BigRational {
    if n.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// `n!` as f64 (exact up to 22!, correctly rounded beyond).
pub(crate) fn fact_f64(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, i| acc * i as f64)
}
