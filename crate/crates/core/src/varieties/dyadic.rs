//! Exact dyadic rationals `n / 2^k` and evaluation of words in the
//! quotient `<x_i | x_i = x_{i+1}^2>`.
//!
//! Each truncation `<x_0..x_n | x_i = x_{i+1}^2>` is infinite cyclic on
//! `x_n` (eliminate `x_0..x_{n-1}` by Tietze moves), so the whole quotient
//! is abelian and `x_i -> 1/2^i` identifies it with `Z[1/2]`. Evaluation is
//! therefore a complete word-problem solver for that quotient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::words::Word;

/// `numerator / 2^exponent`, canonical: the numerator is odd, or it is zero
/// and the exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(numerator: BigInt, exponent: u64) -> Self {
        if numerator.is_zero() {
            return Dyadic::zero();
        }
        let twos = numerator.trailing_zeros().unwrap_or(0).min(exponent);
        Dyadic {
            numerator: numerator >> twos,
            exponent: exponent - twos,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_integer(BigInt::one())
    }

    pub fn from_integer(value: BigInt) -> Self {
        Dyadic::new(value, 0)
    }

    /// `1 / 2^k`.
    pub fn inverse_power_of_two(k: u64) -> Self {
        Dyadic::new(BigInt::one(), k)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_canonical(&self) -> bool {
        if self.numerator.is_zero() {
            self.exponent == 0
        } else {
            self.exponent == 0 || self.numerator.trailing_zeros() == Some(0)
        }
    }

    /// Multiplication by `2^k`; `k` may be negative.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k <= self.exponent {
                Dyadic::new(self.numerator.clone(), self.exponent - k)
            } else {
                Dyadic::new(&self.numerator << (k - self.exponent), 0)
            }
        } else {
            Dyadic::new(self.numerator.clone(), self.exponent + k.unsigned_abs())
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &rhs.numerator << (e - rhs.exponent);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator.clone(),
            exponent: self.exponent,
        }
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numerator * &rhs.numerator, self.exponent + rhs.exponent)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self - other;
        if diff.numerator.is_zero() {
            Ordering::Equal
        } else if diff.numerator.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dyadic {0:?} must have the form <numerator>/2^<exponent>")]
pub struct DyadicParseError(pub String);

impl FromStr for Dyadic {
    type Err = DyadicParseError;

    /// Accepts `n/2^k` or a bare integer. Non-canonical input is normalised.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || DyadicParseError(text.to_string());
        let text_trim = text.trim();
        match text_trim.split_once('/') {
            None => text_trim
                .parse::<BigInt>()
                .map(Dyadic::from_integer)
                .map_err(|_| bad()),
            Some((num, den)) => {
                let numerator: BigInt = num.trim().parse().map_err(|_| bad())?;
                let exponent: u64 = den
                    .trim()
                    .strip_prefix("2^")
                    .and_then(|e| e.parse().ok())
                    .ok_or_else(bad)?;
                Ok(Dyadic::new(numerator, exponent))
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `sum over letters of sign / 2^index`, exactly.
pub fn dyadic_eval(word: &Word) -> Dyadic {
    let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
    for letter in word.letters() {
        *counts.entry(letter.index).or_insert(0) += letter.sign.as_i64();
    }
    let Some(&top) = counts.keys().next_back() else {
        return Dyadic::zero();
    };
    // Common denominator 2^top.
    let mut numerator = BigInt::zero();
    for (index, count) in counts {
        numerator += BigInt::from(count) << (top - index);
    }
    Dyadic::new(numerator, u64::from(top))
}
