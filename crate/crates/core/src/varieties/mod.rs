//! Evaluators for verbal quotients of the free group: free abelian,
//! abelian of exponent `n`, free nilpotent of class 2, and the dyadic
//! quotient `<x_i | x_i = x_{i+1}^2>`.

mod abelian;
mod dyadic;
mod nil2;
pub mod smith;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use abelian::{abelian_independent, abelianize, in_integer_span, AbelianVector};
pub use dyadic::{dyadic_eval, Dyadic, DyadicParseError};
pub use nil2::{nil2_normal_form, Nil2Element, COMMUTATOR_CONVENTION};

use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("exponent variety needs n >= 2, got {0}")]
    InvalidExponent(u64),
    #[error("generator x{index} is outside rank {rank}")]
    OutsideRank { index: u32, rank: u32 },
    #[error("unknown variety {0:?}; expected absolute, abelian, abelian-exponent:<n> or nil2")]
    Unknown(String),
}

/// The implemented varieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum VarietyTag {
    Absolute,
    Abelian,
    AbelianExponent(u64),
    NilpotentClass2,
}

impl VarietyTag {
    pub fn abelian_exponent(n: u64) -> Result<Self, VarietyError> {
        if n < 2 {
            return Err(VarietyError::InvalidExponent(n));
        }
        Ok(VarietyTag::AbelianExponent(n))
    }

    /// Decides whether `u` and `v` are equal in the relatively free group.
    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        let diff = u.product(&v.inverse());
        match *self {
            VarietyTag::Absolute => diff.is_identity(),
            VarietyTag::Abelian => abelianize(&diff).is_zero(),
            VarietyTag::AbelianExponent(n) => abelianize(&diff)
                .entries()
                .all(|(_, c)| c.rem_euclid(n as i64) == 0),
            VarietyTag::NilpotentClass2 => {
                let rank = diff.max_index().map_or(0, |m| m + 1);
                nil2_normal_form(&diff, rank).is_ok_and(|e| e.is_identity())
            }
        }
    }
}

impl fmt::Display for VarietyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyTag::Absolute => f.write_str("absolute"),
            VarietyTag::Abelian => f.write_str("abelian"),
            VarietyTag::AbelianExponent(n) => write!(f, "abelian-exponent:{n}"),
            VarietyTag::NilpotentClass2 => f.write_str("nil2"),
        }
    }
}

impl FromStr for VarietyTag {
    type Err = VarietyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text.trim() {
            "absolute" => Ok(VarietyTag::Absolute),
            "abelian" => Ok(VarietyTag::Abelian),
            "nil2" | "nilpotent_class2" => Ok(VarietyTag::NilpotentClass2),
            other => {
                let n = other
                    .strip_prefix("abelian-exponent:")
                    .or_else(|| other.strip_prefix("abelian_exponent:"))
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| VarietyError::Unknown(other.to_string()))?;
                VarietyTag::abelian_exponent(n)
            }
        }
    }
}
