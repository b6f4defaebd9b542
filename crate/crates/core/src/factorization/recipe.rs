use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::words::{parse_letters, placeholder_serde, GeneratorMap, Letter, ParseError, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipeError {
    #[error("iteration pitch k must be positive")]
    ZeroPitch,
    #[error("coding arity h must be positive")]
    ZeroArity,
    #[error("placeholder z{index} is outside z1..z{h}")]
    PlaceholderOutOfRange { index: u32, h: u32 },
    #[error("coding word is not freely reduced (cancellation at letter {position})")]
    Unreduced { position: usize },
    #[error("coding word: {0}")]
    Parse(#[from] ParseError),
}

/// The data `(k, h, w, sign)` of a witness family
/// `y_i = x_{ki}^sign * w(x_{ki+1}, ..., x_{ki+h})`.
///
/// `w` is a word over placeholders `z1 .. zh` (stored as generator indices
/// `1 .. h`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRecipe {
    k: u32,
    h: u32,
    #[serde(with = "placeholder_serde")]
    w: Word,
    sign: Sign,
}

impl WitnessRecipe {
    pub fn new(k: u32, h: u32, w: Word, sign: Sign) -> Result<Self, RecipeError> {
        if k == 0 {
            return Err(RecipeError::ZeroPitch);
        }
        if h == 0 {
            return Err(RecipeError::ZeroArity);
        }
        if let Some(letter) = w.letters().iter().find(|l| l.index == 0 || l.index > h) {
            return Err(RecipeError::PlaceholderOutOfRange { index: letter.index, h });
        }
        Ok(WitnessRecipe { k, h, w, sign })
    }

    /// Like [`WitnessRecipe::new`], but takes `w` as text and rejects input
    /// that is not already freely reduced.
    pub fn from_text(k: u32, h: u32, w: &str, sign: Sign) -> Result<Self, RecipeError> {
        let letters = parse_letters(w, 'z')?;
        if let Some(position) = letters.windows(2).position(|p| p[0].cancels(p[1])) {
            return Err(RecipeError::Unreduced { position: position + 1 });
        }
        WitnessRecipe::new(k, h, Word::from_letters(letters), sign)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn w(&self) -> &Word {
        &self.w
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Index of the leading generator of `y_i`.
    pub fn lead(&self, i: u32) -> u32 {
        self.k * i
    }

    /// Generators `x_0 .. x_{kn+h}` involved in `y_0 .. y_n`.
    pub fn ambient_rank(&self, n: u32) -> u32 {
        self.k * n + self.h + 1
    }

    /// `w(x_{ki+1}, ..., x_{ki+h})`.
    pub fn coding_word(&self, i: u32) -> Word {
        let base = self.lead(i);
        Word::from_letters(
            self.w
                .letters()
                .iter()
                .map(|l| Letter::new(base + l.index, l.sign)),
        )
    }

    /// `y_i`, reduced.
    pub fn instantiate(&self, i: u32) -> Word {
        Word::letter(Letter::new(self.lead(i), self.sign)).product(&self.coding_word(i))
    }

    pub fn family(&self, n: u32) -> Vec<Word> {
        (0..=n).map(|i| self.instantiate(i)).collect()
    }

    /// The map `x_{ki} -> y_i` for `i <= n`, identity elsewhere.
    pub fn forward_map(&self, n: u32) -> GeneratorMap {
        GeneratorMap::from_assignments((0..=n).map(|i| (self.lead(i), self.instantiate(i))))
    }
}

impl fmt::Display for WitnessRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} h={} w={} sign={:+}",
            self.k,
            self.h,
            self.w.display_with('z'),
            self.sign.as_i64()
        )
    }
}

#[derive(Deserialize)]
struct RawRecipe {
    k: u32,
    h: u32,
    w: String,
    sign: Sign,
}

impl<'de> Deserialize<'de> for WitnessRecipe {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawRecipe::deserialize(deserializer)?;
        WitnessRecipe::from_text(raw.k, raw.h, &raw.w, raw.sign).map_err(serde::de::Error::custom)
    }
}
