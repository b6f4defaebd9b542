//! Free-group words over the countable alphabet `x0, x1, x2, ...`.
//!
//! A [`Word`] is always freely reduced: every constructor runs free
//! reduction, so downstream code can rely on the invariant without
//! re-checking it. The alphabet is unbounded; operations that need a rank
//! take it as a parameter.

mod map;
mod parse;

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use map::{apply_hom, compose_hom, GeneratorMap, MapParseError};
pub use parse::{parse_letters, split_top_level, ParseError};

/// Exponent sign of a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn from_i64(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = i64::deserialize(deserializer)?;
        Sign::from_i64(value)
            .ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {value}")))
    }
}

/// A generator `x_index` raised to `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u32,
    pub sign: Sign,
}

impl Letter {
    pub const fn new(index: u32, sign: Sign) -> Self {
        Letter { index, sign }
    }

    pub const fn pos(index: u32) -> Self {
        Letter::new(index, Sign::Pos)
    }

    pub const fn neg(index: u32) -> Self {
        Letter::new(index, Sign::Neg)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.index, -self.sign)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.sign != other.sign
    }
}

/// Stack-based free reduction. Pushing a letter that cancels the top pops it.
#[derive(Default)]
pub(crate) struct Reducer {
    stack: Vec<Letter>,
}

impl Reducer {
    pub(crate) fn with_capacity(capacity: usize) -> Self {
        Reducer {
            stack: Vec::with_capacity(capacity),
        }
    }

    pub(crate) fn push(&mut self, letter: Letter) {
        match self.stack.last() {
            Some(&top) if top.cancels(letter) => {
                self.stack.pop();
            }
            _ => self.stack.push(letter),
        }
    }

    pub(crate) fn extend<I: IntoIterator<Item = Letter>>(&mut self, letters: I) {
        for letter in letters {
            self.push(letter);
        }
    }

    pub(crate) fn finish(self) -> Word {
        Word(self.stack)
    }
}

/// A freely reduced word. The empty word is the identity `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

/// Freely reduces an arbitrary letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut reducer = Reducer::default();
    reducer.extend(letters);
    reducer.finish()
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(index: u32) -> Self {
        Word(vec![Letter::pos(index)])
    }

    pub fn letter(letter: Letter) -> Self {
        Word(vec![letter])
    }

    /// `x_index^exponent`.
    pub fn power_of_generator(index: u32, exponent: i64) -> Self {
        let sign = if exponent < 0 { Sign::Neg } else { Sign::Pos };
        Word(vec![Letter::new(index, sign); exponent.unsigned_abs() as usize])
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        reduce(letters)
    }

    /// Parses the text format (`x0 x1^-2`, `e`, `[x0, x1]`, `(x0 x1)^3`).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Ok(reduce(parse_letters(text, 'x')?))
    }

    /// Parses a word over placeholder symbols `z1, z2, ...`.
    pub fn parse_placeholders(text: &str) -> Result<Self, ParseError> {
        Ok(reduce(parse_letters(text, 'z')?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn product(&self, other: &Word) -> Word {
        // Only the junction can cancel since both factors are reduced.
        let mut keep = self.0.len();
        let mut skip = 0;
        while keep > 0 && skip < other.0.len() && self.0[keep - 1].cancels(other.0[skip]) {
            keep -= 1;
            skip += 1;
        }
        let mut letters = Vec::with_capacity(keep + other.0.len() - skip);
        letters.extend_from_slice(&self.0[..keep]);
        letters.extend_from_slice(&other.0[skip..]);
        Word(letters)
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut result = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            result = result.product(&base);
        }
        result
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().product(&b.inverse()).product(a).product(b)
    }

    /// `c w c^-1`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.product(self).product(&c.inverse())
    }

    /// Largest generator index occurring in the word.
    pub fn max_index(&self) -> Option<u32> {
        self.0.iter().map(|l| l.index).max()
    }

    /// True when every letter has index below `rank`.
    pub fn supported_below(&self, rank: u32) -> bool {
        self.0.iter().all(|l| l.index < rank)
    }

    /// Splits `w = u c u^-1` with `c` cyclically reduced; returns `(u, c)`.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let letters = &self.0;
        let mut lo = 0;
        let mut hi = letters.len();
        while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        (Word(letters[..lo].to_vec()), Word(letters[lo..hi].to_vec()))
    }

    pub fn cyclically_reduced(&self) -> Word {
        self.cyclic_decomposition().1
    }

    /// Formats with a custom generator symbol, e.g. `z` for placeholder words.
    pub fn display_with(&self, symbol: char) -> WordDisplay<'_> {
        WordDisplay { word: self, symbol }
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.product(rhs)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        self.product(&rhs)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    symbol: char,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = &self.word.0;
        if letters.is_empty() {
            return f.write_str("e");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let letter = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == letter {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let exponent = run as i64 * letter.sign.as_i64();
            if exponent == 1 {
                write!(f, "{}{}", self.symbol, letter.index)?;
            } else {
                write!(f, "{}{}^{}", self.symbol, letter.index, exponent)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with('x').fmt(f)
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Word::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for words over placeholder symbols `z1 .. zh`.
pub mod placeholder_serde {
    use super::Word;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(word: &Word, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&word.display_with('z'))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        let text = String::deserialize(deserializer)?;
        Word::parse_placeholders(&text).map_err(serde::de::Error::custom)
    }
}
