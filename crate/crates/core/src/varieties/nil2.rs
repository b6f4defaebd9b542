//! Collection normal form in the free nilpotent group of class 2.
//!
//! Every element is written uniquely as
//! `x_0^{a_0} x_1^{a_1} ... x_{r-1}^{a_{r-1}} * prod_{i<j} [x_i, x_j]^{c_ij}`
//! with `[a, b] = a^-1 b^-1 a b`. The commutator coordinates are central,
//! and moving `x_i^b` left across `x_j^a` (`i < j`) contributes
//! `[x_i, x_j]^{-ab}`, which is the only correction in a product.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::abelian::AbelianVector;
use super::VarietyError;
use crate::words::{Letter, Word};

/// Commutator convention recorded alongside every serialized element.
pub const COMMUTATOR_CONVENTION: &str = "[a,b] = a^-1 b^-1 a b";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Nil2Element {
    exponents: AbelianVector,
    commutators: BTreeMap<(u32, u32), i64>,
}

impl Nil2Element {
    pub fn identity() -> Self {
        Nil2Element::default()
    }

    pub fn from_parts<I: IntoIterator<Item = ((u32, u32), i64)>>(
        exponents: AbelianVector,
        commutators: I,
    ) -> Self {
        let mut element = Nil2Element {
            exponents,
            commutators: BTreeMap::new(),
        };
        for ((i, j), value) in commutators {
            match i.cmp(&j) {
                std::cmp::Ordering::Less => element.add_commutator(i, j, value),
                std::cmp::Ordering::Greater => element.add_commutator(j, i, -value),
                std::cmp::Ordering::Equal => {}
            }
        }
        element
    }

    pub fn exponents(&self) -> &AbelianVector {
        &self.exponents
    }

    /// Coordinate on `[x_i, x_j]`, for `i < j`.
    pub fn commutator(&self, i: u32, j: u32) -> i64 {
        self.commutators.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn commutators(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.commutators.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.is_zero() && self.commutators.is_empty()
    }

    fn add_commutator(&mut self, i: u32, j: u32, delta: i64) {
        if delta == 0 {
            return;
        }
        let slot = self.commutators.entry((i, j)).or_insert(0);
        *slot += delta;
        if *slot == 0 {
            self.commutators.remove(&(i, j));
        }
    }

    /// Right multiplication by a single letter.
    pub fn push_letter(&mut self, letter: Letter) {
        let b = letter.sign.as_i64();
        let i = letter.index;
        let movers: Vec<(u32, i64)> = self
            .exponents
            .entries()
            .filter(|&(j, _)| j > i)
            .collect();
        for (j, a) in movers {
            self.add_commutator(i, j, -a * b);
        }
        self.exponents.add_at(i, b);
    }

    pub fn mul(&self, other: &Nil2Element) -> Nil2Element {
        let mut out = self.clone();
        for (i, b) in other.exponents.entries() {
            for (j, a) in self.exponents.entries().filter(|&(j, _)| j > i) {
                out.add_commutator(i, j, -a * b);
            }
        }
        for (i, b) in other.exponents.entries() {
            out.exponents.add_at(i, b);
        }
        for ((i, j), c) in other.commutators() {
            out.add_commutator(i, j, c);
        }
        out
    }

    pub fn inverse(&self) -> Nil2Element {
        // (x^a C)^-1 = C^-1 x^-a, and reordering x^-a into collected form
        // is a product of single-generator powers.
        let mut out = Nil2Element::identity();
        let powers: Vec<(u32, i64)> = self.exponents.entries().collect();
        for &(i, a) in powers.iter().rev() {
            let mut factor = Nil2Element::identity();
            factor.exponents.add_at(i, -a);
            out = out.mul(&factor);
        }
        for ((i, j), c) in self.commutators() {
            out.add_commutator(i, j, -c);
        }
        out
    }

    /// A reduced word representing this element.
    pub fn to_word(&self) -> Word {
        let mut word = Word::identity();
        for (i, a) in self.exponents.entries() {
            word = word.product(&Word::power_of_generator(i, a));
        }
        for ((i, j), c) in self.commutators() {
            let comm = Word::commutator(&Word::generator(i), &Word::generator(j));
            word = word.product(&comm.pow(c));
        }
        word
    }
}

/// Image of `word` in the free class-2 nilpotent group of rank `rank`.
pub fn nil2_normal_form(word: &Word, rank: u32) -> Result<Nil2Element, VarietyError> {
    let mut element = Nil2Element::identity();
    for &letter in word.letters() {
        if letter.index >= rank {
            return Err(VarietyError::OutsideRank {
                index: letter.index,
                rank,
            });
        }
        element.push_letter(letter);
    }
    Ok(element)
}

impl fmt::Display for Nil2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp {} comm {{", self.exponents)?;
        for (n, ((i, j), c)) in self.commutators().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[x{i},x{j}]: {c}")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct Nil2Json {
    exp: AbelianVector,
    comm: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    convention: Option<String>,
}

impl Serialize for Nil2Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Nil2Json {
            exp: self.exponents.clone(),
            comm: self
                .commutators()
                .map(|((i, j), c)| (format!("{i},{j}"), c))
                .collect(),
            convention: Some(COMMUTATOR_CONVENTION.to_string()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Nil2Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Nil2Json::deserialize(deserializer)?;
        if let Some(convention) = &raw.convention {
            if convention != COMMUTATOR_CONVENTION {
                return Err(D::Error::custom(format!(
                    "unsupported commutator convention {convention:?}"
                )));
            }
        }
        let mut pairs = Vec::new();
        for (key, value) in raw.comm {
            let parsed = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            match parsed {
                Some((i, j)) if i < j => pairs.push(((i, j), value)),
                _ => return Err(D::Error::custom(format!("bad commutator key {key:?}"))),
            }
        }
        Ok(Nil2Element::from_parts(raw.exp, pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(text: &str, rank: u32) -> Nil2Element {
        nil2_normal_form(&Word::parse(text).unwrap(), rank).unwrap()
    }

    fn exps(entries: &[(u32, i64)]) -> AbelianVector {
        AbelianVector::from_entries(entries.iter().copied())
    }

    #[test]
    fn normal_form_examples() {
        let c = nf("[x0, x1]", 2);
        assert!(c.exponents().is_zero());
        assert_eq!(c.commutators().collect::<Vec<_>>(), vec![((0, 1), 1)]);

        let e = nf("x1 x0", 2);
        assert_eq!(e.exponents(), &exps(&[(0, 1), (1, 1)]));
        assert_eq!(e.commutator(0, 1), -1);

        let e = nf("x0 x1 x0 x1", 2);
        assert_eq!(e.exponents(), &exps(&[(0, 2), (1, 2)]));
        assert_eq!(e.commutator(0, 1), -1);

        let y0 = nf("x0^-1 [x1, x2]", 3);
        assert_eq!(y0.exponents(), &exps(&[(0, -1)]));
        assert_eq!(y0.commutators().collect::<Vec<_>>(), vec![((1, 2), 1)]);
    }

    #[test]
    fn rank_is_enforced() {
        let err = nil2_normal_form(&Word::parse("x0 x2").unwrap(), 2).unwrap_err();
        assert_eq!(err, VarietyError::OutsideRank { index: 2, rank: 2 });
    }

    #[test]
    fn inverse_and_word_round_trip() {
        let e = nf("x2 x0^3 x1^-1 x2 [x0, x2]^2", 3);
        assert!(e.mul(&e.inverse()).is_identity());
        assert!(e.inverse().mul(&e).is_identity());
        assert_eq!(nil2_normal_form(&e.to_word(), 3).unwrap(), e);
    }

    #[test]
    fn json_records_convention() {
        let json = serde_json::to_string(&nf("x1 x0", 2)).unwrap();
        assert_eq!(
            json,
            r#"{"exp":{"0":1,"1":1},"comm":{"0,1":-1},"convention":"[a,b] = a^-1 b^-1 a b"}"#
        );
        let back: Nil2Element = serde_json::from_str(&json).unwrap();
        assert_eq!(back, nf("x1 x0", 2));
    }
}
