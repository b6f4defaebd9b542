use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{split_top_level, ParseError, Reducer, Sign, Word};

/// An endomorphism of the free group, given on finitely many generators and
/// the identity on every other generator.
///
/// Assignments `x_i -> x_i` are dropped on insertion, so two maps compare
/// equal exactly when they agree on every generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorMap {
    assignments: BTreeMap<u32, Word>,
}

impl GeneratorMap {
    pub fn identity() -> Self {
        GeneratorMap::default()
    }

    pub fn from_assignments<I: IntoIterator<Item = (u32, Word)>>(assignments: I) -> Self {
        let mut map = GeneratorMap::identity();
        for (index, image) in assignments {
            map.insert(index, image);
        }
        map
    }

    pub fn insert(&mut self, index: u32, image: Word) {
        if image == Word::generator(index) {
            self.assignments.remove(&index);
        } else {
            self.assignments.insert(index, image);
        }
    }

    /// Image of the single generator `x_index`.
    pub fn image(&self, index: u32) -> Word {
        self.assignments
            .get(&index)
            .cloned()
            .unwrap_or_else(|| Word::generator(index))
    }

    /// Generator indices with a non-identity image, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.assignments.keys().copied()
    }

    pub fn assignments(&self) -> impl Iterator<Item = (u32, &Word)> + '_ {
        self.assignments.iter().map(|(&i, w)| (i, w))
    }

    pub fn is_identity(&self) -> bool {
        self.assignments.is_empty()
    }

    /// True when the map fixes every generator `x_0 .. x_{rank-1}`.
    pub fn is_identity_below(&self, rank: u32) -> bool {
        self.assignments.range(..rank).next().is_none()
    }

    pub fn apply(&self, word: &Word) -> Word {
        let mut reducer = Reducer::with_capacity(word.len());
        for letter in word.letters() {
            match self.assignments.get(&letter.index) {
                None => reducer.push(*letter),
                Some(image) => match letter.sign {
                    Sign::Pos => reducer.extend(image.letters().iter().copied()),
                    Sign::Neg => reducer.extend(image.letters().iter().rev().map(|l| l.inverse())),
                },
            }
        }
        reducer.finish()
    }

    /// `outer ∘ inner`: first `inner`, then `outer`.
    pub fn compose(outer: &GeneratorMap, inner: &GeneratorMap) -> GeneratorMap {
        let mut result = GeneratorMap::identity();
        let indices: std::collections::BTreeSet<u32> =
            outer.support().chain(inner.support()).collect();
        for index in indices {
            result.insert(index, outer.apply(&inner.image(index)));
        }
        result
    }

    /// Largest generator index that is moved or appears in an image.
    pub fn max_index(&self) -> Option<u32> {
        self.assignments
            .iter()
            .flat_map(|(&i, w)| std::iter::once(i).chain(w.max_index()))
            .max()
    }
}

impl Serialize for GeneratorMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.assignments.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GeneratorMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<u32, Word>::deserialize(deserializer)?;
        Ok(GeneratorMap::from_assignments(raw))
    }
}

pub fn apply_hom(map: &GeneratorMap, word: &Word) -> Word {
    map.apply(word)
}

pub fn compose_hom(outer: &GeneratorMap, inner: &GeneratorMap) -> GeneratorMap {
    GeneratorMap::compose(outer, inner)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapParseError {
    #[error("assignment {0:?} must have the form 'x<i> -> <word>'")]
    Shape(String),
    #[error("in assignment {assignment:?}: {source}")]
    Word {
        assignment: String,
        source: ParseError,
    },
    #[error("generator x{0} assigned twice")]
    Duplicate(u32),
}

impl fmt::Display for GeneratorMap {
    /// `x0 -> x0 x1^-2; x1 -> x1 x2^-2`, or `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.assignments.is_empty() {
            return f.write_str("id");
        }
        for (n, (index, image)) in self.assignments.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "x{index} -> {image}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorMap {
    type Err = MapParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut map = GeneratorMap::identity();
        let mut seen = std::collections::BTreeSet::new();
        if text.trim() == "id" {
            return Ok(map);
        }
        for part in split_top_level(text, ';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (lhs, rhs) = part
                .split_once("->")
                .or_else(|| part.split_once('='))
                .ok_or_else(|| MapParseError::Shape(part.to_string()))?;
            let lhs = lhs.trim();
            let index: u32 = lhs
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| MapParseError::Shape(part.to_string()))?;
            let image = Word::parse(rhs).map_err(|source| MapParseError::Word {
                assignment: part.to_string(),
                source,
            })?;
            if !seen.insert(index) {
                return Err(MapParseError::Duplicate(index));
            }
            map.insert(index, image);
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn map(text: &str) -> GeneratorMap {
        text.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = map("x0 -> x0 x1^-2");
        assert_eq!(f.apply(&w("x0")), w("x0 x1^-2"));
        // x0 x1^-2 x1^2 reduces to x0
        assert_eq!(f.apply(&w("x0 x1^2")), w("x0"));
        let id = GeneratorMap::identity();
        let sample = w("x3 x0^-1 x7^2");
        assert_eq!(id.apply(&sample), sample);
    }

    #[test]
    fn compose_examples() {
        let f = map("x0 -> x0 x1^-2");
        let id = GeneratorMap::identity();
        assert_eq!(compose_hom(&id, &f), f);

        let outer = map("x1 -> x1 x2^-2");
        let inner = map("x0 -> x0 x1^-2");
        let composed = compose_hom(&outer, &inner);
        // x0 (x1 x2^-2)^-2 = x0 x2^2 x1^-1 x2^2 x1^-1
        assert_eq!(composed.image(0), w("x0 x2^2 x1^-1 x2^2 x1^-1"));
        assert_eq!(composed.image(1), w("x1 x2^-2"));

        let phi = map("x0 -> x0 x1^-2");
        let psi = map("x0 -> x0 x1^2");
        assert_eq!(compose_hom(&phi, &psi).image(0), w("x0"));
        assert!(compose_hom(&phi, &psi).is_identity());
    }

    #[test]
    fn identity_assignments_are_dropped() {
        let f = GeneratorMap::from_assignments([(0, w("x0")), (1, w("x0"))]);
        assert_eq!(f.support().collect::<Vec<_>>(), vec![1]);
        assert!(f.is_identity_below(1));
        assert!(!f.is_identity_below(2));
    }

    #[test]
    fn text_and_json_forms() {
        let f = map("x0 -> x0 x1^2; x1 = [x1, x2]");
        assert_eq!(f.to_string(), "x0 -> x0 x1^2; x1 -> x1^-1 x2^-1 x1 x2");
        assert_eq!(f.to_string().parse::<GeneratorMap>().unwrap(), f);
        let json = serde_json::to_string(&map("x0 -> x0 x1^2")).unwrap();
        assert_eq!(json, r#"{"0":"x0 x1^2"}"#);
        let back: GeneratorMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, map("x0 -> x0 x1^2"));
        assert!("x0 -> x1; x0 -> x2".parse::<GeneratorMap>().is_err());
        assert!("y0 -> x1".parse::<GeneratorMap>().is_err());
    }
}
