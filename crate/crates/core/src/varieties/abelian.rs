use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::smith::{in_row_lattice, smith_diagonal, Matrix};
use crate::words::Word;

/// Exponent-sum vector of a word: the image in the free abelian group.
/// Zero coordinates are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianVector {
    entries: BTreeMap<u32, i64>,
}

impl AbelianVector {
    pub fn zero() -> Self {
        AbelianVector::default()
    }

    pub fn unit(index: u32) -> Self {
        AbelianVector::from_entries([(index, 1)])
    }

    pub fn from_entries<I: IntoIterator<Item = (u32, i64)>>(entries: I) -> Self {
        let mut v = AbelianVector::zero();
        for (index, value) in entries {
            v.add_at(index, value);
        }
        v
    }

    pub fn get(&self, index: u32) -> i64 {
        self.entries.get(&index).copied().unwrap_or(0)
    }

    pub fn add_at(&mut self, index: u32, delta: i64) {
        if delta == 0 {
            return;
        }
        let slot = self.entries.entry(index).or_insert(0);
        *slot += delta;
        if *slot == 0 {
            self.entries.remove(&index);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Gcd of the coordinates; zero for the zero vector.
    pub fn content(&self) -> u64 {
        self.entries
            .values()
            .fold(0u64, |g, &v| g.gcd(&v.unsigned_abs()))
    }

    pub fn scale(&self, factor: i64) -> Self {
        AbelianVector::from_entries(self.entries().map(|(i, v)| (i, v * factor)))
    }
}

impl Add for &AbelianVector {
    type Output = AbelianVector;

    fn add(self, rhs: &AbelianVector) -> AbelianVector {
        let mut out = self.clone();
        for (i, v) in rhs.entries() {
            out.add_at(i, v);
        }
        out
    }
}

impl Sub for &AbelianVector {
    type Output = AbelianVector;

    fn sub(self, rhs: &AbelianVector) -> AbelianVector {
        self + &(-rhs)
    }
}

impl Neg for &AbelianVector {
    type Output = AbelianVector;

    fn neg(self) -> AbelianVector {
        self.scale(-1)
    }
}

impl fmt::Display for AbelianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (i, v)) in self.entries().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{i}: {v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for AbelianVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AbelianVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<u32, i64>::deserialize(deserializer)?;
        Ok(AbelianVector::from_entries(raw))
    }
}

/// Signed letter count per generator.
pub fn abelianize(word: &Word) -> AbelianVector {
    let mut v = AbelianVector::zero();
    for letter in word.letters() {
        v.add_at(letter.index, letter.sign.as_i64());
    }
    v
}

fn columns(vectors: &[AbelianVector]) -> Vec<u32> {
    let set: BTreeSet<u32> = vectors.iter().flat_map(|v| v.support()).collect();
    set.into_iter().collect()
}

fn to_matrix(vectors: &[AbelianVector], cols: &[u32]) -> Matrix {
    vectors
        .iter()
        .map(|v| cols.iter().map(|&c| BigInt::from(v.get(c))).collect())
        .collect()
}

/// Independence in the abelian variety (`modulus == 0`) or in the abelian
/// variety of exponent `modulus`.
///
/// This is V-independence, i.e. the vectors can be completed to a basis of
/// the relatively free group, which is stronger than rational linear
/// independence. Over `Z` it holds iff the Smith normal form has exactly one
/// invariant factor per vector and all of them are 1; modulo `n` it holds iff
/// there is one invariant factor per vector and each is coprime to `n`.
pub fn abelian_independent(vectors: &[AbelianVector], modulus: u64) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let cols = columns(vectors);
    let diagonal = smith_diagonal(&to_matrix(vectors, &cols));
    if diagonal.len() != vectors.len() {
        return false;
    }
    if modulus == 0 {
        diagonal.iter().all(One::is_one)
    } else {
        let n = BigInt::from(modulus);
        diagonal.iter().all(|d| d.gcd(&n).is_one())
    }
}

/// Whether `target` is an integer combination of `vectors`.
pub fn in_integer_span(target: &AbelianVector, vectors: &[AbelianVector]) -> bool {
    if target.is_zero() {
        return true;
    }
    let mut all: Vec<AbelianVector> = vectors.to_vec();
    all.push(target.clone());
    let cols = columns(&all);
    let matrix = to_matrix(vectors, &cols);
    let t: Vec<BigInt> = cols.iter().map(|&c| BigInt::from(target.get(c))).collect();
    if matrix.is_empty() {
        return t.iter().all(Zero::is_zero);
    }
    in_row_lattice(&t, &matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn v(entries: &[(u32, i64)]) -> AbelianVector {
        AbelianVector::from_entries(entries.iter().copied())
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(abelianize(&w("x0 x1 x0")), v(&[(0, 2), (1, 1)]));
        assert_eq!(abelianize(&w("x0 x1^-2")), v(&[(0, 1), (1, -2)]));
        assert!(abelianize(&w("[x0, x1]")).is_zero());
    }

    #[test]
    fn independence_examples() {
        let a = v(&[(0, 1), (1, -2)]);
        let b = v(&[(1, 1), (2, -2)]);
        assert!(abelian_independent(&[a, b], 0));

        assert!(!abelian_independent(&[v(&[(0, 1)]), v(&[(0, 2)])], 0));

        let plus = v(&[(0, 1), (1, 1)]);
        let minus = v(&[(0, 1), (1, -1)]);
        assert!(!abelian_independent(&[plus.clone(), minus.clone()], 0));
        assert!(abelian_independent(&[plus.clone(), minus.clone()], 3));
        assert!(!abelian_independent(&[plus, minus], 2));
    }

    #[test]
    fn zero_vector_is_never_independent() {
        assert!(!abelian_independent(&[AbelianVector::zero()], 0));
        assert!(!abelian_independent(&[AbelianVector::zero()], 5));
        assert!(abelian_independent(&[], 0));
    }

    #[test]
    fn span_obstruction() {
        let gens = [abelianize(&w("x0 x1^-2")), abelianize(&w("x1 x2^-2"))];
        assert!(!in_integer_span(&abelianize(&w("x0")), &gens));
        assert!(in_integer_span(&abelianize(&w("x0 x2^-4")), &gens));
        assert!(in_integer_span(&AbelianVector::zero(), &[]));
        assert!(!in_integer_span(&abelianize(&w("x5")), &[]));
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&v(&[(0, 2), (3, -1)])).unwrap();
        assert_eq!(json, r#"{"0":2,"3":-1}"#);
        let back: AbelianVector = serde_json::from_str(r#"{"0":2,"1":0}"#).unwrap();
        assert_eq!(back, v(&[(0, 2)]));
    }
}
