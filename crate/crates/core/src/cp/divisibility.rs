use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::varieties::{dyadic_eval, Dyadic};
use crate::words::Word;

/// `(j, c_j, value)` with `c_j = x_j` and `value = dyadic_eval(c_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityEntry {
    pub j: u64,
    pub word: Word,
    pub value: Dyadic,
}

/// Finite evidence that the image of `x_0` in the dyadic quotient is
/// divisible by `2^j` for every `j <= depth`.
///
/// A nonzero element of a free abelian group is divisible by only finitely
/// many powers of two, so unbounded divisibility rules out embedding the
/// quotient in one. The certificate checks the first `depth + 1` levels;
/// it is evidence, not a proof of the unbounded statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityCertificate {
    pub depth: u64,
    pub entries: Vec<DivisibilityEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisibilityError {
    #[error("depth {depth} needs {expected} entries, found {found}")]
    WrongLength { depth: u64, expected: u64, found: usize },
    #[error("entry {position} has j = {j}, expected {position}")]
    WrongIndex { position: usize, j: u64 },
    #[error("entry {j}: word {word} is not x{j}")]
    WrongWord { j: u64, word: Word },
    #[error("entry {j}: recorded value {recorded} but the word evaluates to {computed}")]
    WrongValue { j: u64, recorded: Dyadic, computed: Dyadic },
    #[error("entry {j}: 2^{j} * {value} is not 1")]
    NotDivisor { j: u64, value: Dyadic },
    #[error("entry {j}: value {value} is not in canonical form")]
    NotCanonical { j: u64, value: Dyadic },
}

pub fn divisibility_certificate(depth: u64) -> DivisibilityCertificate {
    let entries = (0..=depth)
        .map(|j| {
            let index = u32::try_from(j).expect("depth fits a generator index");
            let word = Word::generator(index);
            let value = dyadic_eval(&word);
            DivisibilityEntry { j, word, value }
        })
        .collect();
    DivisibilityCertificate { depth, entries }
}

impl DivisibilityCertificate {
    pub fn verify(&self) -> Result<(), DivisibilityError> {
        let expected = self.depth + 1;
        if self.entries.len() as u64 != expected {
            return Err(DivisibilityError::WrongLength {
                depth: self.depth,
                expected,
                found: self.entries.len(),
            });
        }
        let one = dyadic_eval(&Word::generator(0));
        for (position, entry) in self.entries.iter().enumerate() {
            let j = entry.j;
            if j != position as u64 {
                return Err(DivisibilityError::WrongIndex { position, j });
            }
            if u32::try_from(j).map_or(true, |i| entry.word != Word::generator(i)) {
                return Err(DivisibilityError::WrongWord {
                    j,
                    word: entry.word.clone(),
                });
            }
            if !entry.value.is_canonical() {
                return Err(DivisibilityError::NotCanonical {
                    j,
                    value: entry.value.clone(),
                });
            }
            let computed = dyadic_eval(&entry.word);
            if computed != entry.value {
                return Err(DivisibilityError::WrongValue {
                    j,
                    recorded: entry.value.clone(),
                    computed,
                });
            }
            let scaled = entry.value.mul_pow2(j as i64);
            if scaled != one || !scaled.is_canonical() {
                return Err(DivisibilityError::NotDivisor {
                    j,
                    value: entry.value.clone(),
                });
            }
        }
        Ok(())
    }
}
