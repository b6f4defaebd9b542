//! Primitivity by Whitehead length descent.
//!
//! A cyclically reduced primitive word of length greater than one always
//! admits a Whitehead automorphism that strictly shortens it. Descending
//! greedily therefore either reaches a single letter (primitive) or stops
//! at a Whitehead-minimal word of length at least two (not primitive).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stallings::fold;
use crate::varieties::abelianize;
use crate::words::{GeneratorMap, Letter, Word};

pub const DEFAULT_MAX_RANK: u32 = 4;
pub const MAX_RANK_ENV: &str = "RELFREE_MAX_RANK";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WhiteheadConfig {
    pub max_rank: u32,
}

impl Default for WhiteheadConfig {
    fn default() -> Self {
        WhiteheadConfig {
            max_rank: DEFAULT_MAX_RANK,
        }
    }
}

impl WhiteheadConfig {
    /// Default bound, overridden by `RELFREE_MAX_RANK` when it parses.
    pub fn from_env() -> Self {
        let max_rank = std::env::var(MAX_RANK_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_RANK);
        WhiteheadConfig { max_rank }
    }
}

/// What a type-2 Whitehead automorphism does to one generator `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveAction {
    Fix,
    /// `x -> x a`
    Right,
    /// `x -> a^-1 x`
    Left,
    /// `x -> a^-1 x a`
    Conjugate,
}

const ACTIONS: [MoveAction; 4] = [
    MoveAction::Fix,
    MoveAction::Right,
    MoveAction::Left,
    MoveAction::Conjugate,
];

/// A type-2 Whitehead automorphism of `F(x_0 .. x_{r-1})`: the multiplier
/// letter `a` is fixed and every other generator is acted on by `actions`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WhiteheadMove {
    pub multiplier: Letter,
    /// One entry per generator; the multiplier's own entry is ignored.
    pub actions: Vec<MoveAction>,
}

impl WhiteheadMove {
    pub fn to_map(&self) -> GeneratorMap {
        let a = Word::letter(self.multiplier);
        let a_inv = a.inverse();
        let mut map = GeneratorMap::identity();
        for (i, &action) in self.actions.iter().enumerate() {
            let i = i as u32;
            if i == self.multiplier.index {
                continue;
            }
            let x = Word::generator(i);
            let image = match action {
                MoveAction::Fix => continue,
                MoveAction::Right => x.product(&a),
                MoveAction::Left => a_inv.product(&x),
                MoveAction::Conjugate => a_inv.product(&x).product(&a),
            };
            map.insert(i, image);
        }
        map
    }

    /// Replacing `a` by `a^-1` inverts the move.
    pub fn inverse(&self) -> WhiteheadMove {
        WhiteheadMove {
            multiplier: self.multiplier.inverse(),
            actions: self.actions.clone(),
        }
    }

    /// All non-trivial type-2 moves in rank `rank`, in a fixed order.
    pub fn all(rank: u32) -> Vec<WhiteheadMove> {
        let r = rank as usize;
        let mut moves = Vec::new();
        for index in 0..rank {
            for multiplier in [Letter::pos(index), Letter::neg(index)] {
                let others = r.saturating_sub(1) as u32;
                for code in 1..4usize.pow(others) {
                    let mut actions = vec![MoveAction::Fix; r];
                    let mut rest = code;
                    for (i, slot) in actions.iter_mut().enumerate() {
                        if i as u32 == index {
                            continue;
                        }
                        *slot = ACTIONS[rest % 4];
                        rest /= 4;
                    }
                    moves.push(WhiteheadMove {
                        multiplier,
                        actions,
                    });
                }
            }
        }
        moves
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub automorphism: GeneratorMap,
    /// Cyclically reduced image after the step.
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PrimitivityVerdict {
    Primitive {
        /// A basis of the rank-`r` free group containing the word.
        basis: Vec<Word>,
        trace: Vec<TraceStep>,
    },
    NotPrimitive {
        reason: String,
        trace: Vec<TraceStep>,
    },
}

impl PrimitivityVerdict {
    pub fn is_primitive(&self) -> bool {
        matches!(self, PrimitivityVerdict::Primitive { .. })
    }

    pub fn trace(&self) -> &[TraceStep] {
        match self {
            PrimitivityVerdict::Primitive { trace, .. } | PrimitivityVerdict::NotPrimitive { trace, .. } => trace,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitivityError {
    #[error("the trivial word is not primitive or non-primitive; supply a nontrivial word")]
    Trivial,
    #[error("rank must be positive")]
    ZeroRank,
    #[error("rank {rank} exceeds the configured bound {max} (set {MAX_RANK_ENV} to raise it)")]
    RankAboveBound { rank: u32, max: u32 },
    #[error("{word} involves generators at or above rank {rank}")]
    OutsideRank { word: Word, rank: u32 },
}

pub fn is_primitive(word: &Word, rank: u32) -> Result<PrimitivityVerdict, PrimitivityError> {
    is_primitive_with(word, rank, &WhiteheadConfig::from_env())
}

/// Whether `word` belongs to some basis of `F(x_0 .. x_{rank-1})`.
pub fn is_primitive_with(
    word: &Word,
    rank: u32,
    config: &WhiteheadConfig,
) -> Result<PrimitivityVerdict, PrimitivityError> {
    if word.is_identity() {
        return Err(PrimitivityError::Trivial);
    }
    if rank == 0 {
        return Err(PrimitivityError::ZeroRank);
    }
    if rank > config.max_rank {
        return Err(PrimitivityError::RankAboveBound {
            rank,
            max: config.max_rank,
        });
    }
    if !word.supported_below(rank) {
        return Err(PrimitivityError::OutsideRank {
            word: word.clone(),
            rank,
        });
    }
    let content = abelianize(word).content();
    if content != 1 {
        return Ok(PrimitivityVerdict::NotPrimitive {
            reason: format!("abelianization has content {content}, not 1"),
            trace: Vec::new(),
        });
    }
    if let Some(basis) = replace_one_generator(word, rank) {
        return Ok(PrimitivityVerdict::Primitive {
            basis,
            trace: Vec::new(),
        });
    }

    let moves = WhiteheadMove::all(rank);
    let (mut conjugator, mut current) = word.cyclic_decomposition();
    // `total_inverse` undoes every move applied so far, and
    // `moved(word) = conjugator * current * conjugator^-1`.
    let mut total_inverse = GeneratorMap::identity();
    let mut trace = Vec::new();
    while current.len() > 1 {
        let best = moves
            .iter()
            .map(|m| {
                let map = m.to_map();
                let image = map.apply(&current);
                let (u, c) = image.cyclic_decomposition();
                (c.len(), m, map, u, c)
            })
            .min_by_key(|entry| entry.0)
            .expect("rank >= 1 with a word of length >= 2 has moves");
        let (length, step, map, u, c) = best;
        if length >= current.len() {
            return Ok(PrimitivityVerdict::NotPrimitive {
                reason: format!(
                    "Whitehead-minimal cyclic word {current} has length {} > 1",
                    current.len()
                ),
                trace,
            });
        }
        conjugator = map.apply(&conjugator).product(&u);
        total_inverse = GeneratorMap::compose(&total_inverse, &step.inverse().to_map());
        current = c;
        trace.push(TraceStep {
            automorphism: map,
            word: current.clone(),
        });
    }

    // `current` is a single letter `x_a^e`; pull the conjugated standard
    // basis back through the moves.
    let letter = current.letters()[0];
    let basis: Vec<Word> = (0..rank)
        .map(|i| {
            if i == letter.index {
                word.clone()
            } else {
                total_inverse.apply(&Word::generator(i).conjugate_by(&conjugator))
            }
        })
        .collect();
    debug_assert!(is_basis(&basis, rank));
    Ok(PrimitivityVerdict::Primitive { basis, trace })
}

/// `{x_0 .. x_{r-1}}` with one generator replaced by `word`, if that is a
/// basis.
fn replace_one_generator(word: &Word, rank: u32) -> Option<Vec<Word>> {
    (0..rank).find_map(|j| {
        let basis: Vec<Word> = (0..rank)
            .map(|i| if i == j { word.clone() } else { Word::generator(i) })
            .collect();
        is_basis(&basis, rank).then_some(basis)
    })
}

/// `rank` words generating `F(x_0 .. x_{rank-1})`, hence a basis.
pub(crate) fn is_basis(words: &[Word], rank: u32) -> bool {
    let graph = fold(words);
    words.len() == rank as usize
        && graph.rank() == rank as usize
        && (0..rank).all(|i| graph.contains(&Word::generator(i)))
}
