//! Finite support closure across several bases of the same free group.
//!
//! Starting from a seed set, each round visits the bases in order. For the
//! current basis, every current element is expressed as a reduced word in
//! that basis and the basis elements occurring in some expression are
//! collected; the current elements are then replaced by the collected basis
//! elements. The process stops once a full round collects nothing new.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::{fold_tracked, TrackedGraph};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("basis {basis} is not independent (folded rank {rank}, {len} words)")]
    NotIndependent { basis: usize, rank: usize, len: usize },
    #[error("{word} is not in the subgroup generated by basis {basis}")]
    NonMember { basis: usize, word: Word },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportClosure {
    /// For each basis, the positions of its elements in the final support.
    pub supports: Vec<BTreeSet<usize>>,
    /// Completed rounds, including the final round that added nothing.
    pub rounds: usize,
}

impl SupportClosure {
    /// The support of basis `i` as words.
    pub fn support_words(&self, i: usize, bases: &[Vec<Word>]) -> Vec<Word> {
        self.supports[i].iter().map(|&j| bases[i][j].clone()).collect()
    }
}

pub fn support_closure(seeds: &[Word], bases: &[Vec<Word>]) -> Result<SupportClosure, ClosureError> {
    let graphs: Vec<TrackedGraph> = bases
        .iter()
        .enumerate()
        .map(|(i, basis)| {
            let tracked = fold_tracked(basis);
            if tracked.independent() {
                Ok(tracked)
            } else {
                Err(ClosureError::NotIndependent {
                    basis: i,
                    rank: tracked.graph().rank(),
                    len: basis.len(),
                })
            }
        })
        .collect::<Result<_, _>>()?;

    let mut supports = vec![BTreeSet::new(); bases.len()];
    let mut current: Vec<Word> = seeds.iter().filter(|w| !w.is_identity()).cloned().collect();
    let mut rounds = 0;
    if bases.is_empty() {
        return Ok(SupportClosure { supports, rounds });
    }
    loop {
        rounds += 1;
        let mut grew = false;
        for (i, graph) in graphs.iter().enumerate() {
            for word in &current {
                let expression = graph.express(word).ok_or_else(|| ClosureError::NonMember {
                    basis: i,
                    word: word.clone(),
                })?;
                for letter in expression.letters() {
                    grew |= supports[i].insert(letter.index as usize);
                }
            }
            current = supports[i].iter().map(|&j| bases[i][j].clone()).collect();
        }
        if !grew {
            return Ok(SupportClosure { supports, rounds });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| Word::parse(t).unwrap()).collect()
    }

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn single_standard_basis() {
        let standard = ws(&["x0", "x1", "x2", "x3"]);
        let closure = support_closure(&ws(&["x0 x3"]), &[standard]).unwrap();
        assert_eq!(closure.supports, vec![set(&[0, 3])]);
    }

    #[test]
    fn support_inside_a_y_basis() {
        let y = ws(&["x0 x1^-2", "x1 x2^-2", "x2 x3^-2"]);
        let seed = y[0].product(&y[1]);
        let closure = support_closure(&[seed], &[y]).unwrap();
        assert_eq!(closure.supports, vec![set(&[0, 1])]);
    }

    #[test]
    fn alternating_bases_reach_fixpoint() {
        let z = ws(&["x0 x1^-2", "x1", "x2"]);
        let x = ws(&["x0", "x1", "x2"]);
        let bases = vec![z, x];
        let closure = support_closure(&ws(&["x0"]), &bases).unwrap();
        assert_eq!(closure.supports, vec![set(&[0, 1]), set(&[0, 1])]);
        assert_eq!(closure.rounds, 2);
        assert_eq!(closure.support_words(0, &bases), ws(&["x0 x1^-2", "x1"]));
    }

    #[test]
    fn errors() {
        let err = support_closure(&ws(&["x0"]), &[ws(&["x0", "x0^2"])]).unwrap_err();
        assert!(matches!(err, ClosureError::NotIndependent { basis: 0, .. }));
        let err = support_closure(&ws(&["x0"]), &[ws(&["x0 x1^-2", "x1 x2^-2"])]).unwrap_err();
        assert_eq!(
            err,
            ClosureError::NonMember {
                basis: 0,
                word: Word::parse("x0").unwrap()
            }
        );
    }
}
