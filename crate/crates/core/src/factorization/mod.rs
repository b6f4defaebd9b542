//! Free-factor machinery: triangular solving of witness families, basis
//! extension certificates, automorphism extension and primitivity.

mod certificate;
mod recipe;
mod whitehead;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::stallings::{fold, fold_tracked};
use crate::words::{GeneratorMap, Sign, Word};

pub use certificate::{BasisCertificate, CertificateError};
pub use recipe::{RecipeError, WitnessRecipe};
pub use whitehead::{
    is_primitive, is_primitive_with, MoveAction, PrimitivityError, PrimitivityVerdict, TraceStep,
    WhiteheadConfig, WhiteheadMove, DEFAULT_MAX_RANK, MAX_RANK_ENV,
};

/// Inverts `y_i = x_{ki}^sign w(x_{ki+1}, ..., x_{ki+h})` for `i <= n` by
/// back-substitution from `i = n` down to `0`.
///
/// In the returned certificate symbol `ki` of `backward` stands for `y_i`;
/// every other symbol `j` stands for `x_j` itself.
pub fn triangular_solve(recipe: &WitnessRecipe, n: u32) -> BasisCertificate {
    let mut backward = GeneratorMap::identity();
    for i in (0..=n).rev() {
        let lead = recipe.lead(i);
        let coding = backward.apply(&recipe.coding_word(i));
        let symbol = Word::generator(lead);
        let image = match recipe.sign() {
            Sign::Pos => symbol.product(&coding.inverse()),
            Sign::Neg => coding.product(&symbol.inverse()),
        };
        backward.insert(lead, image);
    }
    BasisCertificate::from_maps(recipe.forward_map(n), backward, recipe.ambient_rank(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("generator {position} is trivial")]
    Trivial { position: usize },
    #[error("generator {position} ({word}) involves generators at or above rank {rank}")]
    OutsideRank { position: usize, word: Word, rank: u32 },
    #[error("generators are dependent: they fold to rank {rank} but there are {count}")]
    Dependent { rank: usize, count: usize },
}

/// Outcome of [`free_factor_certificate`]. A refusal says nothing about
/// whether the subgroup is a free factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FreeFactorOutcome {
    Certified { certificate: BasisCertificate },
    NoCertificateFound { reason: String },
}

/// Tries to extend `subgroup` to a basis of `F(x_0 .. x_{rank-1})`.
///
/// Recognised pattern: the generators can be ordered so that each one has
/// a pivot generator that occurs in it exactly once and in none of the
/// generators after it. Witness families and single generators are of this
/// shape. Anything else is refused.
pub fn free_factor_certificate(
    subgroup: &[Word],
    rank: u32,
) -> Result<FreeFactorOutcome, FactorError> {
    for (position, word) in subgroup.iter().enumerate() {
        if word.is_identity() {
            return Err(FactorError::Trivial { position });
        }
        if !word.supported_below(rank) {
            return Err(FactorError::OutsideRank {
                position,
                word: word.clone(),
                rank,
            });
        }
    }
    let tracked = fold_tracked(subgroup);
    if !tracked.independent() {
        return Err(FactorError::Dependent {
            rank: tracked.graph().rank(),
            count: subgroup.len(),
        });
    }

    let counts: Vec<BTreeMap<u32, usize>> = subgroup
        .iter()
        .map(|w| {
            let mut c = BTreeMap::new();
            for l in w.letters() {
                *c.entry(l.index).or_insert(0) += 1;
            }
            c
        })
        .collect();
    let mut remaining: Vec<usize> = (0..subgroup.len()).collect();
    let mut removal: Vec<(usize, u32)> = Vec::new();
    while !remaining.is_empty() {
        let found = remaining.iter().enumerate().find_map(|(slot, &g)| {
            counts[g]
                .iter()
                .filter(|&(_, &c)| c == 1)
                .map(|(&p, _)| p)
                .find(|p| remaining.iter().all(|&o| o == g || !counts[o].contains_key(p)))
                .map(|p| (slot, g, p))
        });
        let Some((slot, g, pivot)) = found else {
            return Ok(FreeFactorOutcome::NoCertificateFound {
                reason: format!(
                    "no pivot generator for {} of the generators; the triangular pattern does not apply",
                    remaining.len()
                ),
            });
        };
        remaining.remove(slot);
        removal.push((g, pivot));
    }

    let forward = GeneratorMap::from_assignments(
        removal.iter().map(|&(g, p)| (p, subgroup[g].clone())),
    );
    let mut backward = GeneratorMap::identity();
    for &(g, pivot) in removal.iter().rev() {
        let letters = subgroup[g].letters();
        let at = letters.iter().position(|l| l.index == pivot).expect("pivot occurs");
        let before = backward.apply(&Word::from_letters(letters[..at].iter().copied()));
        let after = backward.apply(&Word::from_letters(letters[at + 1..].iter().copied()));
        let solved = before
            .inverse()
            .product(&Word::generator(pivot))
            .product(&after.inverse());
        let image = match letters[at].sign {
            Sign::Pos => solved,
            Sign::Neg => solved.inverse(),
        };
        backward.insert(pivot, image);
    }
    Ok(FreeFactorOutcome::Certified {
        certificate: BasisCertificate::from_maps(forward, backward, rank),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error("the map moves x{index}, at or above the factor rank {rank}")]
    MovesOutside { index: u32, rank: u32 },
    #[error("the image of x{index} involves generators at or above the factor rank {rank}")]
    ImageOutside { index: u32, rank: u32 },
    #[error("the map is not an automorphism of the factor: images fold to rank {found}, or miss x{missing:?}")]
    NotAutomorphism { found: usize, missing: Option<u32> },
    #[error("the supplied inverse does not invert the map on x{index}")]
    NotInverse { index: u32 },
}

fn check_inside(map: &GeneratorMap, rank: u32) -> Result<(), ExtendError> {
    for (index, image) in map.assignments() {
        if index >= rank {
            return Err(ExtendError::MovesOutside { index, rank });
        }
        if !image.supported_below(rank) {
            return Err(ExtendError::ImageOutside { index, rank });
        }
    }
    Ok(())
}

/// Extends an automorphism of the free factor `F(x_0 .. x_{r-1})` by the
/// identity on every generator at or above `r`.
///
/// Without `inverse`, bijectivity on the factor is checked by folding the
/// images (a generating set of size `r` of a free group of rank `r` is a
/// basis). With `inverse`, both composites are checked instead.
pub fn extend_automorphism(
    inner: &GeneratorMap,
    factor_rank: u32,
    inverse: Option<&GeneratorMap>,
) -> Result<GeneratorMap, ExtendError> {
    check_inside(inner, factor_rank)?;
    match inverse {
        Some(inv) => {
            check_inside(inv, factor_rank)?;
            for composite in [
                GeneratorMap::compose(inner, inv),
                GeneratorMap::compose(inv, inner),
            ] {
                if let Some(index) = composite.support().next() {
                    return Err(ExtendError::NotInverse { index });
                }
            }
        }
        None => {
            let images: Vec<Word> = (0..factor_rank).map(|i| inner.image(i)).collect();
            let graph = fold(&images);
            let missing = (0..factor_rank).find(|&i| !graph.contains(&Word::generator(i)));
            if graph.rank() != factor_rank as usize || missing.is_some() {
                return Err(ExtendError::NotAutomorphism {
                    found: graph.rank(),
                    missing,
                });
            }
        }
    }
    Ok(inner.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn ws(texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| w(t)).collect()
    }

    fn map(text: &str) -> GeneratorMap {
        text.parse().unwrap()
    }

    fn case1() -> WitnessRecipe {
        WitnessRecipe::from_text(1, 1, "z1^-2", Sign::Pos).unwrap()
    }

    #[test]
    fn solve_case1_n0() {
        let cert = triangular_solve(&case1(), 0);
        assert_eq!(cert.backward, map("x0 -> x0 x1^2"));
        assert_eq!(cert.z_basis, ws(&["x0 x1^-2", "x1"]));
        assert_eq!(cert.verify(), Ok(()));
    }

    #[test]
    fn solve_case1_n1() {
        let cert = triangular_solve(&case1(), 1);
        // x1 = y1 x2^2 and x0 = y0 (y1 x2^2)^2, symbol x_i standing for y_i.
        assert_eq!(cert.backward.image(1), w("x1 x2^2"));
        assert_eq!(cert.backward.image(0), w("x0 (x1 x2^2)^2"));
        assert_eq!(cert.z_basis, ws(&["x0 x1^-2", "x1 x2^-2", "x2"]));
        assert_eq!(cert.ambient_rank, 3);
        assert_eq!(cert.verify(), Ok(()));
    }

    #[test]
    fn solve_commutator_family() {
        let recipe = WitnessRecipe::from_text(2, 2, "[z1,z2]", Sign::Neg).unwrap();
        let cert = triangular_solve(&recipe, 0);
        let y0 = w("x0^-1 [x1, x2]");
        assert_eq!(cert.z_basis[0], y0);
        assert_eq!(cert.backward.image(0), w("[x1, x2] x0^-1"));
        assert_eq!(cert.verify(), Ok(()));
        for n in 0..6 {
            assert_eq!(triangular_solve(&recipe, n).verify(), Ok(()));
        }
    }

    #[test]
    fn free_factor_examples() {
        let FreeFactorOutcome::Certified { certificate } =
            free_factor_certificate(&ws(&["x0"]), 2).unwrap()
        else {
            panic!("expected a certificate")
        };
        assert_eq!(certificate.z_basis, ws(&["x0", "x1"]));

        let FreeFactorOutcome::Certified { certificate } =
            free_factor_certificate(&ws(&["x0 x1^-2"]), 2).unwrap()
        else {
            panic!("expected a certificate")
        };
        assert_eq!(certificate.z_basis, ws(&["x0 x1^-2", "x1"]));
        assert_eq!(certificate.backward, map("x0 -> x0 x1^2"));

        let gens = ws(&["x0 x1^-2", "x1 x2^-2"]);
        let FreeFactorOutcome::Certified { certificate } =
            free_factor_certificate(&gens, 3).unwrap()
        else {
            panic!("expected a certificate")
        };
        assert_eq!(certificate.z_basis, ws(&["x0 x1^-2", "x1 x2^-2", "x2"]));
        assert_eq!(certificate, triangular_solve(&case1(), 1));
        assert_eq!(certificate.verify(), Ok(()));
        assert_eq!(certificate.check_extends(&gens), Ok(()));
    }

    #[test]
    fn free_factor_pivot_in_the_middle() {
        let gens = ws(&["x1^2 x0^-1 x1", "x2 x1 x2"]);
        let FreeFactorOutcome::Certified { certificate } =
            free_factor_certificate(&gens, 3).unwrap()
        else {
            panic!("expected a certificate")
        };
        assert_eq!(certificate.verify(), Ok(()));
        assert_eq!(certificate.check_extends(&gens), Ok(()));
    }

    #[test]
    fn free_factor_refusal_and_errors() {
        // x0^2 x1^2 is not primitive, and nothing occurs exactly once.
        let outcome = free_factor_certificate(&ws(&["x0^2 x1^2"]), 2).unwrap();
        assert!(matches!(outcome, FreeFactorOutcome::NoCertificateFound { .. }));

        assert_eq!(
            free_factor_certificate(&ws(&["x0", "x0^2"]), 2),
            Err(FactorError::Dependent { rank: 1, count: 2 })
        );
        assert!(matches!(
            free_factor_certificate(&ws(&["x3"]), 2),
            Err(FactorError::OutsideRank { position: 0, .. })
        ));
        assert_eq!(
            free_factor_certificate(&ws(&["e"]), 2),
            Err(FactorError::Trivial { position: 0 })
        );
    }

    #[test]
    fn extension_examples() {
        let swap = map("x0 -> x1; x1 -> x0");
        let ext = extend_automorphism(&swap, 2, None).unwrap();
        assert_eq!(ext.image(2), w("x2"));
        assert_eq!(ext.image(3), w("x3"));

        let inner = map("x0 -> x0 x1^-2");
        let inverse = map("x0 -> x0 x1^2");
        let ext = extend_automorphism(&inner, 2, Some(&inverse)).unwrap();
        let ext_inv = extend_automorphism(&inverse, 2, None).unwrap();
        for i in 0..4 {
            assert_eq!(
                GeneratorMap::compose(&ext, &ext_inv).image(i),
                Word::generator(i)
            );
        }
        assert_eq!(ext.image(2), w("x2"));

        let id = extend_automorphism(&GeneratorMap::identity(), 3, None).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn extension_errors() {
        assert_eq!(
            extend_automorphism(&map("x2 -> x0"), 2, None),
            Err(ExtendError::MovesOutside { index: 2, rank: 2 })
        );
        assert_eq!(
            extend_automorphism(&map("x0 -> x0 x2"), 2, None),
            Err(ExtendError::ImageOutside { index: 0, rank: 2 })
        );
        assert!(matches!(
            extend_automorphism(&map("x0 -> x0^2"), 2, None),
            Err(ExtendError::NotAutomorphism { .. })
        ));
        assert_eq!(
            extend_automorphism(&map("x0 -> x0 x1"), 2, Some(&map("x0 -> x0 x1"))),
            Err(ExtendError::NotInverse { index: 0 })
        );
    }
}
