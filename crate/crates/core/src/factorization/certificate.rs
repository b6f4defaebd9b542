use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stallings::fold;
use crate::words::{GeneratorMap, Word};

/// A basis `Z` of `F(x_0 .. x_{r-1})` together with the mutually inverse
/// substitutions relating it to the standard basis.
///
/// `forward` sends `x_j` to `Z_j`. `backward` expresses each `x_j` as a
/// word in `Z`, with symbol `j` standing for `Z_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCertificate {
    pub z_basis: Vec<Word>,
    pub forward: GeneratorMap,
    pub backward: GeneratorMap,
    pub ambient_rank: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("ambient rank must be positive")]
    ZeroRank,
    #[error("Z has {len} elements, expected {rank}")]
    WrongSize { len: usize, rank: u32 },
    #[error("Z_{index} = {found} but forward sends x{index} to {expected}")]
    ForwardMismatch { index: u32, found: Word, expected: Word },
    #[error("{which} map involves x{index}, outside rank {rank}")]
    OutsideRank { which: &'static str, index: u32, rank: u32 },
    #[error("forward(backward(x{index})) = {image}")]
    NotRightInverse { index: u32, image: Word },
    #[error("backward(forward(x{index})) = {image}")]
    NotLeftInverse { index: u32, image: Word },
    #[error("Z folds to rank {found}, expected {rank}")]
    FoldedRank { found: usize, rank: u32 },
    #[error("x{index} is not in the subgroup generated by Z")]
    MissingGenerator { index: u32 },
    #[error("{word} is not an element of Z")]
    NotInBasis { word: Word },
}

fn check_support(map: &GeneratorMap, which: &'static str, rank: u32) -> Result<(), CertificateError> {
    let outside = |index: u32| CertificateError::OutsideRank { which, index, rank };
    if let Some(index) = map.support().find(|&i| i >= rank) {
        return Err(outside(index));
    }
    for (_, image) in map.assignments() {
        if let Some(index) = image.max_index().filter(|&i| i >= rank) {
            return Err(outside(index));
        }
    }
    Ok(())
}

impl BasisCertificate {
    /// Builds the certificate for `forward` and `backward`, with `Z` read
    /// off `forward`.
    pub fn from_maps(forward: GeneratorMap, backward: GeneratorMap, ambient_rank: u32) -> Self {
        BasisCertificate {
            z_basis: (0..ambient_rank).map(|j| forward.image(j)).collect(),
            forward,
            backward,
            ambient_rank,
        }
    }

    /// Re-checks every invariant from scratch: `|Z|`, `Z = forward(x)`,
    /// both compositions, and that `Z` folds to a rank-`r` graph containing
    /// every standard generator.
    pub fn verify(&self) -> Result<(), CertificateError> {
        let rank = self.ambient_rank;
        if rank == 0 {
            return Err(CertificateError::ZeroRank);
        }
        if self.z_basis.len() != rank as usize {
            return Err(CertificateError::WrongSize {
                len: self.z_basis.len(),
                rank,
            });
        }
        check_support(&self.forward, "forward", rank)?;
        check_support(&self.backward, "backward", rank)?;
        for (j, z) in self.z_basis.iter().enumerate() {
            let expected = self.forward.image(j as u32);
            if *z != expected {
                return Err(CertificateError::ForwardMismatch {
                    index: j as u32,
                    found: z.clone(),
                    expected,
                });
            }
        }
        let right = GeneratorMap::compose(&self.forward, &self.backward);
        if let Some(index) = right.support().next() {
            return Err(CertificateError::NotRightInverse {
                index,
                image: right.image(index),
            });
        }
        let left = GeneratorMap::compose(&self.backward, &self.forward);
        if let Some(index) = left.support().next() {
            return Err(CertificateError::NotLeftInverse {
                index,
                image: left.image(index),
            });
        }
        let graph = fold(&self.z_basis);
        if graph.rank() != rank as usize {
            return Err(CertificateError::FoldedRank {
                found: graph.rank(),
                rank,
            });
        }
        if let Some(index) = (0..rank).find(|&i| !graph.contains(&Word::generator(i))) {
            return Err(CertificateError::MissingGenerator { index });
        }
        Ok(())
    }

    /// Checks that every word of `subgroup` is an element of `Z`.
    pub fn check_extends(&self, subgroup: &[Word]) -> Result<(), CertificateError> {
        match subgroup.iter().find(|w| !self.z_basis.contains(w)) {
            Some(word) => Err(CertificateError::NotInBasis { word: word.clone() }),
            None => Ok(()),
        }
    }
}
