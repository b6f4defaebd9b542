//! Exact computations in free groups and a few of their verbal quotients.
//!
//! * [`words`]: reduced words and generator maps.
//! * [`stallings`]: folded subgroup graphs, membership and bases.
//! * [`factorization`]: triangular solving, free-factor certificates,
//!   automorphism extension and Whitehead primitivity.
//! * [`varieties`]: abelian, exponent-n abelian and class-2 nilpotent
//!   normal forms, plus exact dyadic evaluation.
//! * [`cp`]: witness families and finite-truncation verification reports.

pub mod cp;
pub mod factorization;
pub mod stallings;
pub mod varieties;
pub mod words;

pub use cp::{CpReport, Witness};
pub use factorization::{BasisCertificate, WitnessRecipe};
pub use stallings::SubgroupGraph;
pub use varieties::{AbelianVector, Dyadic, Nil2Element, VarietyTag};
pub use words::{apply_hom, compose_hom, reduce, GeneratorMap, Letter, Sign, Word};
