//! Free groups, their endomorphisms, and the rewriting of commutator images
//! as products of conjugated basic commutators `g [a_i, a_j]^{±1} g⁻¹`.

mod decompose;
mod endo;
mod word;

use thiserror::Error;

pub use decompose::{
    decompose_commutator_word, expand_commutator, letter_commutator, ConjugatedCommutator,
    Decomposition,
};
pub use endo::{
    apply_endo, characteristic_polynomial, commutator_images, consistency_check,
    consistency_check_lambda, endo_subdivision, generator_vectors, lambda2_matrix, pair_basis,
    signed_counts, standard_endo, ConsistencyReport, EndoSubdivision, Endomorphism, Lambda2,
    Placement,
};
pub use word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeGroupError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid endomorphism: {0}")]
    InvalidEndomorphism(String),
    #[error("generator {gen} out of range for {n} generators")]
    GeneratorOutOfRange { gen: u16, n: usize },
    #[error("word is not in the commutator subgroup (abelianization {0:?})")]
    NotInCommutatorSubgroup(Vec<i64>),
    #[error("negative exponent: the image of [{},{}] contains an inverse of [{},{}]", .pair.0, .pair.1, .factor.0, .factor.1)]
    NegativeExponent { pair: (u16, u16), factor: (u16, u16) },
}
