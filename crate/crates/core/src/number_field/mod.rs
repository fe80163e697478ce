//! Arithmetic in the number field generated by the expansion constant:
//! exact rational coefficients in the power basis, the Minkowski-style
//! embedding into `W`, the projection onto the expanding plane and the
//! vertical norm.

mod classify;
mod context;
mod cyclotomic;
pub mod lll;
pub mod poly;
pub mod roots;

use thiserror::Error;

pub use classify::{classify_perron, is_irreducible, minimal_factor, PerronClass};
pub use context::{EmbeddedPoint, EmbeddingBlock, FieldContext, FieldElement};
pub use cyclotomic::{cyclotomic_in_field, verifies_exactly};
pub use poly::{cyclotomic_polynomial, euler_phi, IntPolynomial, RatPoly};
pub use roots::{find_roots, Root};

/// Default absolute tolerance for embedding identities.
pub const EMBED_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("root iteration did not converge; residuals {residuals:?}")]
    RootsDidNotConverge { residuals: Vec<f64> },
    #[error("polynomial is {0:?}, a Perron polynomial is required")]
    NotPerron(PerronClass),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate triangle: vertices are collinear in the plane")]
    DegenerateTriangle,
}
