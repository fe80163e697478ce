//! Self-similar tilings of the plane whose expansion is a complex Perron
//! number.
//!
//! Two constructions are provided. [`free_group`] builds tiles from an
//! endomorphism of a free group whose abelianization has λ as an
//! eigenvalue; the tile boundaries are the rescaled limits of the paths
//! `f(φ^k([a_i, a_j]))` drawn by [`tiling_render`]. [`lattice_tiling`] works
//! for any complex Perron λ: it lifts the plane into the embedding space of
//! ℚ[λ], takes Delaunay triangulations of projected lattice points near the
//! expanded triangles and grows a labelled patch generation by generation.
//!
//! [`number_field`] and [`spectral`] hold the algebraic pieces both rely on.

pub mod free_group;
pub mod geometry;
pub mod lattice_tiling;
pub mod number_field;
pub mod par;
pub mod spectral;
pub mod tiling_render;
