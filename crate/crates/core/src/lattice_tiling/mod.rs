//! Self-similar tilings from a complex Perron number by lattice triangles:
//! the seed polygon `T₀` and its annulus, the constants `M, θ, r₁, r₂, n`,
//! Delaunay subdivision of surroundings with a central copy of `λT₀`,
//! size-labelled growth and boundary refinement.
//!
//! Nothing here is needed to state the construction exactly, but it is only
//! exercised end to end for nonreal `λ`. For quadratic nonreal `λ` the space
//! `W` is the plane, so vertical filters are vacuous and areas are exact
//! integers in units of the lattice covolume.

mod boundary;
mod grow;
mod lattice;
mod region;
mod seed;
mod subdivide;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::number_field::{FieldElement, FieldError};

pub use boundary::{edge_arc, refine_boundary, remove_backtracks, Arc, BoundaryCurve};
pub use grow::{grow_tiling, grow_tiling_with, GrowOptions, LabeledTriangle, PatchTiling, PlacedTile};
pub use lattice::Lattice;
pub use region::{in_polygon, lattice_points_in_region, Region, Surface, DEFAULT_BUDGET};
pub use seed::{build_t0, compute_constants, triangulate_annulus, ConstructionConstants, Setup};
pub use subdivide::{
    overlap_agreement, subdivide_surrounding, CentralTile, OverlapReport, Subdivision, ZoneSizes,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("no primitive {0}-th root of unity in ℚ(λ)")]
    NoRootOfUnity(u64),
    #[error("no lattice polygon T₀ with λT₀ ⊃ T₀ found up to scale {max_scale}")]
    T0SearchFailed { max_scale: u32 },
    #[error("annulus triangulation does not cover λT₀ − T₀: {0}")]
    AnnulusMismatch(String),
    #[error("{what} needs {needed} steps, over the limit {limit}")]
    ResourceExceeded { what: String, needed: u64, limit: u64 },
    #[error("region is unbounded or not finite")]
    UnboundedRegion,
    #[error("triangle is not in 𝒯: {0}")]
    NotInT(String),
    #[error("not a surrounding: {0}")]
    NotASurrounding(String),
    #[error("construction bound violated: {0}")]
    ConstantsViolated(String),
    #[error("no admissible position for the central tile")]
    CentralTileNotPlaced,
    #[error("exact cover check failed: {0}")]
    CoverMismatch(String),
    #[error("no edge path from {from} to {to} inside the edge zone")]
    Disconnected { from: String, to: String },
    #[error("refined boundary at level {level} is not simple")]
    NotSimple { level: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// An element of `𝒜` as an integer coefficient vector in the basis
/// `1, λ, …, λ^{d−1}` (twice that for real `λ`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn zero(len: usize) -> Self {
        LatticePoint(vec![0; len])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn to_field_element(&self) -> FieldElement {
        FieldElement::from_ints(&self.0)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

/// A triangle with vertices in `𝒜`, counterclockwise in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeTriangle {
    pub vertices: [LatticePoint; 3],
}

impl LatticeTriangle {
    /// Orders the vertices counterclockwise and rotates the smallest first.
    /// Collinear input is rejected.
    pub fn new(lat: &Lattice, v: [Vec<i64>; 3]) -> Result<Self, LatticeError> {
        use crate::geometry::predicates::orient;
        use std::cmp::Ordering;
        let p: Vec<_> = v.iter().map(|c| lat.planar(c)).collect();
        let mut v = v;
        match orient(p[0], p[1], p[2]) {
            Ordering::Equal => {
                return Err(LatticeError::NotInT(format!("collinear vertices {v:?}")));
            }
            Ordering::Less => v.swap(1, 2),
            Ordering::Greater => {}
        }
        let k = (0..3).min_by(|&a, &b| v[a].cmp(&v[b])).unwrap();
        v.rotate_left(k);
        let [a, b, c] = v;
        Ok(LatticeTriangle { vertices: [a.into(), b.into(), c.into()] })
    }

    pub fn coeffs(&self) -> [Vec<i64>; 3] {
        [self.vertices[0].0.clone(), self.vertices[1].0.clone(), self.vertices[2].0.clone()]
    }

    pub fn planar(&self, lat: &Lattice) -> [crate::geometry::Point; 3] {
        [
            lat.planar(&self.vertices[0].0),
            lat.planar(&self.vertices[1].0),
            lat.planar(&self.vertices[2].0),
        ]
    }

    pub fn to_field_elements(&self) -> [FieldElement; 3] {
        [
            self.vertices[0].to_field_element(),
            self.vertices[1].to_field_element(),
            self.vertices[2].to_field_element(),
        ]
    }

    /// `λ^k t`.
    pub fn scaled(&self, lat: &Lattice, k: u32) -> LatticeTriangle {
        LatticeTriangle {
            vertices: [
                lat.mul_lambda_pow(&self.vertices[0].0, k).into(),
                lat.mul_lambda_pow(&self.vertices[1].0, k).into(),
                lat.mul_lambda_pow(&self.vertices[2].0, k).into(),
            ],
        }
    }

    pub fn translated(&self, by: &[i64]) -> LatticeTriangle {
        LatticeTriangle {
            vertices: [
                lattice::add(&self.vertices[0].0, by).into(),
                lattice::add(&self.vertices[1].0, by).into(),
                lattice::add(&self.vertices[2].0, by).into(),
            ],
        }
    }

    pub fn shares_vertex(&self, other: &LatticeTriangle) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }

    /// Largest planar and vertical edge lengths.
    pub fn edge_extent(&self, lat: &Lattice) -> (f64, f64) {
        let mut e = (0.0f64, 0.0f64);
        for i in 0..3 {
            let d = lattice::sub(&self.vertices[(i + 1) % 3].0, &self.vertices[i].0);
            let p = lat.planar(&d);
            e.0 = e.0.max(p[0].hypot(p[1]));
            e.1 = e.1.max(lat.vertical_norm(&d));
        }
        e
    }

    /// Membership in `𝒯` for the integer `m`: all edges shorter than `3M`
    /// both in the plane and vertically.
    pub fn in_t(&self, lat: &Lattice, m: u32) -> bool {
        let (p, v) = self.edge_extent(lat);
        p < 3.0 * m as f64 && v < 3.0 * m as f64
    }
}

/// A triangle of `𝒯` with the triangles touching it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Surrounding {
    pub center: LatticeTriangle,
    pub ring: Vec<LatticeTriangle>,
}

impl Surrounding {
    /// All triangles of `tiles` sharing a vertex with `center`.
    pub fn from_tiles(center: &LatticeTriangle, tiles: &[LatticeTriangle]) -> Self {
        let ring = tiles
            .iter()
            .filter(|t| *t != center && t.shares_vertex(center))
            .cloned()
            .collect();
        Surrounding { center: center.clone(), ring }
    }

    pub fn triangles(&self) -> impl Iterator<Item = &LatticeTriangle> {
        std::iter::once(&self.center).chain(&self.ring)
    }

    pub fn contains(&self, t: &LatticeTriangle) -> bool {
        self.triangles().any(|s| s == t)
    }
}
