use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::seed::Setup;
use super::subdivide::subdivide_scaled;
use super::{LatticeError, LatticePoint, LatticeTriangle, Surrounding};
use crate::number_field::FieldContext;
use crate::par::{self, Exec};

/// A triangle of the patch with its size label. The realized triangle is
/// `λ^{label-1}` times `base`, and `base` lies in `𝒯`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledTriangle {
    pub triangle: LatticeTriangle,
    pub label: u32,
    pub base: LatticeTriangle,
    /// Generation in which the triangle received label 1.
    pub born: u32,
}

/// A translate `offset + T₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacedTile {
    pub offset: LatticePoint,
    pub vertices: Vec<LatticePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchTiling {
    pub triangles: Vec<LabeledTriangle>,
    pub central_tiles: Vec<PlacedTile>,
    pub generation: u32,
    pub subdivisions: usize,
    /// Vertices at which two labels differ by more than one modulo `n + 2`.
    pub label_gaps: usize,
    /// Radius of a disk around the origin covered by the patch.
    pub covered_radius: f64,
    /// Set when the triangle cap stopped growth early.
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct GrowOptions {
    pub max_triangles: usize,
    pub with_central_tile: bool,
    pub exec: Exec,
}

impl Default for GrowOptions {
    fn default() -> Self {
        GrowOptions { max_triangles: 200_000, with_central_tile: true, exec: Exec::default() }
    }
}

pub fn grow_tiling(ctx: &FieldContext, setup: &Setup, generations: u32) -> Result<PatchTiling, LatticeError> {
    grow_tiling_with(ctx, setup, generations, GrowOptions::default())
}

fn place(setup: &Setup, offset: Vec<i64>) -> PlacedTile {
    let vertices = setup.t0.iter().map(|v| LatticePoint(super::lattice::add(&offset, &v.0))).collect();
    PlacedTile { offset: LatticePoint(offset), vertices }
}

fn annulus_at(setup: &Setup, offset: &[i64], generation: u32) -> Vec<LabeledTriangle> {
    setup
        .annulus
        .iter()
        .map(|t| {
            let t = t.translated(offset);
            LabeledTriangle { triangle: t.clone(), label: 1, base: t, born: generation }
        })
        .collect()
}

/// Grows the patch from `T₀` by repeated multiplication by `λ`, subdividing
/// triangles whose label reaches `n + 2`. Surroundings are taken among the
/// triangles born in the same generation.
pub fn grow_tiling_with(
    ctx: &FieldContext,
    setup: &Setup,
    generations: u32,
    opts: GrowOptions,
) -> Result<PatchTiling, LatticeError> {
    let lat = Lattice::new(ctx);
    let top = setup.consts.exponent();
    let mut tiles = vec![place(setup, vec![0; lat.len()])];
    let mut tris: Vec<LabeledTriangle> = Vec::new();
    let mut subdivisions = 0;
    let mut generation = 0;
    let mut truncated = false;
    while generation < generations {
        let g = generation + 1;
        let mut next_tiles = Vec::new();
        let mut next = Vec::new();
        for t in &tiles {
            let c = lat.mul_lambda_pow(&t.offset.0, 1);
            next.extend(annulus_at(setup, &c, g));
            next_tiles.push(place(setup, c));
        }
        let mut due: BTreeMap<u32, Vec<LabeledTriangle>> = BTreeMap::new();
        for t in &tris {
            let scaled = t.triangle.scaled(&lat, 1);
            if t.label < top {
                next.push(LabeledTriangle {
                    triangle: scaled,
                    label: t.label + 1,
                    base: t.base.clone(),
                    born: t.born,
                });
            } else {
                due.entry(t.born).or_default().push(LabeledTriangle { triangle: scaled, ..t.clone() });
            }
        }
        for cohort in due.values() {
            let bases: Vec<LatticeTriangle> = cohort.iter().map(|t| t.base.clone()).collect();
            let results = par::map(opts.exec, cohort, |t| {
                let x = Surrounding::from_tiles(&t.base, &bases);
                let scaled: Vec<LatticeTriangle> = x.triangles().map(|s| s.scaled(&lat, top)).collect();
                subdivide_scaled(&lat, setup, &t.triangle, &scaled, opts.with_central_tile, top)
            });
            for r in results {
                let s = r?;
                subdivisions += 1;
                for c in s.children {
                    next.push(LabeledTriangle { triangle: c.clone(), label: 1, base: c, born: g });
                }
                if let Some(ct) = s.central {
                    next.extend(annulus_at(setup, &ct.offset.0, g));
                    next_tiles.push(place(setup, ct.offset.0));
                }
            }
        }
        tiles = next_tiles;
        tris = next;
        generation = g;
        if tris.len() > opts.max_triangles {
            truncated = true;
            break;
        }
    }
    let label_gaps = count_label_gaps(&tris, top);
    let t0p: Vec<_> = setup.t0.iter().map(|v| lat.planar(&v.0)).collect();
    let r0 = (0..t0p.len())
        .map(|i| {
            crate::geometry::predicates::point_segment_distance([0.0, 0.0], t0p[i], t0p[(i + 1) % t0p.len()])
        })
        .fold(f64::INFINITY, f64::min);
    Ok(PatchTiling {
        triangles: tris,
        central_tiles: tiles,
        generation,
        subdivisions,
        label_gaps,
        covered_radius: r0 * setup.consts.lambda_abs.powi(generation as i32),
        truncated,
    })
}

fn count_label_gaps(tris: &[LabeledTriangle], top: u32) -> usize {
    let mut at: HashMap<&LatticePoint, Vec<u32>> = HashMap::new();
    for t in tris {
        for v in &t.triangle.vertices {
            at.entry(v).or_default().push(t.label);
        }
    }
    let mut gaps = 0;
    for labels in at.values() {
        let lo = labels.iter().min().unwrap();
        let hi = labels.iter().max().unwrap();
        let d = hi - lo;
        if d > 1 && top - d > 1 {
            gaps += 1;
        }
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::IntPolynomial;

    #[test]
    fn first_generations_are_annuli() {
        let ctx = FieldContext::new(&IntPolynomial::new(vec![2, -2, 1]).unwrap()).unwrap();
        let setup = Setup::new(&ctx, None).unwrap();
        let p = grow_tiling(&ctx, &setup, 3).unwrap();
        assert_eq!(p.generation, 3);
        assert_eq!(p.central_tiles.len(), 1);
        assert_eq!(p.triangles.len(), 3 * setup.annulus.len());
        assert!(p.triangles.iter().all(|t| (1..=3).contains(&t.label)));
        assert_eq!(p.subdivisions, 0);
        assert!(!p.truncated);
    }

    #[test]
    fn labels_wrap_through_subdivision() {
        let ctx = FieldContext::new(&IntPolynomial::new(vec![2, -2, 1]).unwrap()).unwrap();
        let mut setup = Setup::new(&ctx, None).unwrap();
        setup.consts.n = 5;
        let opts = GrowOptions { with_central_tile: false, ..Default::default() };
        let p = grow_tiling_with(&ctx, &setup, 8, opts).unwrap();
        let lat = Lattice::new(&ctx);
        assert_eq!(p.subdivisions, setup.annulus.len());
        assert!(p.triangles.iter().all(|t| (1..=7).contains(&t.label)));
        assert!(p.triangles.iter().any(|t| t.label == 1 && t.born == 8));
        for t in &p.triangles {
            assert!(t.base.in_t(&lat, setup.consts.m));
            assert_eq!(t.triangle, t.base.scaled(&lat, t.label - 1));
        }
        // twice the patch area equals twice the area of λ⁸T₀ = 2⁸ · area(T₀)
        let mut area: i128 = p
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.triangle.coeffs();
                lat.twice_area_exact(&a, &b, &c).unwrap()
            })
            .sum();
        let t0: Vec<Vec<i64>> = setup.t0.iter().map(|v| v.0.clone()).collect();
        let poly = |off: &[i64]| -> i128 {
            (1..t0.len() - 1)
                .map(|i| {
                    let s = |v: &Vec<i64>| super::super::lattice::add(off, v);
                    lat.twice_area_exact(&s(&t0[0]), &s(&t0[i]), &s(&t0[i + 1])).unwrap()
                })
                .sum()
        };
        for tile in &p.central_tiles {
            area += poly(&tile.offset.0);
        }
        assert_eq!(area, 256 * poly(&[0, 0]));
    }
}
