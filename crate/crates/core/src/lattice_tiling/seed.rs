use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::region::in_polygon;
use super::{LatticeError, LatticePoint, LatticeTriangle};
use crate::geometry::predicates::{angles, dist, inradius, orient};
use crate::geometry::{Point, Triangulation};
use crate::number_field::{cyclotomic_in_field, FieldContext};

const MAX_T0_SCALE: u32 = 64;
const MAX_N: u32 = 400;

/// The integer and real constants of the construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionConstants {
    pub m: u32,
    /// Smallest vertex angle over the realized triangles.
    pub theta: f64,
    pub r1: f64,
    pub r2: f64,
    pub n: u32,
    /// `n` required by flatness alone.
    pub n_flat: u32,
    /// `n` required by the inscribed-radius condition alone.
    pub n_inradius: u32,
    pub lambda_abs: f64,
    pub covering_radius: f64,
    pub diam_lambda_t0: f64,
    /// Lower bounds on `M` from its three conditions.
    pub m_bounds: [f64; 3],
}

impl ConstructionConstants {
    /// The exponent used for subdivision, `n + 2`.
    pub fn exponent(&self) -> u32 {
        self.n + 2
    }

    /// `M / |λ|`.
    pub fn small_edge(&self) -> f64 {
        self.m as f64 / self.lambda_abs
    }
}

/// `T₀`, the triangulated annulus `λT₀ − T₀` and the constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Setup {
    pub t0: Vec<LatticePoint>,
    pub annulus: Vec<LatticeTriangle>,
    pub consts: ConstructionConstants,
}

impl Setup {
    pub fn new(ctx: &FieldContext, symmetric_order: Option<u64>) -> Result<Self, LatticeError> {
        let t0 = build_t0(ctx, symmetric_order)?;
        let annulus = triangulate_annulus(ctx, &t0)?;
        let consts = compute_constants(ctx, &t0, &annulus)?;
        Ok(Setup { t0, annulus, consts })
    }
}

fn polygon_ok(pts: &[Point], outer: &[Point]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let o = [0.0, 0.0];
    for i in 0..n {
        let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        if orient(a, b, c) != Ordering::Greater || orient(a, b, o) != Ordering::Greater {
            return false;
        }
    }
    // every vertex strictly inside the convex polygon `outer`
    pts.iter().all(|&p| {
        (0..outer.len()).all(|i| orient(outer[i], outer[(i + 1) % outer.len()], p) == Ordering::Greater)
    })
}

/// A lattice polygon around the origin with `λT₀` strictly containing `T₀`,
/// found by snapping scaled regular polygons to the lattice. With a
/// symmetric order `m` the polygon is the orbit of a fundamental sector under
/// `ζ_m ∈ ℤ[λ]`.
pub fn build_t0(
    ctx: &FieldContext,
    symmetric_order: Option<u64>,
) -> Result<Vec<LatticePoint>, LatticeError> {
    let lat = Lattice::new(ctx);
    let d = ctx.degree();
    let (zeta, m) = match symmetric_order {
        None | Some(1) => (None, 1usize),
        Some(m) => {
            let z = cyclotomic_in_field(ctx, m).ok_or(LatticeError::NoRootOfUnity(m))?;
            let zi = z.to_ints().ok_or(LatticeError::NoRootOfUnity(m))?;
            (Some(zi[..d].to_vec()), m as usize)
        }
    };
    let sides = m * 8usize.div_ceil(m);
    let seeds = sides / m;
    for scale in 1..=MAX_T0_SCALE {
        let s = scale as f64;
        let mut verts: Vec<Vec<i64>> = Vec::new();
        for k in 0..seeds {
            let a = 2.0 * PI * k as f64 / sides as f64;
            let mut c = lat.snap([s * a.cos(), s * a.sin()]);
            verts.push(c.clone());
            if let Some(z) = &zeta {
                for _ in 1..m {
                    c = lat.mul_elem(z, &c);
                    verts.push(c.clone());
                }
            }
        }
        verts.sort();
        verts.dedup();
        let mut with_angle: Vec<(f64, Vec<i64>)> = verts
            .into_iter()
            .map(|c| {
                let p = lat.planar(&c);
                (p[1].atan2(p[0]), c)
            })
            .collect();
        with_angle.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let verts: Vec<Vec<i64>> = with_angle.into_iter().map(|(_, c)| c).collect();
        let pts: Vec<Point> = verts.iter().map(|c| lat.planar(c)).collect();
        let outer: Vec<Point> = verts.iter().map(|c| lat.planar(&lat.mul_lambda_pow(c, 1))).collect();
        if polygon_ok(&pts, &outer) {
            return Ok(verts.into_iter().map(LatticePoint).collect());
        }
    }
    Err(LatticeError::T0SearchFailed { max_scale: MAX_T0_SCALE })
}

fn twice_area_polygon(lat: &Lattice, poly: &[Vec<i64>]) -> (Option<i128>, f64) {
    let z = vec![0i64; lat.len()];
    let mut exact = Some(0i128);
    let mut approx = 0.0;
    for i in 0..poly.len() {
        let (a, b) = (&poly[i], &poly[(i + 1) % poly.len()]);
        exact = exact.and_then(|s| lat.twice_area_exact(&z, a, b).map(|x| s + x));
        let (p, q) = (lat.planar(a), lat.planar(b));
        approx += p[0] * q[1] - p[1] * q[0];
    }
    (exact, approx)
}

/// Triangles with vertices on `∂T₀ ∪ λ∂T₀` tiling the annulus `λT₀ − T₀`,
/// from the constrained Delaunay triangulation of both vertex sets.
pub fn triangulate_annulus(
    ctx: &FieldContext,
    t0: &[LatticePoint],
) -> Result<Vec<LatticeTriangle>, LatticeError> {
    let lat = Lattice::new(ctx);
    let inner: Vec<Vec<i64>> = t0.iter().map(|p| p.0.clone()).collect();
    let outer: Vec<Vec<i64>> = inner.iter().map(|c| lat.mul_lambda_pow(c, 1)).collect();
    let all: Vec<Vec<i64>> = inner.iter().chain(&outer).cloned().collect();
    let pts: Vec<Point> = all.iter().map(|c| lat.planar(c)).collect();
    let mut tri = Triangulation::new(&pts)?;
    let k = inner.len();
    for i in 0..k {
        tri.insert_constraint(i, (i + 1) % k)?;
    }
    let inner_pts: Vec<Point> = pts[..k].to_vec();
    let mut out = Vec::new();
    for t in tri.triangles() {
        let c = [
            (pts[t[0]][0] + pts[t[1]][0] + pts[t[2]][0]) / 3.0,
            (pts[t[0]][1] + pts[t[1]][1] + pts[t[2]][1]) / 3.0,
        ];
        if in_polygon(&inner_pts, c) {
            continue;
        }
        out.push(LatticeTriangle::new(&lat, [all[t[0]].clone(), all[t[1]].clone(), all[t[2]].clone()])?);
    }
    out.sort();
    // exact area identity: sum of triangles = area(λT₀) − area(T₀)
    let (ei, ai) = twice_area_polygon(&lat, &inner);
    let (eo, ao) = twice_area_polygon(&lat, &outer);
    let mut es = Some(0i128);
    let mut as_ = 0.0;
    for t in &out {
        let [a, b, c] = t.coeffs();
        es = es.and_then(|s| lat.twice_area_exact(&a, &b, &c).map(|x| s + x));
        let [p, q, r] = t.planar(&lat);
        as_ += (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]);
    }
    match (ei, eo, es) {
        (Some(i), Some(o), Some(s)) => {
            if s != o - i {
                return Err(LatticeError::AnnulusMismatch(format!("exact areas {s} vs {}", o - i)));
            }
        }
        _ => {
            let want = ao - ai;
            if (as_ - want).abs() > 1e-9 * want.abs().max(1.0) {
                return Err(LatticeError::AnnulusMismatch(format!("areas {as_} vs {want}")));
            }
        }
    }
    Ok(out)
}

/// Triangles `(0, e_i, e_j)` on pairs of basis vectors with independent
/// planar images. In a flat lattice these are the Delaunay cells.
pub(crate) fn basis_triangles(lat: &Lattice) -> Vec<[Vec<i64>; 3]> {
    let n = lat.len();
    let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(i == j)).collect() };
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let t = [vec![0; n], unit(i), unit(j)];
            let p: Vec<Point> = t.iter().map(|c| lat.planar(c)).collect();
            if orient(p[0], p[1], p[2]) != Ordering::Equal {
                out.push(t);
            }
        }
    }
    out
}

/// `M`, `θ`, `r₁ = r₂ / sin(θ/2)`, `r₂ = 2M` and `n`.
///
/// `M` is the smallest integer above the three lower bounds, with the
/// vertex pairs taken along the edges of the annulus triangulation. `θ`,
/// flatness and the inscribed radius are evaluated on the annulus triangles
/// together with the basis triangles `(0, e_i, e_j)`.
pub fn compute_constants(
    ctx: &FieldContext,
    t0: &[LatticePoint],
    annulus: &[LatticeTriangle],
) -> Result<ConstructionConstants, LatticeError> {
    let lat = Lattice::new(ctx);
    let lam = ctx.lambda().norm();
    let l2 = lam * lam;
    let (mut max_edge, mut max_vert) = (0.0f64, 0.0f64);
    for t in annulus {
        let (p, v) = t.edge_extent(&lat);
        max_edge = max_edge.max(p);
        max_vert = max_vert.max(v);
    }
    let rho = ctx.covering_radius_bound();
    let m_bounds = [2.0 * l2 * max_vert, l2 * max_edge, 2.0 * lam * rho];
    let m = (m_bounds.iter().fold(0.0f64, |a, &b| a.max(b)).floor() as u32 + 1).max(2);

    let mut realized: Vec<[Vec<i64>; 3]> = annulus.iter().map(|t| t.coeffs()).collect();
    realized.extend(basis_triangles(&lat));

    let mut theta = PI;
    let mut min_inr = f64::INFINITY;
    for t in &realized {
        let p = [lat.planar(&t[0]), lat.planar(&t[1]), lat.planar(&t[2])];
        for a in angles(p[0], p[1], p[2]) {
            theta = theta.min(a);
        }
        min_inr = min_inr.min(inradius(p[0], p[1], p[2]));
    }
    let r2 = 2.0 * m as f64;
    let r1 = r2 / (theta / 2.0).sin();

    let outer: Vec<Point> = t0.iter().map(|c| lat.planar(&lat.mul_lambda_pow(&c.0, 1))).collect();
    let mut diam = 0.0f64;
    for a in &outer {
        for b in &outer {
            diam = diam.max(dist(*a, *b));
        }
    }

    let edges: Vec<_> = realized
        .iter()
        .map(|t| {
            (
                lat.embed(&super::lattice::sub(&t[1], &t[0])),
                lat.embed(&super::lattice::sub(&t[2], &t[0])),
            )
        })
        .collect();
    let mut n_flat = None;
    for n in 0..=MAX_N {
        let mut ok = true;
        for (e1, e2) in &edges {
            if ctx.bilipschitz_of_edges(e1, e2, n)? >= 1.5 {
                ok = false;
                break;
            }
        }
        if ok {
            n_flat = Some(n);
            break;
        }
    }
    let n_flat = n_flat.ok_or(LatticeError::ResourceExceeded {
        what: "flatness exponent".into(),
        needed: MAX_N as u64 + 1,
        limit: MAX_N as u64,
    })?;
    let target = 2.0 * diam + 2.0 * r2;
    let n_inradius = if min_inr >= target {
        0
    } else {
        let mut n = ((target / min_inr).ln() / lam.ln()).ceil().max(0.0) as u32;
        while lam.powi(n as i32) * min_inr < target {
            n += 1;
        }
        while n > 0 && lam.powi(n as i32 - 1) * min_inr >= target {
            n -= 1;
        }
        n
    };
    Ok(ConstructionConstants {
        m,
        theta,
        r1,
        r2,
        n: n_flat.max(n_inradius),
        n_flat,
        n_inradius,
        lambda_abs: lam,
        covering_radius: rho,
        diam_lambda_t0: diam,
        m_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::IntPolynomial;

    fn ctx(c: &[i64]) -> FieldContext {
        FieldContext::new(&IntPolynomial::new(c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn gaussian_octagon() {
        let c = ctx(&[2, -2, 1]);
        let lat = Lattice::new(&c);
        let t0 = build_t0(&c, None).unwrap();
        let mut pts: Vec<(i64, i64)> = t0
            .iter()
            .map(|p| {
                let q = lat.planar(&p.0);
                (q[0] as i64, q[1].abs() as i64 * q[1].signum() as i64)
            })
            .collect();
        pts.sort();
        let mut want = vec![(3, 0), (-3, 0), (0, 3), (0, -3), (2, 2), (2, -2), (-2, 2), (-2, -2)];
        want.sort();
        assert_eq!(pts, want);
        assert_eq!(build_t0(&c, Some(2)).unwrap().len(), 8);
        assert_eq!(build_t0(&c, Some(4)).unwrap().len(), 8);
        assert_eq!(build_t0(&c, Some(5)), Err(LatticeError::NoRootOfUnity(5)));
    }

    #[test]
    fn central_symmetry() {
        for p in [&[2, -2, 1][..], &[1, 2, -1, 1], &[1, 0, 0, -1, 1]] {
            let c = ctx(p);
            let t0 = build_t0(&c, Some(2)).unwrap();
            for v in &t0 {
                let neg = LatticePoint(v.0.iter().map(|x| -x).collect());
                assert!(t0.contains(&neg));
            }
        }
    }

    #[test]
    fn annulus_and_constants() {
        let c = ctx(&[2, -2, 1]);
        let lat = Lattice::new(&c);
        let t0 = build_t0(&c, None).unwrap();
        let ann = triangulate_annulus(&c, &t0).unwrap();
        assert_eq!(ann.len(), 16);
        let k = compute_constants(&c, &t0, &ann).unwrap();
        let max_edge = ann.iter().map(|t| t.edge_extent(&lat).0).fold(0.0, f64::max);
        assert_eq!(k.m, 2u32.max((2.0 * max_edge).ceil() as u32 + u32::from((2.0 * max_edge).fract() == 0.0)));
        assert_eq!(k.n_flat, 0);
        assert_eq!(k.n, k.n_inradius);
        assert_eq!(k.r2, 2.0 * k.m as f64);
        for t in &ann {
            assert!(t.in_t(&lat, k.m));
        }
    }

    #[test]
    fn cubic_flatness() {
        let c = ctx(&[1, 2, -1, 1]);
        let s = Setup::new(&c, None).unwrap();
        let tri = [
            crate::number_field::FieldElement::from_ints(&[0, 0, 0]),
            crate::number_field::FieldElement::from_ints(&[1, 0, 0]),
            crate::number_field::FieldElement::from_ints(&[0, 1, 0]),
        ];
        assert!(c.bilipschitz_constant(&tri, s.consts.n).unwrap() < 1.5);
        assert!(s.consts.n_flat > 0);
    }
}
