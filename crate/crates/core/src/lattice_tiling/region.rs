use nalgebra::DVector;

use super::lattice::Lattice;
use super::{LatticeError, LatticePoint};
use crate::number_field::FieldContext;
use crate::geometry::predicates::{orient, point_segment_distance};
use crate::geometry::Point;

/// Enumeration limit on coefficient-box cells.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// A bounded planar region.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Empty,
    /// Open disk.
    Disk { center: Point, radius: f64 },
    /// Closed simple polygon.
    Polygon(Vec<Point>),
    /// Open `radius`-neighbourhood of a closed polygon (three or more
    /// points) or of a segment (two points).
    Neighborhood { shape: Vec<Point>, radius: f64 },
}

impl Region {
    pub fn bbox(&self) -> Option<(Point, Point)> {
        let (pts, pad): (Vec<Point>, f64) = match self {
            Region::Empty => return None,
            Region::Disk { center, radius } => (vec![*center], *radius),
            Region::Polygon(p) => (p.clone(), 0.0),
            Region::Neighborhood { shape, radius } => (shape.clone(), *radius),
        };
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k] - pad);
                hi[k] = hi[k].max(p[k] + pad);
            }
        }
        if pts.is_empty() || !(lo[0].is_finite() && hi[0].is_finite() && lo[1].is_finite() && hi[1].is_finite()) {
            return None;
        }
        Some((lo, hi))
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Empty => false,
            Region::Disk { center, radius } => {
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                dx * dx + dy * dy < radius * radius
            }
            Region::Polygon(poly) => in_polygon(poly, p),
            Region::Neighborhood { shape, radius } => distance_to_shape(shape, p) < *radius,
        }
    }
}

/// Closed point-in-polygon test for a simple polygon.
pub fn in_polygon(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if orient(a, b, p) == std::cmp::Ordering::Equal
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
        {
            return true;
        }
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Distance from `p` to a closed polygon (zero inside) or to a segment.
pub fn distance_to_shape(shape: &[Point], p: Point) -> f64 {
    if shape.len() >= 3 && in_polygon(shape, p) {
        return 0.0;
    }
    let n = shape.len();
    match n {
        0 => f64::INFINITY,
        1 => super::super::geometry::predicates::dist(shape[0], p),
        2 => point_segment_distance(p, shape[0], shape[1]),
        _ => (0..n)
            .map(|i| point_segment_distance(p, shape[i], shape[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Piecewise-linear surface over a set of planar triangles, storing the
/// vertical part of `σ` at each vertex. Used as the reference for vertical
/// distances `|||y − λⁿX|||`.
#[derive(Clone, Debug)]
pub struct Surface {
    dim: usize,
    patches: Vec<([Point; 3], [DVector<f64>; 3])>,
}

impl Surface {
    /// The plane `V_λ` itself.
    pub fn flat(dim: usize) -> Self {
        Surface { dim, patches: Vec::new() }
    }

    pub fn from_triangles(lat: &Lattice, tris: &[[Vec<i64>; 3]]) -> Self {
        let patches = tris
            .iter()
            .map(|t| {
                (
                    [lat.planar(&t[0]), lat.planar(&t[1]), lat.planar(&t[2])],
                    [lat.vertical(&t[0]), lat.vertical(&t[1]), lat.vertical(&t[2])],
                )
            })
            .collect();
        Surface { dim: lat.len(), patches }
    }

    pub fn is_flat(&self) -> bool {
        self.patches.is_empty()
    }

    /// Vertical part of the surface point above `p`. Outside the patches the
    /// nearest patch is extended affinely.
    pub fn height_at(&self, p: Point) -> DVector<f64> {
        if self.patches.is_empty() {
            return DVector::zeros(self.dim);
        }
        let mut best = (f64::INFINITY, 0usize, [0.0; 3]);
        for (k, (t, _)) in self.patches.iter().enumerate() {
            let bc = barycentric(t, p);
            let outside = bc.iter().map(|&x| (-x).max(0.0)).sum::<f64>();
            if outside < best.0 {
                best = (outside, k, bc);
                if outside == 0.0 {
                    break;
                }
            }
        }
        let (_, k, bc) = best;
        let h = &self.patches[k].1;
        &h[0] * bc[0] + &h[1] * bc[1] + &h[2] * bc[2]
    }

    /// Coordinatewise bounds of the vertical parts over all vertices.
    pub fn bounds(&self) -> (DVector<f64>, DVector<f64>) {
        let mut lo = DVector::zeros(self.dim);
        let mut hi = DVector::zeros(self.dim);
        let mut first = true;
        for (_, hs) in &self.patches {
            for h in hs {
                if first {
                    lo = h.clone();
                    hi = h.clone();
                    first = false;
                } else {
                    lo = lo.inf(h);
                    hi = hi.sup(h);
                }
            }
        }
        (lo, hi)
    }
}

fn barycentric(t: &[Point; 3], p: Point) -> [f64; 3] {
    let [a, b, c] = *t;
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let l1 = ((b[0] - p[0]) * (c[1] - p[1]) - (c[0] - p[0]) * (b[1] - p[1])) / det;
    let l2 = ((c[0] - p[0]) * (a[1] - p[1]) - (a[0] - p[0]) * (c[1] - p[1])) / det;
    [l1, l2, 1.0 - l1 - l2]
}

impl<'a> Lattice<'a> {
    /// Lattice points whose planar image lies in `bbox` and satisfies `keep`,
    /// and whose vertical distance to `surface` is below `vertical_bound`.
    /// Candidates come from the box `σ⁻¹(bbox × vertical slab)`, scanned over
    /// all but the last coefficient, with the last coefficient's range solved
    /// from the slab constraints.
    pub fn points_in(
        &self,
        bbox: (Point, Point),
        keep: impl Fn(Point) -> bool,
        vertical_bound: f64,
        surface: &Surface,
        budget: u64,
    ) -> Result<Vec<(Vec<i64>, Point)>, LatticeError> {
        if vertical_bound <= 0.0 {
            return Ok(Vec::new());
        }
        let n = self.len();
        let (pa, pb) = self.plane();
        let (vlo, vhi) = surface.bounds();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for k in 0..n {
            if k == pa {
                lo[k] = bbox.0[0];
                hi[k] = bbox.1[0];
            } else if k == pb {
                lo[k] = bbox.0[1];
                hi[k] = bbox.1[1];
            } else {
                lo[k] = vlo[k] - vertical_bound;
                hi[k] = vhi[k] + vertical_bound;
            }
        }
        let slack = 1e-9 * (1.0 + hi.iter().chain(&lo).fold(0.0f64, |m, x| m.max(x.abs())));
        let sinv = self.sigma_inv();
        let mut crange = vec![(0i64, 0i64); n];
        for (j, r) in crange.iter_mut().enumerate() {
            let (mut a, mut b) = (0.0, 0.0);
            for k in 0..n {
                let s = sinv[(j, k)];
                let (x, y) = (s * lo[k], s * hi[k]);
                a += x.min(y);
                b += x.max(y);
            }
            *r = ((a - slack).floor() as i64, (b + slack).ceil() as i64);
        }
        let cells: f64 = crange[..n - 1].iter().map(|(a, b)| (b - a + 1) as f64).product();
        if cells > budget as f64 {
            return Err(LatticeError::ResourceExceeded {
                what: "lattice enumeration".into(),
                needed: cells as u64,
                limit: budget,
            });
        }
        let sigma = self.ctx().sigma_matrix();
        let mut out = Vec::new();
        let mut c: Vec<i64> = crange.iter().map(|r| r.0).collect();
        loop {
            // solve for the last coefficient
            let (mut xlo, mut xhi) = (crange[n - 1].0 as f64, crange[n - 1].1 as f64);
            let mut feasible = true;
            for k in 0..n {
                let partial: f64 = (0..n - 1).map(|j| sigma[(k, j)] * c[j] as f64).sum();
                let s = sigma[(k, n - 1)];
                let (a, b) = (lo[k] - partial - slack, hi[k] - partial + slack);
                if s.abs() < 1e-300 {
                    if a > 0.0 || b < 0.0 {
                        feasible = false;
                        break;
                    }
                } else {
                    let (u, v) = if s > 0.0 { (a / s, b / s) } else { (b / s, a / s) };
                    xlo = xlo.max(u);
                    xhi = xhi.min(v);
                }
            }
            if feasible {
                let (a, b) = (xlo.ceil() as i64, xhi.floor() as i64);
                for x in a..=b {
                    c[n - 1] = x;
                    let p = self.planar(&c);
                    if p[0] < bbox.0[0] || p[0] > bbox.1[0] || p[1] < bbox.0[1] || p[1] > bbox.1[1] {
                        continue;
                    }
                    if !keep(p) {
                        continue;
                    }
                    if !self.is_flat() || !surface.is_flat() {
                        let d = (self.vertical(&c) - surface.height_at(p)).norm();
                        if d >= vertical_bound {
                            continue;
                        }
                    }
                    out.push((c.clone(), p));
                }
            }
            // advance the odometer over the first n - 1 coefficients
            let mut j = 0;
            loop {
                if j + 1 >= n {
                    return Ok(out);
                }
                if c[j] < crange[j].1 {
                    c[j] += 1;
                    break;
                }
                c[j] = crange[j].0;
                j += 1;
            }
        }
    }
}

/// Lattice points whose planar image lies in `region` and whose vertical
/// distance to `surface` is below `vertical_bound`, in coefficient order.
pub fn lattice_points_in_region(
    ctx: &FieldContext,
    region: &Region,
    vertical_bound: f64,
    surface: &Surface,
) -> Result<Vec<LatticePoint>, LatticeError> {
    if *region == Region::Empty {
        return Ok(Vec::new());
    }
    let bbox = region.bbox().ok_or(LatticeError::UnboundedRegion)?;
    let mut pts: Vec<LatticePoint> = Lattice::new(ctx)
        .points_in(bbox, |p| region.contains(p), vertical_bound, surface, DEFAULT_BUDGET)?
        .into_iter()
        .map(|(c, _)| LatticePoint(c))
        .collect();
    pts.sort();
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::{FieldContext, IntPolynomial};

    fn gaussian() -> FieldContext {
        FieldContext::new(&IntPolynomial::new(vec![2, -2, 1]).unwrap()).unwrap()
    }

    #[test]
    fn regions() {
        let sq = Region::Polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert!(sq.contains([1.0, 0.5]));
        assert!(sq.contains([0.5, 0.5]));
        assert!(!sq.contains([1.5, 0.5]));
        let seg = Region::Neighborhood { shape: vec![[0.0, 0.0], [2.0, 0.0]], radius: 1.0 };
        assert!(seg.contains([1.0, 0.99]));
        assert!(!seg.contains([1.0, 1.0]));
        assert!(!seg.contains([3.0, 0.0]));
        assert_eq!(Region::Empty.bbox(), None);
    }

    #[test]
    fn flat_enumeration_matches_scan() {
        let ctx = gaussian();
        let lat = Lattice::new(&ctx);
        let r = Region::Disk { center: [0.3, -0.2], radius: 4.5 };
        let got = lat
            .points_in(r.bbox().unwrap(), |p| r.contains(p), 1.0, &Surface::flat(2), DEFAULT_BUDGET)
            .unwrap();
        let mut brute = 0;
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if r.contains(lat.planar(&[a, b])) {
                    brute += 1;
                }
            }
        }
        assert_eq!(got.len(), brute);
    }

    #[test]
    fn cubic_enumeration_matches_scan() {
        let ctx = FieldContext::new(&IntPolynomial::new(vec![1, 2, -1, 1]).unwrap()).unwrap();
        let lat = Lattice::new(&ctx);
        let r = Region::Disk { center: [0.0, 0.0], radius: 3.0 };
        let bound = 2.0;
        let got = lat
            .points_in(r.bbox().unwrap(), |p| r.contains(p), bound, &Surface::flat(3), DEFAULT_BUDGET)
            .unwrap();
        let mut brute = Vec::new();
        for a in -15i64..=15 {
            for b in -15i64..=15 {
                for c in -15i64..=15 {
                    let v = [a, b, c];
                    if r.contains(lat.planar(&v)) && lat.vertical_norm(&v) < bound {
                        brute.push(v.to_vec());
                    }
                }
            }
        }
        let mut got: Vec<Vec<i64>> = got.into_iter().map(|(c, _)| c).collect();
        got.sort();
        brute.sort();
        assert_eq!(got, brute);
        assert!(!got.is_empty());
    }
}
