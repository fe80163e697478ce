use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::lattice::{add, Lattice};
use super::region::{distance_to_shape, in_polygon, Surface, DEFAULT_BUDGET};
use super::seed::Setup;
use super::{LatticeError, LatticePoint, LatticeTriangle, Surrounding};
use crate::geometry::predicates::{circumcircle, dist, incenter, orient, point_segment_distance};
use crate::geometry::{Point, Triangulation};
use crate::number_field::FieldContext;
use crate::par::{self, Exec};

/// A translate `c + λT₀` placed inside a subdivided triangle, tiled by
/// `c + T₀` and the translated annulus triangles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralTile {
    pub offset: LatticePoint,
    pub polygon: Vec<LatticePoint>,
    pub t0: Vec<LatticePoint>,
    pub annulus: Vec<LatticeTriangle>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZoneSizes {
    pub vertex: [usize; 3],
    pub edge: [usize; 3],
    pub triangle: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subdivision {
    /// `λ^{n+2} t`.
    pub center: LatticeTriangle,
    pub exponent: u32,
    /// Delaunay triangles of `Y` whose circumcircle lies in `N_{r₂}(λ^{n+2} t)`
    /// and, with a central tile, does not meet its interior.
    pub triangles: Vec<LatticeTriangle>,
    /// Triangles filling the gap between the kept triangles and the central tile.
    pub fill: Vec<LatticeTriangle>,
    pub central: Option<CentralTile>,
    /// Triangles tiling `λ^{n+2} t` minus the central tile exactly.
    pub children: Vec<LatticeTriangle>,
    pub zones: ZoneSizes,
    /// Twice the uncovered area of `λ^{n+2} t` in units of the covolume;
    /// zero when the children and central tile tile it exactly.
    pub cover_residual: f64,
    pub cover_exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub agree: bool,
    pub vacuous: bool,
    pub compared: usize,
    pub only_first: usize,
    pub only_second: usize,
}

fn check_surrounding(lat: &Lattice, m: u32, x: &Surrounding) -> Result<(), LatticeError> {
    for t in x.triangles() {
        if !t.in_t(lat, m) {
            return Err(LatticeError::NotInT(format!("{:?}", t.vertices)));
        }
    }
    for t in &x.ring {
        if !t.shares_vertex(&x.center) {
            return Err(LatticeError::NotASurrounding(format!(
                "{:?} does not touch the center",
                t.vertices
            )));
        }
    }
    Ok(())
}

/// Subdivides `λ^{n+2} t` for the surrounding `X` of `t`.
pub fn subdivide_surrounding(
    ctx: &FieldContext,
    setup: &Setup,
    x: &Surrounding,
    with_central_tile: bool,
) -> Result<Subdivision, LatticeError> {
    let lat = Lattice::new(ctx);
    check_surrounding(&lat, setup.consts.m, x)?;
    let e = setup.consts.exponent();
    let center = x.center.scaled(&lat, e);
    let tiles: Vec<LatticeTriangle> = x.triangles().map(|t| t.scaled(&lat, e)).collect();
    subdivide_scaled(&lat, setup, &center, &tiles, with_central_tile, e)
}

fn centroid(p: &[Point]) -> Point {
    let n = p.len() as f64;
    [p.iter().map(|q| q[0]).sum::<f64>() / n, p.iter().map(|q| q[1]).sum::<f64>() / n]
}

fn strictly_inside_convex(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    (0..n).all(|i| orient(poly[i], poly[(i + 1) % n], p) == Ordering::Greater)
}

fn canonical(tri: [usize; 3]) -> [usize; 3] {
    let mut s = tri;
    s.sort_unstable();
    s
}

fn twice_area_f(p: &[Point; 3]) -> f64 {
    (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])
}

fn place_central(
    lat: &Lattice,
    setup: &Setup,
    p: &[Point; 3],
    plane: &Surface,
) -> Result<CentralTile, LatticeError> {
    let k = &setup.consts;
    let inc = incenter(p[0], p[1], p[2]);
    let inr = crate::geometry::predicates::inradius(p[0], p[1], p[2]);
    let shape: Vec<Vec<i64>> = setup.t0.iter().map(|v| lat.mul_lambda_pow(&v.0, 1)).collect();
    let mut radius = 1.0f64.max(2.0 * k.covering_radius);
    while radius <= inr.max(1.0) * 2.0 {
        let bbox = ([inc[0] - radius, inc[1] - radius], [inc[0] + radius, inc[1] + radius]);
        let mut cands = lat.points_in(
            bbox,
            |q| dist(q, inc) < radius,
            k.m as f64 + 1.0,
            plane,
            DEFAULT_BUDGET,
        )?;
        cands.sort_by(|a, b| dist(a.1, inc).total_cmp(&dist(b.1, inc)).then_with(|| a.0.cmp(&b.0)));
        'cand: for (c, _) in cands {
            let verts: Vec<Vec<i64>> = shape.iter().map(|s| add(&c, s)).collect();
            let vp: Vec<Point> = verts.iter().map(|v| lat.planar(v)).collect();
            for &q in &vp {
                if !strictly_inside_convex(p, q) {
                    continue 'cand;
                }
            }
            for i in 0..3 {
                let (a, b) = (p[i], p[(i + 1) % 3]);
                let mut dmin = f64::INFINITY;
                for &q in &vp {
                    dmin = dmin.min(point_segment_distance(q, a, b));
                }
                for j in 0..vp.len() {
                    let (u, v) = (vp[j], vp[(j + 1) % vp.len()]);
                    dmin = dmin.min(point_segment_distance(a, u, v)).min(point_segment_distance(b, u, v));
                }
                if dmin < k.r2 {
                    continue 'cand;
                }
            }
            if !lat.is_flat() {
                for (v, &q) in verts.iter().zip(&vp) {
                    if (lat.vertical(v) - plane.height_at(q)).norm() >= k.m as f64 {
                        continue 'cand;
                    }
                }
            }
            return Ok(CentralTile {
                offset: LatticePoint(c.clone()),
                polygon: verts.into_iter().map(LatticePoint).collect(),
                t0: setup.t0.iter().map(|v| LatticePoint(add(&c, &v.0))).collect(),
                annulus: setup.annulus.iter().map(|t| t.translated(&c)).collect(),
            });
        }
        radius *= 2.0;
    }
    Err(LatticeError::CentralTileNotPlaced)
}

type ZonePoints = Vec<(Vec<i64>, Point)>;

/// Vertex, edge and triangle zones of `Y`, deduplicated and sorted.
fn zones(
    lat: &Lattice,
    setup: &Setup,
    p: &[Point; 3],
    surface: &Surface,
) -> Result<(ZonePoints, ZoneSizes), LatticeError> {
    let k = &setup.consts;
    let bound = k.small_edge();
    let jobs: Vec<usize> = (0..7).collect();
    let res = par::map(Exec::default(), &jobs, |&job| {
        if job < 3 {
            let v = p[job];
            let r = k.r1;
            lat.points_in(
                ([v[0] - r, v[1] - r], [v[0] + r, v[1] + r]),
                |q| dist(q, v) < r,
                bound,
                surface,
                DEFAULT_BUDGET,
            )
        } else if job < 6 {
            let (a, b) = (p[job - 3], p[(job - 2) % 3]);
            let r = k.r2;
            let lo = [a[0].min(b[0]) - r, a[1].min(b[1]) - r];
            let hi = [a[0].max(b[0]) + r, a[1].max(b[1]) + r];
            lat.points_in(
                (lo, hi),
                |q| {
                    point_segment_distance(q, a, b) < r
                        && dist(q, a) >= k.r1
                        && dist(q, b) >= k.r1
                },
                bound,
                surface,
                DEFAULT_BUDGET,
            )
        } else {
            let lo = [p.iter().map(|q| q[0]).fold(f64::INFINITY, f64::min), p.iter().map(|q| q[1]).fold(f64::INFINITY, f64::min)];
            let hi = [p.iter().map(|q| q[0]).fold(f64::NEG_INFINITY, f64::max), p.iter().map(|q| q[1]).fold(f64::NEG_INFINITY, f64::max)];
            lat.points_in((lo, hi), |q| in_polygon(p, q), bound, surface, DEFAULT_BUDGET)
        }
    });
    let mut sizes = ZoneSizes::default();
    let mut all: HashMap<Vec<i64>, Point> = HashMap::new();
    for (job, r) in res.into_iter().enumerate() {
        let r = r?;
        match job {
            0..=2 => sizes.vertex[job] = r.len(),
            3..=5 => sizes.edge[job - 3] = r.len(),
            _ => sizes.triangle = r.len(),
        }
        all.extend(r);
    }
    let mut y: Vec<(Vec<i64>, Point)> = all.into_iter().collect();
    y.sort_by(|a, b| a.0.cmp(&b.0));
    sizes.total = y.len();
    Ok((y, sizes))
}

/// Constrained Delaunay triangulation of `pts` with the given constraint
/// edges; returns the triangles.
fn constrained(pts: &[Point], edges: &[(usize, usize)]) -> Result<Vec<[usize; 3]>, LatticeError> {
    let mut t = Triangulation::new(pts)?;
    for &(a, b) in edges {
        if a != b && !t.has_edge(a, b) {
            t.insert_constraint(a, b)?;
        }
    }
    Ok(t.triangles())
}

pub(crate) fn subdivide_scaled(
    lat: &Lattice,
    setup: &Setup,
    center: &LatticeTriangle,
    tiles: &[LatticeTriangle],
    with_central: bool,
    exponent: u32,
) -> Result<Subdivision, LatticeError> {
    let k = &setup.consts;
    let p = center.planar(lat);
    let surface = if lat.is_flat() {
        Surface::flat(lat.len())
    } else {
        Surface::from_triangles(lat, &tiles.iter().map(|t| t.coeffs()).collect::<Vec<_>>())
    };
    let (y, zone_sizes) = zones(lat, setup, &p, &surface)?;

    let central = if with_central {
        let plane = if lat.is_flat() {
            Surface::flat(lat.len())
        } else {
            Surface::from_triangles(lat, &[center.coeffs()])
        };
        Some(place_central(lat, setup, &p, &plane)?)
    } else {
        None
    };
    let cpoly: Vec<Point> = central
        .as_ref()
        .map(|c| c.polygon.iter().map(|v| lat.planar(&v.0)).collect())
        .unwrap_or_default();

    // Y' and its Delaunay triangulation
    let y: Vec<(Vec<i64>, Point)> = if central.is_some() {
        y.into_iter().filter(|(_, q)| !strictly_inside_convex(&cpoly, *q)).collect()
    } else {
        y
    };
    let pts: Vec<Point> = y.iter().map(|(_, q)| *q).collect();
    let tris = crate::geometry::delaunay(&pts)?;
    let bound = k.small_edge();
    let mut kept_idx: Vec<[usize; 3]> = Vec::new();
    for t in tris {
        let (o, r) = circumcircle(pts[t[0]], pts[t[1]], pts[t[2]]);
        if distance_to_shape(&p, o) + r >= k.r2 {
            continue;
        }
        if !cpoly.is_empty() && (in_polygon(&cpoly, o) || distance_to_shape(&cpoly, o) < r) {
            continue;
        }
        kept_idx.push(t);
    }
    let to_tri = |t: [usize; 3], coords: &dyn Fn(usize) -> Vec<i64>| {
        LatticeTriangle::new(lat, [coords(t[0]), coords(t[1]), coords(t[2])])
    };
    let ycoef = |i: usize| y[i].0.clone();
    let mut triangles = Vec::with_capacity(kept_idx.len());
    for &t in &kept_idx {
        let tri = to_tri(t, &ycoef)?;
        let (e, v) = tri.edge_extent(lat);
        if e >= bound || v >= 2.5 * bound {
            return Err(LatticeError::ConstantsViolated(format!(
                "subdivision edge {e:.4} (vertical {v:.4}) against M/|λ| = {bound:.4}"
            )));
        }
        triangles.push(tri);
    }

    // fill the gap around the central tile
    let mut fill = Vec::new();
    if let Some(ct) = &central {
        let cc = centroid(&cpoly);
        let rad = cpoly.iter().map(|q| dist(*q, cc)).fold(0.0, f64::max);
        let reach = rad + 3.0 * bound + 1.0;
        let mut local: Vec<Vec<i64>> = Vec::new();
        let mut local_of: HashMap<usize, usize> = HashMap::new();
        let mut index_of: HashMap<Vec<i64>, usize> = HashMap::new();
        for &t in &kept_idx {
            if t.iter().all(|&i| dist(pts[i], cc) < reach) {
                for &i in &t {
                    local_of.entry(i).or_insert_with(|| {
                        local.push(y[i].0.clone());
                        index_of.insert(y[i].0.clone(), local.len() - 1);
                        local.len() - 1
                    });
                }
            }
        }
        let cidx: Vec<usize> = ct
            .polygon
            .iter()
            .map(|v| {
                *index_of.entry(v.0.clone()).or_insert_with(|| {
                    local.push(v.0.clone());
                    local.len() - 1
                })
            })
            .collect();
        let lp: Vec<Point> = local.iter().map(|c| lat.planar(c)).collect();
        let mut edges = Vec::new();
        let mut kept_local: HashSet<[usize; 3]> = HashSet::new();
        for &t in &kept_idx {
            if let (Some(&a), Some(&b), Some(&c)) = (local_of.get(&t[0]), local_of.get(&t[1]), local_of.get(&t[2])) {
                if t.iter().all(|&i| dist(pts[i], cc) < reach) {
                    edges.extend([(a, b), (b, c), (c, a)]);
                    kept_local.insert(canonical([a, b, c]));
                }
            }
        }
        for i in 0..cidx.len() {
            edges.push((cidx[i], cidx[(i + 1) % cidx.len()]));
        }
        let cdt = constrained(&lp, &edges)?;
        let inside_c: Vec<bool> = cdt
            .iter()
            .map(|t| strictly_inside_convex(&cpoly, centroid(&[lp[t[0]], lp[t[1]], lp[t[2]]])))
            .collect();
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (ti, t) in cdt.iter().enumerate() {
            for j in 0..3 {
                let (a, b) = (t[j], t[(j + 1) % 3]);
                by_edge.entry((a.min(b), a.max(b))).or_default().push(ti);
            }
        }
        let free = |ti: usize| !inside_c[ti] && !kept_local.contains(&canonical(cdt[ti]));
        let mut seen = vec![false; cdt.len()];
        let mut queue = VecDeque::new();
        for (ti, _) in cdt.iter().enumerate() {
            if inside_c[ti] {
                let t = cdt[ti];
                for j in 0..3 {
                    let (a, b) = (t[j], t[(j + 1) % 3]);
                    for &o in &by_edge[&(a.min(b), a.max(b))] {
                        if o != ti && free(o) && !seen[o] {
                            seen[o] = true;
                            queue.push_back(o);
                        }
                    }
                }
            }
        }
        while let Some(ti) = queue.pop_front() {
            let t = cdt[ti];
            if t.iter().any(|&i| dist(lp[i], cc) >= reach - bound) {
                return Err(LatticeError::CoverMismatch(
                    "gap around the central tile is not enclosed by kept triangles".into(),
                ));
            }
            fill.push(to_tri(t, &|i| local[i].clone())?);
            for j in 0..3 {
                let (a, b) = (t[j], t[(j + 1) % 3]);
                for &o in &by_edge[&(a.min(b), a.max(b))] {
                    if o != ti && free(o) && !seen[o] {
                        seen[o] = true;
                        queue.push_back(o);
                    }
                }
            }
        }
        for t in &fill {
            if !t.in_t(lat, k.m) {
                return Err(LatticeError::ConstantsViolated(format!(
                    "fill triangle {:?} is not in 𝒯",
                    t.vertices
                )));
            }
        }
        fill.sort();
    }

    // children: kept and fill triangles inside λ^{n+2} t, plus a constrained
    // triangulation of the band between them and its boundary
    let mut children: Vec<LatticeTriangle> = Vec::new();
    let mut inner_edges: HashSet<(Vec<i64>, Vec<i64>)> = HashSet::new();
    for t in triangles.iter().chain(&fill) {
        let q = t.planar(lat);
        if q.iter().all(|&v| in_polygon(&p, v)) {
            children.push(t.clone());
            for j in 0..3 {
                let (u, v) = (&t.vertices[j].0, &t.vertices[(j + 1) % 3].0);
                inner_edges.insert((u.min(v).clone(), u.max(v).clone()));
            }
        }
    }
    let band = 3.0 * bound;
    let near_boundary = |q: Point| {
        (0..3).any(|i| point_segment_distance(q, p[i], p[(i + 1) % 3]) < band)
    };
    let mut cv: Vec<Vec<i64>> = Vec::new();
    let mut cidx: HashMap<Vec<i64>, usize> = HashMap::new();
    for (c, q) in &y {
        if in_polygon(&p, *q) && near_boundary(*q) {
            cidx.insert(c.clone(), cv.len());
            cv.push(c.clone());
        }
    }
    for v in &center.vertices {
        if !cidx.contains_key(&v.0) {
            cidx.insert(v.0.clone(), cv.len());
            cv.push(v.0.clone());
        }
    }
    let cp: Vec<Point> = cv.iter().map(|c| lat.planar(c)).collect();
    let corner: Vec<usize> = center.vertices.iter().map(|v| cidx[&v.0]).collect();
    let mut edges: Vec<(usize, usize)> = (0..3).map(|i| (corner[i], corner[(i + 1) % 3])).collect();
    let mut barrier: HashSet<(usize, usize)> = HashSet::new();
    for (u, v) in &inner_edges {
        if let (Some(&a), Some(&b)) = (cidx.get(u), cidx.get(v)) {
            edges.push((a, b));
            barrier.insert((a.min(b), a.max(b)));
        }
    }
    let cdt = constrained(&cp, &edges)?;
    let inside: Vec<bool> = cdt
        .iter()
        .map(|t| in_polygon(&p, centroid(&[cp[t[0]], cp[t[1]], cp[t[2]]])))
        .collect();
    let on_side = |a: usize, b: usize| {
        (0..3).any(|i| {
            let (u, v) = (p[i], p[(i + 1) % 3]);
            orient(u, v, cp[a]) == Ordering::Equal && orient(u, v, cp[b]) == Ordering::Equal
        })
    };
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (ti, t) in cdt.iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (t[j], t[(j + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(ti);
        }
    }
    let mut seen = vec![false; cdt.len()];
    let mut queue = VecDeque::new();
    for (ti, t) in cdt.iter().enumerate() {
        if inside[ti] && (0..3).any(|j| on_side(t[j], t[(j + 1) % 3])) {
            seen[ti] = true;
            queue.push_back(ti);
        }
    }
    while let Some(ti) = queue.pop_front() {
        let t = cdt[ti];
        if t.iter().any(|&i| !near_boundary(cp[i])) {
            return Err(LatticeError::CoverMismatch(
                "boundary band is not closed off by kept triangles".into(),
            ));
        }
        let tri = LatticeTriangle::new(lat, [cv[t[0]].clone(), cv[t[1]].clone(), cv[t[2]].clone()])?;
        if !tri.in_t(lat, k.m) {
            return Err(LatticeError::ConstantsViolated(format!(
                "clipped triangle {:?} is not in 𝒯",
                tri.vertices
            )));
        }
        children.push(tri);
        for j in 0..3 {
            let key = (t[j].min(t[(j + 1) % 3]), t[j].max(t[(j + 1) % 3]));
            if barrier.contains(&key) {
                continue;
            }
            for &o in &by_edge[&key] {
                if o != ti && inside[o] && !seen[o] {
                    seen[o] = true;
                    queue.push_back(o);
                }
            }
        }
    }
    children.sort();
    children.dedup();

    // exact cover of λ^{n+2} t
    let [a, b, c] = center.coeffs();
    let (residual, exact) = match lat.twice_area_exact(&a, &b, &c) {
        Some(whole) => {
            let mut s: i128 = children
                .iter()
                .map(|t| {
                    let [u, v, w] = t.coeffs();
                    lat.twice_area_exact(&u, &v, &w).unwrap()
                })
                .sum();
            if let Some(ct) = &central {
                let z = &ct.polygon[0].0;
                for i in 1..ct.polygon.len() - 1 {
                    s += lat.twice_area_exact(z, &ct.polygon[i].0, &ct.polygon[i + 1].0).unwrap();
                }
            }
            ((whole - s) as f64, true)
        }
        None => {
            let whole = twice_area_f(&p);
            let mut s: f64 = children.iter().map(|t| twice_area_f(&t.planar(lat))).sum();
            for i in 1..cpoly.len().saturating_sub(1) {
                s += twice_area_f(&[cpoly[0], cpoly[i], cpoly[i + 1]]);
            }
            ((whole - s) / lat.covolume().max(1e-300), false)
        }
    };
    let tolerance = if exact { 0.0 } else { 1e-6 * twice_area_f(&p).abs() / lat.covolume().max(1e-300) };
    if residual.abs() > tolerance {
        return Err(LatticeError::CoverMismatch(format!("uncovered twice-area {residual}")));
    }
    triangles.sort();
    Ok(Subdivision {
        center: center.clone(),
        exponent,
        triangles,
        fill,
        central,
        children,
        zones: zone_sizes,
        cover_residual: residual,
        cover_exact: exact,
    })
}

fn within(lat: &Lattice, t: &LatticeTriangle, shape: &[Point], r2: f64) -> bool {
    let q = t.planar(lat);
    let (o, r) = circumcircle(q[0], q[1], q[2]);
    distance_to_shape(shape, o) + r < r2
}

/// Compares the subdivisions of two surroundings where their
/// `r₂`-neighbourhoods overlap: the kept triangles of each whose circumcircle
/// also lies in the other neighbourhood must coincide.
pub fn overlap_agreement(
    ctx: &FieldContext,
    setup: &Setup,
    x1: &Surrounding,
    x2: &Surrounding,
    with_central_tile: bool,
) -> Result<OverlapReport, LatticeError> {
    if !x1.contains(&x2.center) || !x2.contains(&x1.center) {
        return Ok(OverlapReport { agree: true, vacuous: true, compared: 0, only_first: 0, only_second: 0 });
    }
    let lat = Lattice::new(ctx);
    let pair = [x1, x2];
    let subs = par::map(Exec::default(), &pair, |x| subdivide_surrounding(ctx, setup, x, with_central_tile));
    let mut it = subs.into_iter();
    let s1 = it.next().unwrap()?;
    let s2 = it.next().unwrap()?;
    let p1 = s1.center.planar(&lat);
    let p2 = s2.center.planar(&lat);
    let r2 = setup.consts.r2;
    let a: HashSet<&LatticeTriangle> = s1.triangles.iter().filter(|t| within(&lat, t, &p2, r2)).collect();
    let b: HashSet<&LatticeTriangle> = s2.triangles.iter().filter(|t| within(&lat, t, &p1, r2)).collect();
    let only_first = a.difference(&b).count();
    let only_second = b.difference(&a).count();
    Ok(OverlapReport {
        agree: only_first == 0 && only_second == 0,
        vacuous: a.is_empty() && b.is_empty(),
        compared: a.len().max(b.len()),
        only_first,
        only_second,
    })
}


#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::number_field::IntPolynomial;

    pub(crate) fn gaussian() -> FieldContext {
        FieldContext::new(&IntPolynomial::new(vec![2, -2, 1]).unwrap()).unwrap()
    }

    /// Triangles of the square grid of step `s` in `ℤ[i]` (coefficients in
    /// the basis `1, λ` with `λ = 1 + i`) touching the square at `(x, y)`.
    pub(crate) fn grid(lat: &Lattice, s: i64, x: i64, y: i64) -> Vec<LatticeTriangle> {
        // a + bi = (a - b) + bλ
        let pt = |a: i64, b: i64| vec![a - b, b];
        let mut out = Vec::new();
        for i in x - 1..=x + 1 {
            for j in y - 1..=y + 1 {
                let (a, b) = (i * s, j * s);
                out.push(LatticeTriangle::new(lat, [pt(a, b), pt(a + s, b), pt(a, b + s)]).unwrap());
                out.push(LatticeTriangle::new(lat, [pt(a + s, b), pt(a + s, b + s), pt(a, b + s)]).unwrap());
            }
        }
        out
    }

    fn small_setup(ctx: &FieldContext, n: u32) -> Setup {
        let mut s = Setup::new(ctx, None).unwrap();
        s.consts.n = n;
        s
    }

    #[test]
    fn clipped_cover_is_exact() {
        let ctx = gaussian();
        let lat = Lattice::new(&ctx);
        let setup = small_setup(&ctx, 5);
        let tiles = grid(&lat, 3, 0, 0);
        let x = Surrounding::from_tiles(&tiles[8], &tiles);
        assert_eq!(x.ring.len(), 12);
        let s = subdivide_surrounding(&ctx, &setup, &x, false).unwrap();
        assert!(s.cover_exact);
        assert_eq!(s.cover_residual, 0.0);
        assert!(s.central.is_none() && s.fill.is_empty());
        let z = &s.zones;
        let sum: usize = z.vertex.iter().chain(&z.edge).sum::<usize>() + z.triangle;
        assert!(z.total <= sum && z.total >= z.triangle);
        let bound = setup.consts.small_edge();
        for t in s.triangles.iter().chain(&s.children) {
            assert!(t.edge_extent(&lat).0 < bound);
            assert!(t.scaled(&lat, 1).in_t(&lat, setup.consts.m));
        }
        // children area: λ^{2·7} scales twice-areas by 2^7
        let area: i128 = s
            .children
            .iter()
            .map(|t| {
                let [a, b, c] = t.coeffs();
                lat.twice_area_exact(&a, &b, &c).unwrap()
            })
            .sum();
        let [a, b, c] = x.center.coeffs();
        assert_eq!(area, 128 * lat.twice_area_exact(&a, &b, &c).unwrap());
    }

    #[test]
    fn neighbouring_surroundings_agree() {
        let ctx = gaussian();
        let lat = Lattice::new(&ctx);
        let setup = small_setup(&ctx, 5);
        let tiles = grid(&lat, 3, 0, 0);
        let x1 = Surrounding::from_tiles(&tiles[8], &tiles);
        let x2 = Surrounding::from_tiles(&tiles[9], &tiles);
        let r = overlap_agreement(&ctx, &setup, &x1, &x2, false).unwrap();
        assert!(r.agree && !r.vacuous && r.compared > 0, "{r:?}");
        let far = Surrounding::from_tiles(&tiles[0], &tiles);
        let r = overlap_agreement(&ctx, &setup, &x1, &far, false).unwrap();
        assert!(r.vacuous || r.agree);
    }

    #[test]
    fn oversized_triangle_is_rejected() {
        let ctx = gaussian();
        let lat = Lattice::new(&ctx);
        let setup = small_setup(&ctx, 5);
        let big = grid(&lat, 40, 0, 0);
        let x = Surrounding::from_tiles(&big[8], &big);
        assert!(matches!(subdivide_surrounding(&ctx, &setup, &x, false), Err(LatticeError::NotInT(_))));
    }

    #[test]
    fn central_tile_needs_room() {
        let ctx = gaussian();
        let lat = Lattice::new(&ctx);
        let setup = small_setup(&ctx, 5);
        let tiles = grid(&lat, 3, 0, 0);
        let x = Surrounding::from_tiles(&tiles[8], &tiles);
        assert_eq!(
            subdivide_surrounding(&ctx, &setup, &x, true).unwrap_err(),
            LatticeError::CentralTileNotPlaced
        );
    }
}
