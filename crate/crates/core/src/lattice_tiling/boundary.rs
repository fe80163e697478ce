use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::lattice::{add, sub, Lattice};
use super::region::{Surface, DEFAULT_BUDGET};
use super::seed::Setup;
use super::{LatticeError, LatticePoint, LatticeTriangle, Surrounding};
use crate::geometry::predicates::{circumcircle, dist, point_segment_distance};
use crate::geometry::{delaunay, hausdorff_distance, is_simple_closed, Point};
use crate::number_field::FieldContext;

/// A path along Delaunay edges from `λ^{n+2}a` to `λ^{n+2}b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub vertices: Vec<LatticePoint>,
    pub length: f64,
}

/// The `k`-th refinement `γᵏ` of a triangle boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub level: u32,
    pub exponent: u32,
    /// Vertices in the frame scaled by `λ^{k(n+2)}`.
    pub vertices: Vec<LatticePoint>,
    /// The same vertices divided by `λ^{k(n+2)}`.
    pub planar: Vec<Point>,
    /// Hausdorff distance between consecutive levels, unscaled.
    pub hausdorff: Vec<f64>,
    /// Largest `d_k |λ|^{k(n+2)}` over the computed levels.
    pub fitted_c: f64,
}

/// Removes immediate reversals `u v u` from a closed vertex sequence,
/// including across the seam, and repeated vertices.
pub fn remove_backtracks<T: PartialEq + Clone>(path: &[T]) -> Vec<T> {
    let mut st: VecDeque<T> = VecDeque::with_capacity(path.len());
    for v in path {
        if st.back() == Some(v) {
            continue;
        }
        if st.len() >= 2 && st[st.len() - 2] == *v {
            st.pop_back();
            continue;
        }
        st.push_back(v.clone());
    }
    loop {
        let n = st.len();
        if n >= 2 && st[0] == st[n - 1] {
            st.pop_back();
        } else if n >= 3 && st[1] == st[n - 1] {
            st.pop_front();
            st.pop_back();
        } else if n >= 3 && st[0] == st[n - 2] {
            st.pop_back();
            st.pop_back();
        } else {
            break;
        }
    }
    st.into()
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

fn shortest_path(pts: &[Point], adj: &[Vec<usize>], s: usize, t: usize) -> Option<(Vec<usize>, f64)> {
    let mut d = vec![f64::INFINITY; pts.len()];
    let mut prev = vec![usize::MAX; pts.len()];
    let mut heap = BinaryHeap::new();
    d[s] = 0.0;
    heap.push(Entry(0.0, s));
    while let Some(Entry(du, u)) = heap.pop() {
        if du > d[u] {
            continue;
        }
        if u == t {
            break;
        }
        for &v in &adj[u] {
            let nd = du + dist(pts[u], pts[v]);
            if nd < d[v] || (nd == d[v] && u < prev[v]) {
                if nd < d[v] {
                    heap.push(Entry(nd, v));
                }
                d[v] = nd;
                prev[v] = u;
            }
        }
    }
    if !d[t].is_finite() {
        return None;
    }
    let mut path = vec![t];
    while *path.last().unwrap() != s {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    Some((path, d[t]))
}

/// Shortest path from `a` to `b` in the edge graph of the Delaunay triangles
/// whose circumdisk lies in `N_{r₂}(ab)`.
fn arc_between(
    lat: &Lattice,
    setup: &Setup,
    a: &[i64],
    b: &[i64],
    surface: &Surface,
) -> Result<Arc, LatticeError> {
    let k = &setup.consts;
    let (pa, pb) = (lat.planar(a), lat.planar(b));
    let lo = [pa[0].min(pb[0]) - k.r1, pa[1].min(pb[1]) - k.r1];
    let hi = [pa[0].max(pb[0]) + k.r1, pa[1].max(pb[1]) + k.r1];
    let mut y = lat.points_in(
        (lo, hi),
        |q| {
            point_segment_distance(q, pa, pb) < k.r2 || dist(q, pa) < k.r1 || dist(q, pb) < k.r1
        },
        k.small_edge(),
        surface,
        DEFAULT_BUDGET,
    )?;
    y.sort_by(|u, v| u.0.cmp(&v.0));
    let pts: Vec<Point> = y.iter().map(|(_, q)| *q).collect();
    let find = |c: &[i64]| y.binary_search_by(|(u, _)| u.as_slice().cmp(c)).ok();
    let disconnected = || LatticeError::Disconnected { from: format!("{a:?}"), to: format!("{b:?}") };
    let (s, t) = match (find(a), find(b)) {
        (Some(s), Some(t)) => (s, t),
        _ => return Err(disconnected()),
    };
    let mut adj = vec![Vec::new(); pts.len()];
    for tri in delaunay(&pts)? {
        let (o, r) = circumcircle(pts[tri[0]], pts[tri[1]], pts[tri[2]]);
        if point_segment_distance(o, pa, pb) + r >= k.r2 {
            continue;
        }
        for j in 0..3 {
            let (u, v) = (tri[j], tri[(j + 1) % 3]);
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    let (path, length) = shortest_path(&pts, &adj, s, t).ok_or_else(disconnected)?;
    Ok(Arc {
        from: LatticePoint(a.to_vec()),
        to: LatticePoint(b.to_vec()),
        vertices: path.into_iter().map(|i| LatticePoint(y[i].0.clone())).collect(),
        length,
    })
}

/// The arc `α_e` for edge `edge` of the center of `x`, computed in the
/// subdivision frame `λ^{n+2}`.
pub fn edge_arc(ctx: &FieldContext, setup: &Setup, x: &Surrounding, edge: usize) -> Result<Arc, LatticeError> {
    let lat = Lattice::new(ctx);
    let e = setup.consts.exponent();
    let scaled: Vec<LatticeTriangle> = x.triangles().map(|t| t.scaled(&lat, e)).collect();
    let surface = if lat.is_flat() {
        Surface::flat(lat.len())
    } else {
        Surface::from_triangles(&lat, &scaled.iter().map(|t| t.coeffs()).collect::<Vec<_>>())
    };
    let c = &scaled[0].vertices;
    arc_between(&lat, setup, &c[edge % 3].0, &c[(edge + 1) % 3].0, &surface)
}

fn divide(p: Point, z: num_complex::Complex64) -> Point {
    let q = num_complex::Complex64::new(p[0], p[1]) / z;
    [q.re, q.im]
}

/// Refines the boundary of `t` `k` times: each edge of `γ^{j-1}`, scaled by
/// `λ^{n+2}`, is replaced by its arc and backtracks are removed. Flat
/// lattices support `k ≤ 2`, others `k ≤ 1`.
pub fn refine_boundary(
    ctx: &FieldContext,
    setup: &Setup,
    t: &LatticeTriangle,
    k: u32,
) -> Result<BoundaryCurve, LatticeError> {
    let lat = Lattice::new(ctx);
    let max = if lat.is_flat() { 2 } else { 1 };
    if k > max {
        return Err(LatticeError::Unsupported(format!("boundary refinement beyond level {max}")));
    }
    let e = setup.consts.exponent();
    let lam = ctx.lambda();
    let mut cur: Vec<Vec<i64>> = t.coeffs().to_vec();
    let mut planar: Vec<Point> = cur.iter().map(|v| lat.planar(v)).collect();
    let mut hausdorff = Vec::new();
    let mut fitted_c: f64 = 0.0;
    let mut memo: HashMap<Vec<i64>, Vec<Vec<i64>>> = HashMap::new();
    let zero = vec![0i64; lat.len()];
    for level in 1..=k {
        let surface = if lat.is_flat() {
            Surface::flat(lat.len())
        } else {
            Surface::from_triangles(&lat, &[t.scaled(&lat, e).coeffs()])
        };
        let mut next: Vec<Vec<i64>> = Vec::new();
        for i in 0..cur.len() {
            let su = lat.mul_lambda_pow(&cur[i], e);
            let sv = lat.mul_lambda_pow(&cur[(i + 1) % cur.len()], e);
            let arc: Vec<Vec<i64>> = if lat.is_flat() {
                let key = sub(&sv, &su);
                let rel = match memo.get(&key) {
                    Some(r) => r.clone(),
                    None => {
                        let a = arc_between(&lat, setup, &zero, &key, &surface)?;
                        let r: Vec<Vec<i64>> = a.vertices.into_iter().map(|v| v.0).collect();
                        memo.insert(key, r.clone());
                        r
                    }
                };
                rel.iter().map(|v| add(&su, v)).collect()
            } else {
                arc_between(&lat, setup, &su, &sv, &surface)?.vertices.into_iter().map(|v| v.0).collect()
            };
            next.extend(arc[..arc.len() - 1].iter().cloned());
        }
        let next = remove_backtracks(&next);
        let z = lam.powu(level * e);
        let np: Vec<Point> = next.iter().map(|v| divide(lat.planar(v), z)).collect();
        if !is_simple_closed(&np) {
            return Err(LatticeError::NotSimple { level });
        }
        let d = hausdorff_distance(&planar, true, &np, true)?;
        fitted_c = fitted_c.max(d * z.norm());
        hausdorff.push(d);
        cur = next;
        planar = np;
        memo.clear();
    }
    Ok(BoundaryCurve {
        level: k,
        exponent: e,
        vertices: cur.into_iter().map(LatticePoint).collect(),
        planar,
        hausdorff,
        fitted_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backtracks() {
        assert_eq!(remove_backtracks(&[1, 2, 3, 2, 4]), vec![1, 2, 4]);
        assert_eq!(remove_backtracks(&[1, 2, 3, 4, 3, 2, 5]), vec![1, 2, 5]);
        assert_eq!(remove_backtracks(&[2, 1, 3, 4, 1]), vec![1, 3, 4]);
        assert_eq!(remove_backtracks(&[1, 1, 2, 3]), vec![1, 2, 3]);
        assert_eq!(remove_backtracks(&[5, 1, 2, 3, 1]), vec![1, 2, 3]);
        assert_eq!(remove_backtracks(&[1, 2, 3, 1, 9]), vec![1, 2, 3]);
    }

    fn gaussian_setup(n: u32) -> (FieldContext, Setup) {
        let ctx = crate::lattice_tiling::subdivide::tests::gaussian();
        let mut s = Setup::new(&ctx, None).unwrap();
        s.consts.n = n;
        (ctx, s)
    }

    #[test]
    fn arcs_stay_near_their_edge() {
        let (ctx, setup) = gaussian_setup(5);
        let lat = Lattice::new(&ctx);
        let tiles = crate::lattice_tiling::subdivide::tests::grid(&lat, 3, 0, 0);
        let x = Surrounding::from_tiles(&tiles[8], &tiles);
        let e = setup.consts.exponent();
        let c = x.center.scaled(&lat, e);
        for i in 0..3 {
            let arc = edge_arc(&ctx, &setup, &x, i).unwrap();
            assert_eq!(arc.from, c.vertices[i]);
            assert_eq!(arc.to, c.vertices[(i + 1) % 3]);
            let (a, b) = (lat.planar(&arc.from.0), lat.planar(&arc.to.0));
            for v in &arc.vertices {
                assert!(point_segment_distance(lat.planar(&v.0), a, b) < setup.consts.r2);
            }
            assert!(arc.length >= dist(a, b) - 1e-9);
            assert_eq!(arc, edge_arc(&ctx, &setup, &x, i).unwrap());
        }
    }

    #[test]
    fn refined_boundaries_converge() {
        let (ctx, setup) = gaussian_setup(5);
        let t = setup.annulus[0].clone();
        let g = refine_boundary(&ctx, &setup, &t, 2).unwrap();
        assert_eq!(g.hausdorff.len(), 2);
        let scale = setup.consts.lambda_abs.powi(setup.consts.exponent() as i32);
        assert!(g.hausdorff[1] < g.hausdorff[0]);
        assert!(g.hausdorff[1] <= g.fitted_c / (scale * scale) + 1e-12);
        assert!(g.hausdorff[0] <= setup.consts.r1 / scale);
        assert!(matches!(refine_boundary(&ctx, &setup, &t, 3), Err(LatticeError::Unsupported(_))));
    }
}
