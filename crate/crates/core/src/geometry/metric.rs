use std::collections::HashMap;

use super::predicates::{dist, point_segment_distance, segments_intersect, Point};
use super::GeometryError;
use crate::par::{self, Exec};

/// Inserts points along each segment so that consecutive points are at most
/// `spacing` apart.
pub fn densify(pts: &[Point], closed: bool, spacing: f64) -> Vec<Point> {
    let m = pts.len();
    if m == 0 {
        return Vec::new();
    }
    let segs = if closed { m } else { m - 1 };
    let mut out = Vec::with_capacity(m);
    for i in 0..segs {
        let (a, b) = (pts[i], pts[(i + 1) % m]);
        let k = (dist(a, b) / spacing).ceil().max(1.0) as usize;
        for s in 0..k {
            let t = s as f64 / k as f64;
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    if !closed || segs == 0 {
        out.push(pts[m - 1]);
    }
    out
}

/// Uniform grid of segments for nearest-segment queries.
struct SegmentGrid {
    segs: Vec<(Point, Point)>,
    origin: Point,
    cell: f64,
    cells: HashMap<(i64, i64), Vec<u32>>,
}

impl SegmentGrid {
    fn new(pts: &[Point], closed: bool) -> Self {
        let m = pts.len();
        let mut segs: Vec<(Point, Point)> = if m == 1 {
            vec![(pts[0], pts[0])]
        } else {
            let n = if closed { m } else { m - 1 };
            (0..n).map(|i| (pts[i], pts[(i + 1) % m])).collect()
        };
        segs.shrink_to_fit();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let total: f64 = segs.iter().map(|(a, b)| dist(*a, *b)).sum();
        let cell = (total / segs.len() as f64).max(span / 1024.0).max(1e-12);
        let mut cells: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, (a, b)) in segs.iter().enumerate() {
            let (x0, x1) = (a[0].min(b[0]), a[0].max(b[0]));
            let (y0, y1) = (a[1].min(b[1]), a[1].max(b[1]));
            let c0 = (((x0 - lo[0]) / cell).floor() as i64, ((y0 - lo[1]) / cell).floor() as i64);
            let c1 = (((x1 - lo[0]) / cell).floor() as i64, ((y1 - lo[1]) / cell).floor() as i64);
            for cx in c0.0..=c1.0 {
                for cy in c0.1..=c1.1 {
                    cells.entry((cx, cy)).or_default().push(i as u32);
                }
            }
        }
        SegmentGrid { segs, origin: lo, cell, cells }
    }

    fn cell_of(&self, p: Point) -> (i64, i64) {
        (
            ((p[0] - self.origin[0]) / self.cell).floor() as i64,
            ((p[1] - self.origin[1]) / self.cell).floor() as i64,
        )
    }

    /// Distance from `p` to the nearest segment, searching rings of cells.
    fn nearest(&self, p: Point) -> f64 {
        let (cx, cy) = self.cell_of(p);
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(list) = self.cells.get(&(cx + dx, cy + dy)) {
                        for &i in list {
                            let (a, b) = self.segs[i as usize];
                            best = best.min(point_segment_distance(p, a, b));
                        }
                    }
                }
            }
            // every unvisited cell is at least `ring * cell` away
            if best <= ring as f64 * self.cell || ring > 1 << 20 {
                return best;
            }
            if best.is_infinite() && ring as usize > 2 * self.cells.len() + 4 {
                return self.segs
                    .iter()
                    .map(|(a, b)| point_segment_distance(p, *a, *b))
                    .fold(f64::INFINITY, f64::min);
            }
            ring += 1;
        }
    }
}

/// Hausdorff distance between two polylines, taken as point sets. The
/// directed distances are measured from points sampled every `1e-3`
/// (relative to the larger diameter) to the exact segments of the other
/// polyline.
pub fn hausdorff_distance(
    a: &[Point],
    a_closed: bool,
    b: &[Point],
    b_closed: bool,
) -> Result<f64, GeometryError> {
    hausdorff_distance_with(Exec::default(), a, a_closed, b, b_closed, 1e-3)
}

pub fn hausdorff_distance_with(
    exec: Exec,
    a: &[Point],
    a_closed: bool,
    b: &[Point],
    b_closed: bool,
    relative_spacing: f64,
) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::Empty);
    }
    let diam = |p: &[Point]| {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for q in p {
            for k in 0..2 {
                lo[k] = lo[k].min(q[k]);
                hi[k] = hi[k].max(q[k]);
            }
        }
        (hi[0] - lo[0]).hypot(hi[1] - lo[1])
    };
    let spacing = (relative_spacing * diam(a).max(diam(b))).max(1e-12);
    let directed = |from: &[Point], fc: bool, to: &[Point], tc: bool| {
        let grid = SegmentGrid::new(to, tc);
        let samples = densify(from, fc, spacing);
        par::map(exec, &samples, |&p| grid.nearest(p))
            .into_iter()
            .fold(0.0, f64::max)
    };
    Ok(directed(a, a_closed, b, b_closed).max(directed(b, b_closed, a, a_closed)))
}

/// True when the closed polyline through `pts` has no repeated vertices
/// and no two segments meet except consecutive ones at their shared vertex.
pub fn is_simple_closed(pts: &[Point]) -> bool {
    let m = pts.len();
    if m < 3 {
        return false;
    }
    let seg = |i: usize| (pts[i], pts[(i + 1) % m]);
    if (0..m).any(|i| pts[i] == pts[(i + 1) % m]) {
        return false;
    }
    let grid = SegmentGrid::new(pts, true);
    let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
    for list in grid.cells.values() {
        for (x, &i) in list.iter().enumerate() {
            for &j in &list[x + 1..] {
                let (i, j) = (i.min(j) as usize, i.max(j) as usize);
                if seen.insert((i as u32, j as u32), ()).is_some() {
                    continue;
                }
                let (a, b) = seg(i);
                let (c, d) = seg(j);
                let adjacent = j == i + 1 || (i == 0 && j == m - 1);
                if adjacent {
                    // consecutive segments may only share their common vertex
                    let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    let (u, v) = if j == i + 1 { (c, d) } else { (a, b) };
                    let _ = (u, v);
                    if backtracks(shared, p, q) {
                        return false;
                    }
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
    }
    true
}

/// Consecutive segments `p–s` and `s–q` overlap beyond `s`.
fn backtracks(s: Point, p: Point, q: Point) -> bool {
    use super::predicates::orient;
    use std::cmp::Ordering;
    if orient(p, s, q) != Ordering::Equal {
        return false;
    }
    // collinear: overlap iff p and q lie on the same side of s
    let dp = [p[0] - s[0], p[1] - s[1]];
    let dq = [q[0] - s[0], q[1] - s[1]];
    dp[0] * dq[0] + dp[1] * dq[1] > 0.0
}
