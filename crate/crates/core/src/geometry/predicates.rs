use std::cmp::Ordering;

use robust::Coord;

pub type Point = [f64; 2];

#[inline]
fn c(p: Point) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

/// Exact sign of the orientation of `a, b, c`: positive when counterclockwise.
#[inline]
pub fn orient(a: Point, b: Point, c_: Point) -> Ordering {
    let v = robust::orient2d(c(a), c(b), c(c_));
    v.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// Exact sign of the in-circle determinant: positive when `d` lies strictly
/// inside the circle through the counterclockwise triangle `a, b, c`.
#[inline]
pub fn incircle(a: Point, b: Point, c_: Point, d: Point) -> Ordering {
    let v = robust::incircle(c(a), c(b), c(c_), c(d));
    v.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// In-circle test with ties broken by lifting point `i` to
/// `|p_i|² + ε^{rank_i}`. Points of lower rank receive the larger
/// perturbation; ranks must be distinct. The result is never `Equal` for a
/// nondegenerate triangle.
pub fn incircle_perturbed(pts: [Point; 4], ranks: [usize; 4]) -> Ordering {
    let [a, b, c_, d] = pts;
    let s = incircle(a, b, c_, d);
    if s != Ordering::Equal {
        return s;
    }
    let coeff = [
        orient(d, b, c_),
        orient(a, d, c_),
        orient(a, b, d),
        orient(a, b, c_).reverse(),
    ];
    let mut order = [0usize, 1, 2, 3];
    order.sort_by_key(|&i| ranks[i]);
    for i in order {
        if coeff[i] != Ordering::Equal {
            return coeff[i];
        }
    }
    Ordering::Equal
}

/// Lexicographic comparison on `(x, y)`.
pub fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
}

/// Whether `p` lies strictly between `a` and `b` on the segment `ab`,
/// assuming the three points are collinear.
pub fn strictly_between(a: Point, b: Point, p: Point) -> bool {
    let inside = |lo: f64, hi: f64, x: f64| (lo < x && x < hi) || (hi < x && x < lo);
    if a[0] != b[0] {
        inside(a[0], b[0], p[0])
    } else {
        inside(a[1], b[1], p[1])
    }
}

/// Whether closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Point, b: Point, c_: Point, d: Point) -> bool {
    let o1 = orient(a, b, c_);
    let o2 = orient(a, b, d);
    let o3 = orient(c_, d, a);
    let o4 = orient(c_, d, b);
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal
        && o3 != Ordering::Equal && o4 != Ordering::Equal
    {
        return true;
    }
    let on = |p: Point, q: Point, r: Point| {
        orient(p, q, r) == Ordering::Equal
            && r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    on(a, b, c_) || on(a, b, d) || on(c_, d, a) || on(c_, d, b)
}

/// Distance from `p` to the closed segment `ab`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    (p[0] - qx).hypot(p[1] - qy)
}

pub fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Circumcenter and circumradius of a nondegenerate triangle.
pub fn circumcircle(a: Point, b: Point, c_: Point) -> (Point, f64) {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c_[0] - a[0], c_[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    ([a[0] + ux, a[1] + uy], ux.hypot(uy))
}

/// Interior angles of a triangle, in radians.
pub fn angles(a: Point, b: Point, c_: Point) -> [f64; 3] {
    let ang = |p: Point, q: Point, r: Point| {
        let (ux, uy) = (q[0] - p[0], q[1] - p[1]);
        let (vx, vy) = (r[0] - p[0], r[1] - p[1]);
        (ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy)
    };
    [ang(a, b, c_), ang(b, c_, a), ang(c_, a, b)]
}

/// Radius of the inscribed circle.
pub fn inradius(a: Point, b: Point, c_: Point) -> f64 {
    let area2 = ((b[0] - a[0]) * (c_[1] - a[1]) - (b[1] - a[1]) * (c_[0] - a[0])).abs();
    area2 / (dist(a, b) + dist(b, c_) + dist(c_, a))
}

pub fn incenter(a: Point, b: Point, c_: Point) -> Point {
    let (la, lb, lc) = (dist(b, c_), dist(c_, a), dist(a, b));
    let s = la + lb + lc;
    [
        (la * a[0] + lb * b[0] + lc * c_[0]) / s,
        (la * a[1] + lb * b[1] + lc * c_[1]) / s,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        assert_eq!(orient([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]), Ordering::Greater);
        assert_eq!(orient([0.0, 0.0], [1.0, 1.0], [2.0, 2.0]), Ordering::Equal);
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]];
        assert_eq!(incircle(sq[0], sq[1], sq[2], [0.0, 1.0]), Ordering::Equal);
        assert_eq!(incircle(sq[0], sq[1], sq[2], [0.5, 0.5]), Ordering::Greater);
        // Near-degenerate input that fools naive floating point.
        let a = [0.5, 0.5];
        let b = [12.0, 12.0];
        let c_ = [24.0, 24.0];
        let p = [0.5 + f64::EPSILON, 0.5];
        assert_eq!(orient(a, b, c_), Ordering::Equal);
        assert_eq!(orient(a, b, p), Ordering::Less);
    }

    #[test]
    fn perturbation_breaks_square_tie() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let s1 = incircle_perturbed([sq[0], sq[1], sq[2], sq[3]], [0, 2, 3, 1]);
        let s2 = incircle_perturbed([sq[0], sq[1], sq[3], sq[2]], [0, 2, 1, 3]);
        assert_ne!(s1, Ordering::Equal);
        assert_ne!(s2, Ordering::Equal);
        // Exactly one diagonal survives.
        assert_ne!(s1 == Ordering::Less, s2 == Ordering::Less);
    }

    #[test]
    fn segment_tests() {
        let o = [0.0, 0.0];
        assert!(segments_intersect(o, [2.0, 2.0], [0.0, 2.0], [2.0, 0.0]));
        assert!(segments_intersect(o, [2.0, 0.0], [1.0, 0.0], [3.0, 0.0]));
        assert!(segments_intersect(o, [2.0, 0.0], [2.0, 0.0], [3.0, 1.0]));
        assert!(!segments_intersect(o, [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]));
        assert!(!segments_intersect(o, [1.0, 1.0], [1.0, 0.0], [2.0, -1.0]));
        assert!((point_segment_distance([0.5, 1.0], o, [1.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_measures() {
        let (c_, r) = circumcircle([0.0, 0.0], [2.0, 0.0], [0.0, 2.0]);
        assert!((c_[0] - 1.0).abs() < 1e-15 && (c_[1] - 1.0).abs() < 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        let a = angles([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert!((a.iter().sum::<f64>() - std::f64::consts::PI).abs() < 1e-12);
        assert!((inradius([0.0, 0.0], [3.0, 0.0], [0.0, 4.0]) - 1.0).abs() < 1e-15);
    }
}
