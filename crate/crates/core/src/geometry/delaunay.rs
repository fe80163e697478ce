use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use super::predicates::{incircle_perturbed, lex_cmp, orient, strictly_between, Point};
use super::GeometryError;

const GHOST: u32 = u32::MAX;
const NONE: u32 = u32::MAX;

/// Delaunay triangulation of a planar point set, built incrementally with
/// exact predicates. Cocircular ties are broken by lifting each point by an
/// infinitesimal that decreases with its lexicographic rank, which makes the
/// result unique. The hull is closed off with ghost triangles sharing a
/// vertex at infinity.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pts: Vec<Point>,
    rank: Vec<usize>,
    tris: Vec<[u32; 3]>,
    nbr: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    vtri: Vec<u32>,
    last: u32,
}

fn hilbert_key(x: u32, y: u32, order: u32) -> u64 {
    let (mut x, mut y) = (x, y);
    let n = 1u32 << order;
    let mut d: u64 = 0;
    let mut s = n >> 1;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += (s as u64) * (s as u64) * ((3 * rx) ^ ry) as u64;
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

/// Indices of `pts` sorted along a Hilbert curve over their bounding box.
pub fn hilbert_order(pts: &[Point]) -> Vec<usize> {
    if pts.is_empty() {
        return Vec::new();
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let scale = ((1u32 << 16) - 1) as f64 / span;
    let mut idx: Vec<(u64, usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = ((p[0] - lo[0]) * scale) as u32;
            let y = ((p[1] - lo[1]) * scale) as u32;
            (hilbert_key(x, y, 16), i)
        })
        .collect();
    idx.sort_unstable();
    idx.into_iter().map(|(_, i)| i).collect()
}

impl Triangulation {
    /// Triangulates `points`. Exact duplicates are kept in the point list
    /// but only the first occurrence becomes a vertex.
    pub fn new(points: &[Point]) -> Result<Self, GeometryError> {
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let n = points.len();
        let mut by_lex: Vec<usize> = (0..n).collect();
        by_lex.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));
        let mut rank = vec![0usize; n];
        let mut duplicate = vec![false; n];
        for (r, w) in by_lex.iter().enumerate() {
            rank[*w] = r;
            if r > 0 && points[by_lex[r - 1]] == points[*w] {
                duplicate[*w] = true;
            }
        }
        let order: Vec<usize> =
            hilbert_order(points).into_iter().filter(|&i| !duplicate[i]).collect();
        if order.len() < 3 {
            return Err(GeometryError::TooFewPoints);
        }
        let p0 = order[0];
        let p1 = order[1];
        let k = order[2..]
            .iter()
            .position(|&i| orient(points[p0], points[p1], points[i]) != Ordering::Equal)
            .ok_or(GeometryError::AllCollinear)?
            + 2;
        let p2 = order[k];

        let mut tr = Triangulation {
            pts: points.to_vec(),
            rank,
            tris: Vec::with_capacity(2 * n + 8),
            nbr: Vec::with_capacity(2 * n + 8),
            alive: Vec::with_capacity(2 * n + 8),
            free: Vec::new(),
            vtri: vec![NONE; n],
            last: 0,
        };
        let (a, b, c) = if orient(points[p0], points[p1], points[p2]) == Ordering::Greater {
            (p0 as u32, p1 as u32, p2 as u32)
        } else {
            (p0 as u32, p2 as u32, p1 as u32)
        };
        let t = tr.alloc([a, b, c]);
        let g_ab = tr.alloc([b, a, GHOST]);
        let g_bc = tr.alloc([c, b, GHOST]);
        let g_ca = tr.alloc([a, c, GHOST]);
        tr.nbr[t as usize] = [g_bc, g_ca, g_ab];
        // ghost [u, v, G]: nbr[0] across (v, G), nbr[1] across (G, u), nbr[2] real side
        tr.nbr[g_ab as usize] = [g_ca, g_bc, t];
        tr.nbr[g_bc as usize] = [g_ab, g_ca, t];
        tr.nbr[g_ca as usize] = [g_bc, g_ab, t];
        tr.last = t;
        for (j, &i) in order.iter().enumerate() {
            if j == 0 || j == 1 || j == k {
                continue;
            }
            tr.insert(i as u32)?;
        }
        Ok(tr)
    }

    fn alloc(&mut self, v: [u32; 3]) -> u32 {
        let id = if let Some(id) = self.free.pop() {
            self.tris[id as usize] = v;
            self.nbr[id as usize] = [NONE; 3];
            self.alive[id as usize] = true;
            id
        } else {
            self.tris.push(v);
            self.nbr.push([NONE; 3]);
            self.alive.push(true);
            (self.tris.len() - 1) as u32
        };
        for &x in &v {
            if x != GHOST {
                self.vtri[x as usize] = id;
            }
        }
        id
    }

    fn kill(&mut self, t: u32) {
        self.alive[t as usize] = false;
        self.free.push(t);
    }

    #[inline]
    fn is_ghost(&self, t: u32) -> bool {
        self.tris[t as usize][2] == GHOST
    }

    #[inline]
    fn p(&self, v: u32) -> Point {
        self.pts[v as usize]
    }

    fn in_conflict(&self, t: u32, v: u32) -> bool {
        let [a, b, c] = self.tris[t as usize];
        let p = self.p(v);
        if c == GHOST {
            match orient(self.p(a), self.p(b), p) {
                Ordering::Greater => true,
                Ordering::Equal => strictly_between(self.p(a), self.p(b), p),
                Ordering::Less => false,
            }
        } else {
            let r = |x: u32| self.rank[x as usize];
            incircle_perturbed(
                [self.p(a), self.p(b), self.p(c), p],
                [r(a), r(b), r(c), r(v)],
            ) == Ordering::Greater
        }
    }

    /// Walks from the last created triangle to one containing `p`
    /// (or a ghost whose outer half-plane contains it).
    fn locate(&self, p: Point) -> u32 {
        let mut t = self.last;
        if !self.alive[t as usize] {
            t = self.alive.iter().position(|&a| a).expect("live triangle") as u32;
        }
        let mut steps = 0usize;
        let limit = 4 * self.tris.len() + 16;
        'walk: loop {
            steps += 1;
            if steps > limit {
                break;
            }
            if self.is_ghost(t) {
                let [a, b, _] = self.tris[t as usize];
                if orient(self.p(a), self.p(b), p) != Ordering::Less {
                    return t;
                }
                t = self.nbr[t as usize][2];
                continue;
            }
            let v = self.tris[t as usize];
            let start = steps % 3;
            for k in 0..3 {
                let i = (start + k) % 3;
                let a = v[(i + 1) % 3];
                let b = v[(i + 2) % 3];
                if orient(self.p(a), self.p(b), p) == Ordering::Less {
                    t = self.nbr[t as usize][i];
                    continue 'walk;
                }
            }
            return t;
        }
        // Fallback scan; not reached for valid triangulations.
        (0..self.tris.len() as u32)
            .find(|&t| {
                self.alive[t as usize] && {
                    let [a, b, c] = self.tris[t as usize];
                    if c == GHOST {
                        orient(self.p(a), self.p(b), p) == Ordering::Greater
                    } else {
                        orient(self.p(a), self.p(b), p) != Ordering::Less
                            && orient(self.p(b), self.p(c), p) != Ordering::Less
                            && orient(self.p(c), self.p(a), p) != Ordering::Less
                    }
                }
            })
            .expect("point lies in some triangle")
    }

    fn insert(&mut self, v: u32) -> Result<(), GeometryError> {
        let p = self.p(v);
        let start = self.locate(p);
        if !self.in_conflict(start, v) {
            return Err(GeometryError::Internal("located triangle is not in conflict".into()));
        }
        let mut cavity = vec![start];
        let mut in_cavity: HashMap<u32, ()> = HashMap::new();
        in_cavity.insert(start, ());
        let mut queue = VecDeque::from([start]);
        let mut boundary: Vec<(u32, u32, u32)> = Vec::new();
        while let Some(t) = queue.pop_front() {
            let vs = self.tris[t as usize];
            for i in 0..3 {
                let o = self.nbr[t as usize][i];
                let (a, b) = (vs[(i + 1) % 3], vs[(i + 2) % 3]);
                if in_cavity.contains_key(&o) {
                    continue;
                }
                if self.in_conflict(o, v) {
                    in_cavity.insert(o, ());
                    cavity.push(o);
                    queue.push_back(o);
                } else {
                    boundary.push((a, b, o));
                }
            }
        }
        // A neighbour found in conflict later may already have been recorded
        // as a boundary edge of an earlier triangle.
        boundary.retain(|&(_, _, o)| !in_cavity.contains_key(&o));

        for &t in &cavity {
            self.kill(t);
        }
        let mut by_start: HashMap<u32, u32> = HashMap::with_capacity(boundary.len());
        let mut created = Vec::with_capacity(boundary.len());
        for &(a, b, o) in &boundary {
            let verts = if a == GHOST {
                [b, v, GHOST]
            } else if b == GHOST {
                [v, a, GHOST]
            } else {
                [a, b, v]
            };
            let t = self.alloc(verts);
            self.set_nbr_across(t, a, b, o);
            self.replace_nbr_across(o, a, b, t);
            by_start.insert(a, t);
            created.push((a, b, t));
        }
        for &(a, b, t) in &created {
            // edge (b, v) is shared with the triangle whose boundary edge starts at b
            let next = *by_start
                .get(&b)
                .ok_or_else(|| GeometryError::Internal("open cavity boundary".into()))?;
            self.set_nbr_across(t, b, v, next);
            self.set_nbr_across(next, v, b, t);
            let _ = a;
        }
        self.last = created
            .iter()
            .map(|&(_, _, t)| t)
            .find(|&t| !self.is_ghost(t))
            .unwrap_or(created[0].2);
        Ok(())
    }

    /// Index (0..3) of the slot opposite the edge `{a, b}` in triangle `t`.
    fn slot_across(&self, t: u32, a: u32, b: u32) -> usize {
        let vs = self.tris[t as usize];
        (0..3)
            .find(|&i| vs[i] != a && vs[i] != b)
            .expect("edge belongs to triangle")
    }

    fn set_nbr_across(&mut self, t: u32, a: u32, b: u32, n: u32) {
        let i = self.slot_across(t, a, b);
        self.nbr[t as usize][i] = n;
    }

    fn replace_nbr_across(&mut self, o: u32, a: u32, b: u32, n: u32) {
        self.set_nbr_across(o, a, b, n);
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    /// Live finite triangles, counterclockwise, rotated so that the smallest
    /// index comes first, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = (0..self.tris.len())
            .filter(|&t| self.alive[t] && self.tris[t][2] != GHOST)
            .map(|t| canonical(self.tris[t]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Triangles incident to vertex `v`, in counterclockwise order.
    fn star(&self, v: u32) -> Vec<u32> {
        let start = self.vtri[v as usize];
        let mut out = Vec::new();
        let mut t = start;
        loop {
            out.push(t);
            let vs = self.tris[t as usize];
            let k = vs.iter().position(|&x| x == v).expect("vertex in star");
            // rotate counterclockwise: cross the edge (v, vs[k+1])
            let nxt = self.nbr[t as usize][(k + 2) % 3];
            t = nxt;
            if t == start || out.len() > self.tris.len() {
                break;
            }
        }
        out
    }

    fn triangle_with_edge(&self, a: u32, b: u32) -> Option<u32> {
        self.star(a).into_iter().find(|&t| {
            let vs = self.tris[t as usize];
            let k = vs.iter().position(|&x| x == a).unwrap();
            vs[(k + 1) % 3] == b
        })
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.vtri[a] != NONE && self.triangle_with_edge(a as u32, b as u32).is_some()
    }

    /// Makes the segment `ab` a union of triangulation edges by flipping
    /// crossing edges. Vertices lying exactly on the segment split it.
    /// Both endpoints must be vertices and the segment must lie in the hull.
    pub fn insert_constraint(&mut self, a: usize, b: usize) -> Result<(), GeometryError> {
        if self.vtri[a] == NONE || self.vtri[b] == NONE {
            return Err(GeometryError::Internal("constraint endpoint is not a vertex".into()));
        }
        let (mut a, b) = (a as u32, b as u32);
        while a != b {
            let (crossing, stop) = self.crossing_edges(a, b)?;
            self.flip_out(a, stop, crossing)?;
            a = stop;
        }
        Ok(())
    }

    /// Edges properly crossed by `ab`, walking from `a` until `b` or until a
    /// vertex lying on the segment, which is returned as the stop.
    fn crossing_edges(&self, a: u32, b: u32) -> Result<(VecDeque<(u32, u32)>, u32), GeometryError> {
        let (pa, pb) = (self.p(a), self.p(b));
        let mut first = None;
        for t in self.star(a) {
            let vs = self.tris[t as usize];
            let k = vs.iter().position(|&x| x == a).unwrap();
            let (x, y) = (vs[(k + 1) % 3], vs[(k + 2) % 3]);
            if x == GHOST || y == GHOST {
                continue;
            }
            for z in [x, y] {
                if z == b {
                    return Ok((VecDeque::new(), b));
                }
                if orient(pa, pb, self.p(z)) == Ordering::Equal
                    && strictly_between(pa, pb, self.p(z))
                {
                    return Ok((VecDeque::new(), z));
                }
            }
            if orient(pa, self.p(x), pb) == Ordering::Greater
                && orient(pa, self.p(y), pb) == Ordering::Less
            {
                // x lies right of ab, y left of it
                first = Some((t, y, x));
                break;
            }
        }
        let (mut t, mut l, mut r) = first
            .ok_or_else(|| GeometryError::Internal("constraint leaves the hull".into()))?;
        let mut out = VecDeque::new();
        loop {
            out.push_back((r, l));
            let o = {
                let i = self.slot_across(t, r, l);
                self.nbr[t as usize][i]
            };
            let z = *self.tris[o as usize]
                .iter()
                .find(|&&z| z != r && z != l)
                .expect("third vertex");
            if z == GHOST {
                return Err(GeometryError::Internal("constraint leaves the hull".into()));
            }
            if z == b {
                return Ok((out, b));
            }
            match orient(pa, pb, self.p(z)) {
                Ordering::Equal => return Ok((out, z)),
                Ordering::Greater => l = z,
                Ordering::Less => r = z,
            }
            t = o;
        }
    }

    fn flip_out(&mut self, a: u32, b: u32, mut queue: VecDeque<(u32, u32)>) -> Result<(), GeometryError> {
        let (pa, pb) = (self.p(a), self.p(b));
        let mut guard = 0usize;
        let cap = 64 * (queue.len() + 1) * (queue.len() + 1);
        while let Some((u, v)) = queue.pop_front() {
            guard += 1;
            if guard > cap {
                return Err(GeometryError::Internal("constraint flipping did not terminate".into()));
            }
            let t1 = self
                .triangle_with_edge(u, v)
                .ok_or_else(|| GeometryError::Internal("missing crossing edge".into()))?;
            let t2 = self.nbr[t1 as usize][self.slot_across(t1, u, v)];
            let w1 = *self.tris[t1 as usize].iter().find(|&&z| z != u && z != v).unwrap();
            let w2 = *self.tris[t2 as usize].iter().find(|&&z| z != u && z != v).unwrap();
            let convex = orient(self.p(w1), self.p(w2), self.p(u))
                == orient(self.p(w2), self.p(w1), self.p(v))
                && orient(self.p(w1), self.p(w2), self.p(u)) != Ordering::Equal
                && orient(self.p(u), self.p(v), self.p(w1))
                    == orient(self.p(v), self.p(u), self.p(w2))
                && orient(self.p(u), self.p(v), self.p(w1)) != Ordering::Equal;
            if !convex {
                queue.push_back((u, v));
                continue;
            }
            self.flip(t1, t2, u, v, w1, w2);
            let crosses = w1 != a
                && w1 != b
                && w2 != a
                && w2 != b
                && orient(pa, pb, self.p(w1)) != orient(pa, pb, self.p(w2))
                && orient(self.p(w1), self.p(w2), pa) != orient(self.p(w1), self.p(w2), pb);
            if crosses {
                queue.push_back((w1, w2));
            }
        }
        Ok(())
    }

    /// Replaces the diagonal `uv` shared by `t1 = (u, v, w1)` and
    /// `t2 = (v, u, w2)` with `w1 w2`.
    fn flip(&mut self, t1: u32, t2: u32, u: u32, v: u32, w1: u32, w2: u32) {
        let across = |s: &Self, t: u32, x: u32, y: u32| s.nbr[t as usize][s.slot_across(t, x, y)];
        let n_vw1 = across(self, t1, v, w1);
        let n_w1u = across(self, t1, w1, u);
        let n_uw2 = across(self, t2, u, w2);
        let n_w2v = across(self, t2, w2, v);
        self.tris[t1 as usize] = [u, w2, w1];
        self.tris[t2 as usize] = [v, w1, w2];
        self.nbr[t1 as usize] = [t2, n_w1u, n_uw2];
        self.nbr[t2 as usize] = [t1, n_w2v, n_vw1];
        self.replace_nbr_across(n_vw1, v, w1, t2);
        self.replace_nbr_across(n_uw2, u, w2, t1);
        self.vtri[u as usize] = t1;
        self.vtri[v as usize] = t2;
        self.vtri[w1 as usize] = t1;
        self.vtri[w2 as usize] = t2;
        self.last = t1;
    }
}

fn canonical(v: [u32; 3]) -> [usize; 3] {
    let v = [v[0] as usize, v[1] as usize, v[2] as usize];
    let k = (0..3).min_by_key(|&i| v[i]).unwrap();
    [v[k], v[(k + 1) % 3], v[(k + 2) % 3]]
}

/// Delaunay triangles of `points` as counterclockwise index triples, sorted.
pub fn delaunay(points: &[Point]) -> Result<Vec<[usize; 3]>, GeometryError> {
    Ok(Triangulation::new(points)?.triangles())
}
