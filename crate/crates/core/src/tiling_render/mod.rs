//! Drawing words as lattice paths: the map `f` from the free group to
//! non-backtracking polygonal paths, rescaled boundary approximants
//! `λ^{-k} f(φ^k([a_i, a_j]))`, tile layouts and SVG output.

mod svg;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::free_group::{
    consistency_check_lambda, endo_subdivision, generator_vectors, Endomorphism, FreeGroupError,
    Word,
};
use crate::geometry::{self, Point};
use crate::par::{self, Exec};

pub use svg::{render_svg, RenderConfig, SvgItem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("{0} generator vectors given for a word on {1} generators")]
    TooFewVectors(usize, usize),
    #[error("generator vector {0} is zero")]
    ZeroVector(usize),
    #[error("endomorphism is not consistent with λ = {lambda} (residuals {residuals:?})")]
    Inconsistent { lambda: Complex64, residuals: Vec<f64> },
    #[error("pair ({0}, {1}) is not a basic commutator of the endomorphism")]
    BadPair(u16, u16),
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
}

/// A polygonal path. Closed paths do not repeat their first vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub vertices: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>, closed: bool) -> Self {
        Polyline { vertices, closed }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Polyline {
        Polyline {
            vertices: self
                .vertices
                .iter()
                .map(|p| {
                    let z = f(Complex64::new(p[0], p[1]));
                    [z.re, z.im]
                })
                .collect(),
            closed: self.closed,
        }
    }

    pub fn translate(&self, t: Complex64) -> Polyline {
        self.map(|z| z + t)
    }

    pub fn scale(&self, s: Complex64) -> Polyline {
        self.map(|z| z * s)
    }

    pub fn bbox(&self) -> Option<(Point, Point)> {
        let mut it = self.vertices.iter();
        let first = *it.next()?;
        Some(it.fold((first, first), |(lo, hi), p| {
            ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TilePlacement {
    #[serde(rename = "type")]
    pub type_index: (u16, u16),
    #[serde(serialize_with = "ser_complex")]
    pub translation: Complex64,
    pub level: u32,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// The path `f(w)` starting at the origin, one segment per letter.
pub fn word_to_path(w: &Word, gen_vectors: &[Complex64]) -> Result<Polyline, RenderError> {
    let n = w.max_gen() as usize;
    if gen_vectors.len() < n {
        return Err(RenderError::TooFewVectors(gen_vectors.len(), n));
    }
    if let Some(i) = gen_vectors.iter().position(|z| z.norm() == 0.0) {
        return Err(RenderError::ZeroVector(i + 1));
    }
    // Positions are evaluated from integer coordinates so that revisiting a
    // lattice point reproduces the same floats.
    let mut counts = vec![0i64; n];
    let at = |c: &[i64]| -> Complex64 {
        c.iter().zip(gen_vectors).map(|(&k, &v)| v * k as f64).sum()
    };
    let mut z = Complex64::new(0.0, 0.0);
    let mut vertices = Vec::with_capacity(w.len() + 1);
    vertices.push([0.0, 0.0]);
    let mut length = 0.0;
    for l in w.letters() {
        let g = l.gen as usize - 1;
        length += gen_vectors[g].norm() * (l.exp as f64).abs();
        counts[g] += l.exp as i64;
        z = at(&counts);
        vertices.push([z.re, z.im]);
    }
    let closed = w.len() > 1 && (counts.iter().all(|&x| x == 0) || z.norm() <= 1e-12 * length);
    if closed {
        vertices.pop();
    }
    Ok(Polyline { vertices, closed })
}

/// Endpoint of `f(w)`: the abelianization paired with the generator vectors.
pub fn endpoint(w: &Word, gen_vectors: &[Complex64]) -> Complex64 {
    w.letters()
        .iter()
        .map(|l| gen_vectors[l.gen as usize - 1] * l.exp as f64)
        .sum()
}

/// Shoelace area, positive for counterclockwise loops. Open paths are
/// treated as closed by their chord.
pub fn signed_area(p: &Polyline) -> f64 {
    let v = &p.vertices;
    let m = v.len();
    if m < 3 {
        return 0.0;
    }
    // Centre on the first vertex to limit cancellation.
    let o = v[0];
    let mut s = 0.0;
    for i in 1..m - 1 {
        let (a, b) = (v[i], v[i + 1]);
        s += (a[0] - o[0]) * (b[1] - o[1]) - (b[0] - o[0]) * (a[1] - o[1]);
    }
    0.5 * s
}

fn check(phi: &Endomorphism, lambda: Complex64) -> Result<(), RenderError> {
    let rep = consistency_check_lambda(phi, lambda, 1e-9);
    if !rep.passed {
        return Err(RenderError::Inconsistent { lambda, residuals: rep.residuals });
    }
    Ok(())
}

/// `φ^k(w)`.
pub fn iterate(phi: &Endomorphism, w: &Word, k: u32) -> Result<Word, FreeGroupError> {
    let mut out = w.clone();
    for _ in 0..k {
        out = phi.apply(&out)?;
    }
    Ok(out)
}

/// `λ^{-k} f(φ^k([a_i, a_j]))` with generator vectors `1, λ, …`. The word
/// is cyclically reduced first, so the spur `f(g)` of `g u g⁻¹` is dropped and
/// the loop `f(u)` is drawn from the endpoint of `f(g)`.
pub fn boundary_approx(
    phi: &Endomorphism,
    pair: (u16, u16),
    k: u32,
    lambda: Complex64,
) -> Result<Polyline, RenderError> {
    let (i, j) = pair;
    if i == 0 || j as usize > phi.n() || i >= j {
        return Err(RenderError::BadPair(i, j));
    }
    check(phi, lambda)?;
    let w = iterate(phi, &Word::basic_commutator(i, j), k)?;
    let gens = generator_vectors(lambda, phi.n());
    let (g, u) = w.cyclic_reduce();
    let path = word_to_path(&u, &gens)?.translate(endpoint(&g, &gens));
    Ok(path.scale(lambda.powi(-(k as i32))))
}

/// Approximants for several `k`, computed concurrently.
pub fn boundary_sequence(
    exec: Exec,
    phi: &Endomorphism,
    pair: (u16, u16),
    ks: &[u32],
    lambda: Complex64,
) -> Result<Vec<Polyline>, RenderError> {
    par::map(exec, ks, |&k| boundary_approx(phi, pair, k, lambda))
        .into_iter()
        .collect()
}

/// Positions of the tiles inside `λ · f([a_i, a_j])`: one placement per factor
/// `g [a_k, a_l] g⁻¹` of `φ([a_i, a_j])`, translated by the endpoint of `f(g)`.
/// Placing the level-`level` approximants of the children this way tiles
/// `λ` times the level-`level + 1` approximant of the parent.
pub fn subdivision_layout(
    phi: &Endomorphism,
    pair: (u16, u16),
    lambda: Complex64,
    level: u32,
) -> Result<Vec<TilePlacement>, RenderError> {
    check(phi, lambda)?;
    let sub = endo_subdivision(phi)?;
    let s = sub
        .pairs
        .iter()
        .position(|&p| p == pair)
        .ok_or(RenderError::BadPair(pair.0, pair.1))?;
    let gens = generator_vectors(lambda, phi.n());
    Ok(sub.placements[s]
        .iter()
        .map(|p| TilePlacement {
            type_index: p.target,
            translation: endpoint(&p.conjugator, &gens),
            level,
        })
        .collect())
}

pub fn hausdorff_distance(a: &Polyline, b: &Polyline) -> Result<f64, RenderError> {
    Ok(geometry::hausdorff_distance(&a.vertices, a.closed, &b.vertices, b.closed)?)
}

/// No two non-adjacent segments meet, no segment doubles back.
pub fn simplicity_check(p: &Polyline) -> bool {
    p.closed && geometry::is_simple_closed(&p.vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_group::standard_endo;

    fn lam() -> Complex64 {
        let ctx = crate::number_field::FieldContext::new(
            &crate::number_field::IntPolynomial::new(vec![1, 2, -1, 1]).unwrap(),
        )
        .unwrap();
        ctx.lambda()
    }

    #[test]
    fn paths() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let sq = word_to_path(&Word::basic_commutator(1, 2), &[one, i]).unwrap();
        assert!(sq.closed);
        assert_eq!(sq.vertices, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(signed_area(&sq), 1.0);
        let rev = Polyline::new(sq.vertices.iter().rev().copied().collect(), true);
        assert_eq!(signed_area(&rev), -1.0);
        let a = word_to_path(&Word::generator(1), &generator_vectors(lam(), 3)).unwrap();
        assert!(!a.closed);
        assert_eq!(a.vertices, vec![[0.0, 0.0], [1.0, 0.0]]);
        assert!(word_to_path(&Word::generator(3), &[one]).is_err());
    }

    #[test]
    fn image_of_c_ends_at_lambda_cubed() {
        let l = lam();
        let phi = standard_endo(3, 1, 2, 1).unwrap();
        let p = word_to_path(phi.image(3), &generator_vectors(l, 3)).unwrap();
        let end = p.vertices.last().unwrap();
        let l3 = l * l * l;
        assert!((Complex64::new(end[0], end[1]) - l3).norm() < 1e-12);
        assert!((l3 - (l * l - 2.0 * l - 1.0)).norm() < 1e-12);
    }

    #[test]
    fn parallelogram_area() {
        let l = lam();
        let p = word_to_path(&Word::basic_commutator(1, 2), &generator_vectors(l, 3)).unwrap();
        assert!((signed_area(&p) - l.im).abs() < 1e-12);
        assert!((l.im - 1.436).abs() < 5e-3);
    }

    #[test]
    fn approximants_and_layout() {
        let l = lam();
        let phi = standard_endo(3, 1, 2, 1).unwrap();
        let b0 = boundary_approx(&phi, (1, 2), 0, l).unwrap();
        let direct = word_to_path(&Word::basic_commutator(1, 2), &generator_vectors(l, 3)).unwrap();
        assert_eq!(b0, direct);
        let lay = subdivision_layout(&phi, (1, 2), l, 0).unwrap();
        assert_eq!(lay.len(), 1);
        assert_eq!(lay[0].type_index, (2, 3));
        assert_eq!(lay[0].translation, Complex64::new(0.0, 0.0));
        let lay = subdivision_layout(&phi, (2, 3), l, 0).unwrap();
        assert_eq!(lay.len(), 3);
        // areas of placed children add up to |λ|² times the parent
        let area = |p: (u16, u16)| signed_area(&boundary_approx(&phi, p, 3, l).unwrap());
        let parent = boundary_approx(&phi, (2, 3), 4, l).unwrap();
        let sum: f64 = lay.iter().map(|p| area(p.type_index)).sum();
        assert!((sum - l.norm_sqr() * signed_area(&parent)).abs() < 1e-9);
        let wrong = Complex64::new(1.0, 1.0);
        assert!(boundary_approx(&phi, (1, 2), 2, wrong).is_err());
    }

    #[test]
    fn approximants_are_simple() {
        let phi = standard_endo(3, 1, 2, 1).unwrap();
        for pair in [(1, 2), (2, 3), (1, 3)] {
            for k in 0..7 {
                assert!(simplicity_check(&boundary_approx(&phi, pair, k, lam()).unwrap()));
            }
        }
        // without cyclic reduction the loop has a spur back to the origin
        let w = iterate(&phi, &Word::basic_commutator(1, 3), 2).unwrap();
        assert!(!simplicity_check(&word_to_path(&w, &generator_vectors(lam(), 3)).unwrap()));
    }
}
