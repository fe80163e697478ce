//! Helpers shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

use selftile::free_group::{Letter, Word};

pub type Point = [f64; 2];

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn twice_area(a: &[BigRational; 2], b: &[BigRational; 2], c: &[BigRational; 2]) -> BigRational {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

/// Brute-force Delaunay triangulation. Point `i` is lifted to
/// `|p_i|² + ε^(rank_i + 1)` where `rank` is the lexicographic order of the
/// points; a triangle is kept when no other lifted point lies below the plane
/// through its lifted vertices. Returns ccw triples rotated to start at their
/// smallest index, sorted.
pub fn brute_force_delaunay(points: &[Point]) -> Vec<[usize; 3]> {
    let n = points.len();
    let pts: Vec<[BigRational; 2]> = points.iter().map(|p| [q(p[0]), q(p[1])]).collect();
    let lift: Vec<BigRational> = pts.iter().map(|p| &p[0] * &p[0] + &p[1] * &p[1]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        points[i][0].partial_cmp(&points[j][0]).unwrap().then(points[i][1].partial_cmp(&points[j][1]).unwrap())
    });
    let mut rank = vec![0usize; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let area = twice_area(&pts[a], &pts[b], &pts[c]);
                if area.is_zero() {
                    continue;
                }
                let tri = if area.is_positive() { [a, b, c] } else { [a, c, b] };
                let empty = (0..n).filter(|d| !tri.contains(d)).all(|d| !below_plane(&pts, &lift, &rank, tri, d));
                if empty {
                    out.push(tri);
                }
            }
        }
    }
    out.sort();
    out
}

/// Whether the perturbed lift of `d` lies strictly below the plane through the
/// perturbed lifts of `tri`. The comparison is a polynomial in ε whose terms
/// are compared from the constant term upwards.
fn below_plane(
    pts: &[[BigRational; 2]],
    lift: &[BigRational],
    rank: &[usize],
    tri: [usize; 3],
    d: usize,
) -> bool {
    let [a, b, c] = tri;
    let total = twice_area(&pts[a], &pts[b], &pts[c]);
    // barycentric coordinates of d
    let la = twice_area(&pts[d], &pts[b], &pts[c]) / &total;
    let lb = twice_area(&pts[a], &pts[d], &pts[c]) / &total;
    let lc = twice_area(&pts[a], &pts[b], &pts[d]) / &total;
    let constant = &lift[d] - (&la * &lift[a] + &lb * &lift[b] + &lc * &lift[c]);
    let mut terms: Vec<(usize, BigRational)> = vec![
        (rank[d], BigRational::from_integer(BigInt::from(1))),
        (rank[a], -la),
        (rank[b], -lb),
        (rank[c], -lc),
    ];
    terms.sort_by_key(|t| t.0);
    let sign = std::iter::once(constant)
        .chain(terms.into_iter().map(|t| t.1))
        .map(|v| v.cmp(&BigRational::zero()))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal);
    sign == Ordering::Less
}

/// Whether all points lie on one line.
pub fn collinear(points: &[Point]) -> bool {
    let pts: Vec<[BigRational; 2]> = points.iter().map(|p| [q(p[0]), q(p[1])]).collect();
    (2..pts.len()).all(|i| twice_area(&pts[0], &pts[1], &pts[i]).is_zero())
}

/// Random word from `(generator, sign)` pairs, reduced.
pub fn word(letters: &[(u16, bool)]) -> Word {
    Word::new(letters.iter().map(|&(g, pos)| Letter::new(g, if pos { 1 } else { -1 })))
}

/// `w` followed by the generator powers cancelling its abelianization.
pub fn close_up(w: &Word, n: usize) -> Word {
    let ab = w.abelianize(n);
    let mut out = w.clone();
    for (i, e) in ab.iter().enumerate() {
        out = out.multiply(&Word::power_of(i as u16 + 1, -e));
    }
    out
}

/// The designated root of the expansion polynomial of `phi`, when it is
/// nonreal and consistent with the generator images.
pub fn endo_lambda(phi: &selftile::free_group::Endomorphism) -> Option<num_complex::Complex64> {
    use selftile::number_field::{find_roots, minimal_factor, IntPolynomial};
    let charpoly = IntPolynomial::new(phi.characteristic_polynomial()).ok()?;
    let poly = minimal_factor(&charpoly).ok()?;
    let lambda = find_roots(&poly, 1e-13).ok()?[0].value;
    let ok = lambda.im != 0.0 && selftile::free_group::consistency_check_lambda(phi, lambda, 1e-9).passed;
    ok.then_some(lambda)
}
