//! Simultaneous root finding (Aberth–Ehrlich) with a posteriori error radii.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use super::FieldError;

/// A root approximation together with a radius of a disk known to contain
/// an exact root (Newton inclusion bound `d |q(z)| / |q'(z)|`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub radius: f64,
}

impl Root {
    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

pub const DEFAULT_MAX_ITER: usize = 500;

/// All complex roots of `poly`, sorted by decreasing modulus with ties broken
/// by decreasing imaginary part, so index 0 is the designated max-modulus
/// root with nonnegative imaginary part.
pub fn find_roots(poly: &IntPolynomial, tol: f64) -> Result<Vec<Root>, FieldError> {
    find_roots_with(poly, tol, DEFAULT_MAX_ITER)
}

pub fn find_roots_with(
    poly: &IntPolynomial,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Root>, FieldError> {
    let d = poly.degree();
    let lead = poly.leading() as f64;
    let c = poly.coeffs();

    if d == 1 {
        let v = -(c[0] as f64) / lead;
        return Ok(vec![Root { value: Complex64::new(v, 0.0), radius: 0.0 }]);
    }

    // Fujiwara-style bound for the initial circle.
    let radius = (0..d)
        .map(|k| ((c[k] as f64) / lead).abs().powf(1.0 / (d - k) as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4))
        .collect();

    for _ in 0..max_iter {
        let mut max_step = 0.0_f64;
        for k in 0..d {
            let (p, dp) = poly.eval_with_derivative(z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    let mut roots: Vec<Root> = z
        .iter()
        .map(|&v| {
            let (p, dp) = poly.eval_with_derivative(v);
            let r = if p.norm() == 0.0 { 0.0 } else { d as f64 * p.norm() / dp.norm() };
            Root { value: v, radius: r }
        })
        .collect();

    let worst = roots.iter().map(|r| r.radius).fold(0.0, f64::max);
    if !worst.is_finite() || worst >= tol {
        return Err(FieldError::RootsDidNotConverge {
            residuals: roots.iter().map(|r| poly.eval(r.value).norm()).collect(),
        });
    }

    snap_conjugates(&mut roots);
    sort_roots(&mut roots);
    Ok(roots)
}

/// Roots of a real polynomial come in conjugate pairs. Roots whose error disk
/// meets the real axis are made real; the others are paired and symmetrized.
fn snap_conjugates(roots: &mut [Root]) {
    let n = roots.len();
    let mut paired = vec![false; n];
    for i in 0..n {
        if roots[i].value.im.abs() <= roots[i].radius.max(1e-14 * roots[i].value.norm()) {
            roots[i].value.im = 0.0;
            paired[i] = true;
        }
    }
    for i in 0..n {
        if paired[i] || roots[i].value.im < 0.0 {
            continue;
        }
        let target = roots[i].value.conj();
        let partner = (0..n)
            .filter(|&j| !paired[j] && j != i && roots[j].value.im < 0.0)
            .min_by(|&a, &b| {
                (roots[a].value - target)
                    .norm()
                    .total_cmp(&(roots[b].value - target).norm())
            });
        if let Some(j) = partner {
            let re = 0.5 * (roots[i].value.re + roots[j].value.re);
            let im = 0.5 * (roots[i].value.im - roots[j].value.im);
            let rad = roots[i].radius.max(roots[j].radius);
            roots[i] = Root { value: Complex64::new(re, im), radius: rad };
            roots[j] = Root { value: Complex64::new(re, -im), radius: rad };
            paired[i] = true;
            paired[j] = true;
        }
    }
}

fn sort_roots(roots: &mut [Root]) {
    // bucket moduli so that numerically equal moduli compare as ties
    let key = |r: &Root| (r.modulus() * 1e9).round();
    roots.sort_by(|a, b| {
        key(b)
            .total_cmp(&key(a))
            .then(b.value.im.total_cmp(&a.value.im))
            .then(b.value.re.total_cmp(&a.value.re))
    });
}
