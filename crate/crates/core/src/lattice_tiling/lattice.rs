use nalgebra::{DMatrix, DVector};

use crate::geometry::Point;
use crate::number_field::lll::{dot, gram_schmidt, lll_reduce};
use crate::number_field::FieldContext;

/// The lattice `σ(ℤ[λ])` (or `σ(ℤ[λ]²)` for real `λ`) with cached basis
/// images, an LLL-reduced basis for rounding, and integer arithmetic on
/// coefficient vectors.
#[derive(Clone, Debug)]
pub struct Lattice<'a> {
    ctx: &'a FieldContext,
    basis_planar: Vec<Point>,
    basis_w: Vec<DVector<f64>>,
    plane: (usize, usize),
    reduced: Vec<Vec<f64>>,
    reduced_coeffs: Vec<Vec<i64>>,
    gs: Vec<Vec<f64>>,
    sigma_inv: DMatrix<f64>,
}

impl<'a> Lattice<'a> {
    pub fn new(ctx: &'a FieldContext) -> Self {
        let len = ctx.elem_len();
        let sigma = ctx.sigma_matrix();
        let basis_w: Vec<DVector<f64>> = (0..len).map(|j| sigma.column(j).into_owned()).collect();
        let basis_planar = basis_w.iter().map(|w| ctx.project(w)).collect();
        let mut reduced: Vec<Vec<f64>> = basis_w.iter().map(|w| w.iter().copied().collect()).collect();
        let mut reduced_coeffs: Vec<Vec<i64>> = (0..len)
            .map(|i| (0..len).map(|j| i64::from(i == j)).collect())
            .collect();
        lll_reduce(&mut reduced, 0.99, Some(&mut reduced_coeffs));
        let (gs, _) = gram_schmidt(&reduced);
        let sigma_inv = sigma.clone().try_inverse().expect("embedding matrix is invertible");
        Lattice {
            ctx,
            basis_planar,
            basis_w,
            plane: ctx.plane_indices(),
            reduced,
            reduced_coeffs,
            gs,
            sigma_inv,
        }
    }

    pub fn ctx(&self) -> &'a FieldContext {
        self.ctx
    }

    /// Length of a coefficient vector.
    pub fn len(&self) -> usize {
        self.basis_w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis_w.is_empty()
    }

    /// `W` is the plane itself (nonreal quadratic `λ`): no vertical directions.
    pub fn is_flat(&self) -> bool {
        self.ctx.embed_dim() == 2
    }

    pub fn plane(&self) -> (usize, usize) {
        self.plane
    }

    pub fn sigma_inv(&self) -> &DMatrix<f64> {
        &self.sigma_inv
    }

    pub fn planar(&self, c: &[i64]) -> Point {
        let mut p = [0.0, 0.0];
        for (&k, b) in c.iter().zip(&self.basis_planar) {
            if k != 0 {
                p[0] += k as f64 * b[0];
                p[1] += k as f64 * b[1];
            }
        }
        p
    }

    pub fn embed(&self, c: &[i64]) -> DVector<f64> {
        let mut w = DVector::zeros(self.len());
        for (&k, b) in c.iter().zip(&self.basis_w) {
            if k != 0 {
                w.axpy(k as f64, b, 1.0);
            }
        }
        w
    }

    /// `σ(c)` with the `V_λ` coordinates zeroed.
    pub fn vertical(&self, c: &[i64]) -> DVector<f64> {
        let mut w = self.embed(c);
        w[self.plane.0] = 0.0;
        w[self.plane.1] = 0.0;
        w
    }

    pub fn vertical_norm(&self, c: &[i64]) -> f64 {
        self.vertical(c).norm()
    }

    /// A lattice point close to `w` (Babai rounding on the reduced basis).
    pub fn nearest(&self, w: &DVector<f64>) -> Vec<i64> {
        let n = self.len();
        let mut r: Vec<f64> = w.iter().copied().collect();
        let mut out = vec![0i64; n];
        for k in (0..n).rev() {
            let g = &self.gs[k];
            let c = (dot(&r, g) / dot(g, g)).round();
            if c != 0.0 {
                for (x, b) in r.iter_mut().zip(&self.reduced[k]) {
                    *x -= c * b;
                }
                for (o, u) in out.iter_mut().zip(&self.reduced_coeffs[k]) {
                    *o += c as i64 * u;
                }
            }
        }
        out
    }

    /// Lattice point near the planar point `p`, lifted to `V_λ`.
    pub fn snap(&self, p: Point) -> Vec<i64> {
        self.nearest(&self.ctx.lift_planar(p))
    }

    pub fn mul_lambda_pow(&self, c: &[i64], k: u32) -> Vec<i64> {
        self.ctx.mul_lambda_pow_int(c, k)
    }

    /// `z · c` for `z ∈ ℤ[λ]` given by `d` coefficients.
    pub fn mul_elem(&self, z: &[i64], c: &[i64]) -> Vec<i64> {
        let mut acc = vec![0i64; c.len()];
        let mut pow = c.to_vec();
        for (j, &zj) in z.iter().enumerate() {
            if j > 0 {
                pow = self.ctx.mul_lambda_int(&pow);
            }
            if zj != 0 {
                for (a, p) in acc.iter_mut().zip(&pow) {
                    *a += zj * p;
                }
            }
        }
        acc
    }

    /// Twice the signed area of `abc` in units of the covolume `|Im λ|`,
    /// exact when the lattice is flat.
    pub fn twice_area_exact(&self, a: &[i64], b: &[i64], c: &[i64]) -> Option<i128> {
        if !self.is_flat() {
            return None;
        }
        let u = [(b[0] - a[0]) as i128, (b[1] - a[1]) as i128];
        let v = [(c[0] - a[0]) as i128, (c[1] - a[1]) as i128];
        let det = u[0] * v[1] - u[1] * v[0];
        Some(if self.ctx.lambda().im < 0.0 { -det } else { det })
    }

    /// Area of one fundamental cell in the plane for flat lattices.
    pub fn covolume(&self) -> f64 {
        self.ctx.lambda().im.abs()
    }
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
