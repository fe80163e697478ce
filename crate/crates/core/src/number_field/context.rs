use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::classify::{classify_roots, is_irreducible, PerronClass};
use super::lll::covering_radius_bound_for_basis;
use super::poly::IntPolynomial;
use super::roots::{find_roots, Root};
use super::{FieldError, EMBED_TOL};

/// An element of ℚ[λ] (or of ℚ[λ]×ℚ[λ] when λ is real) in the power basis
/// `1, λ, …, λ^{d-1}`. For real contexts the two halves are concatenated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn from_ints(c: &[i64]) -> Self {
        FieldElement {
            coeffs: c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect(),
        }
    }

    pub fn zero(len: usize) -> Self {
        FieldElement { coeffs: vec![BigRational::zero(); len] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient is an integer, i.e. the element lies in the lattice.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        parts.serialize(s)
    }
}

/// A point of `W` with optional exact provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedPoint {
    pub coords: DVector<f64>,
    pub provenance: Option<FieldElement>,
}

/// One coordinate block of the embedding: a real conjugate contributes one
/// coordinate, a conjugate pair contributes (Re, Im).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingBlock {
    Real(usize),
    Complex(usize),
}

/// The field ℚ[λ] with everything the lattice construction needs: numeric
/// conjugates, the embedding `σ` into `W`, the action `m_λ`, the projection
/// `π` onto the expanding plane `V_λ` and the vertical projector.
///
/// In `W` coordinates the expanding plane is always spanned by the first two
/// coordinates (nonreal λ) or by coordinates `0` and `d` (real λ), and the
/// other eigenspaces are coordinate blocks orthogonal to it, so the vertical
/// norm is the Euclidean norm of the remaining coordinates.
#[derive(Clone, Debug)]
pub struct FieldContext {
    poly: IntPolynomial,
    roots: Vec<Root>,
    lambda_index: usize,
    real_roots: usize,
    complex_pairs: usize,
    is_real_lambda: bool,
    embed_dim: usize,
    companion: Vec<Vec<i64>>,
    blocks: Vec<EmbeddingBlock>,
    sigma: DMatrix<f64>,
    sigma_inv: DMatrix<f64>,
    m_lambda: DMatrix<f64>,
    v_lambda_basis: [DVector<f64>; 2],
    vertical_projector: DMatrix<f64>,
    class: PerronClass,
}

impl FieldContext {
    pub fn new(poly: &IntPolynomial) -> Result<Self, FieldError> {
        let class = super::classify_perron(poly);
        if !class.is_perron() {
            return Err(FieldError::NotPerron(class));
        }
        let roots = find_roots(poly, 1e-9)?;
        debug_assert!(is_irreducible(poly, &roots));
        debug_assert_eq!(classify_roots(&roots), class);
        let d = poly.degree();
        let lambda_index = 0;
        let is_real_lambda = roots[0].is_real();
        let real_roots = roots.iter().filter(|r| r.is_real()).count();
        let complex_pairs = (d - real_roots) / 2;

        // λ first, then the remaining real roots, then the remaining pairs.
        let mut blocks = Vec::with_capacity(real_roots + complex_pairs);
        blocks.push(if is_real_lambda {
            EmbeddingBlock::Real(0)
        } else {
            EmbeddingBlock::Complex(0)
        });
        for (i, r) in roots.iter().enumerate().skip(1) {
            if r.is_real() {
                blocks.push(EmbeddingBlock::Real(i));
            } else if r.value.im > 0.0 {
                blocks.push(EmbeddingBlock::Complex(i));
            }
        }

        let mut s = DMatrix::<f64>::zeros(d, d);
        let mut m = DMatrix::<f64>::zeros(d, d);
        let mut row = 0;
        for b in &blocks {
            match *b {
                EmbeddingBlock::Real(i) => {
                    let r = roots[i].value.re;
                    for k in 0..d {
                        s[(row, k)] = r.powi(k as i32);
                    }
                    m[(row, row)] = r;
                    row += 1;
                }
                EmbeddingBlock::Complex(i) => {
                    let z = roots[i].value;
                    let mut p = Complex64::new(1.0, 0.0);
                    for k in 0..d {
                        s[(row, k)] = p.re;
                        s[(row + 1, k)] = p.im;
                        p *= z;
                    }
                    m[(row, row)] = z.re;
                    m[(row, row + 1)] = -z.im;
                    m[(row + 1, row)] = z.im;
                    m[(row + 1, row + 1)] = z.re;
                    row += 2;
                }
            }
        }
        debug_assert_eq!(row, d);

        let (sigma, m_lambda, embed_dim) = if is_real_lambda {
            let dd = 2 * d;
            let mut s2 = DMatrix::<f64>::zeros(dd, dd);
            let mut m2 = DMatrix::<f64>::zeros(dd, dd);
            s2.view_mut((0, 0), (d, d)).copy_from(&s);
            s2.view_mut((d, d), (d, d)).copy_from(&s);
            m2.view_mut((0, 0), (d, d)).copy_from(&m);
            m2.view_mut((d, d), (d, d)).copy_from(&m);
            (s2, m2, dd)
        } else {
            (s, m, d)
        };
        let sigma_inv = sigma
            .clone()
            .try_inverse()
            .ok_or_else(|| FieldError::InvalidPolynomial("singular embedding".into()))?;

        let (ia, ib) = if is_real_lambda { (0, d) } else { (0, 1) };
        let mut e0 = DVector::zeros(embed_dim);
        e0[ia] = 1.0;
        let mut e1 = DVector::zeros(embed_dim);
        e1[ib] = 1.0;
        let mut vertical_projector = DMatrix::<f64>::identity(embed_dim, embed_dim);
        vertical_projector[(ia, ia)] = 0.0;
        vertical_projector[(ib, ib)] = 0.0;

        let q = poly.coeffs();
        let mut companion = vec![vec![0i64; d]; d];
        for j in 0..d {
            if j + 1 < d {
                companion[j + 1][j] = 1;
            } else {
                for (i, row) in companion.iter_mut().enumerate() {
                    row[j] = -q[i];
                }
            }
        }

        let ctx = FieldContext {
            poly: poly.clone(),
            roots,
            lambda_index,
            real_roots,
            complex_pairs,
            is_real_lambda,
            embed_dim,
            companion,
            blocks,
            sigma,
            sigma_inv,
            m_lambda,
            v_lambda_basis: [e0, e1],
            vertical_projector,
            class,
        };
        ctx.self_check()?;
        Ok(ctx)
    }

    /// Round-trip and commutation identities on the basis elements.
    fn self_check(&self) -> Result<(), FieldError> {
        let n = self.elem_len();
        for i in 0..n {
            let mut c = vec![0i64; n];
            c[i] = 1;
            let w = self.embed_int(&c);
            let p = self.project(&w);
            let direct = self.direct_planar(&c);
            let lhs = self.m_lambda.clone() * &w;
            let rhs = self.embed_int(&self.mul_lambda_int(&c));
            let err = (lhs - rhs).amax();
            let tol = EMBED_TOL * (1.0 + w.amax() * self.lambda().norm());
            if (p[0] - direct[0]).abs() > tol || (p[1] - direct[1]).abs() > tol || err > tol {
                return Err(FieldError::InvalidPolynomial(
                    "embedding identities failed".into(),
                ));
            }
        }
        Ok(())
    }

    fn direct_planar(&self, c: &[i64]) -> [f64; 2] {
        let d = self.degree();
        let lam = self.lambda();
        let eval = |cs: &[i64]| -> Complex64 {
            cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * lam + v as f64)
        };
        if self.is_real_lambda {
            [eval(&c[..d]).re, eval(&c[d..]).re]
        } else {
            let z = eval(c);
            [z.re, z.im]
        }
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn class(&self) -> PerronClass {
        self.class
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn lambda_index(&self) -> usize {
        self.lambda_index
    }

    pub fn lambda(&self) -> Complex64 {
        self.roots[self.lambda_index].value
    }

    pub fn real_root_count(&self) -> usize {
        self.real_roots
    }

    pub fn complex_pair_count(&self) -> usize {
        self.complex_pairs
    }

    pub fn is_real_lambda(&self) -> bool {
        self.is_real_lambda
    }

    pub fn embed_dim(&self) -> usize {
        self.embed_dim
    }

    /// Length of a coefficient vector: `d`, or `2d` for real λ.
    pub fn elem_len(&self) -> usize {
        if self.is_real_lambda {
            2 * self.degree()
        } else {
            self.degree()
        }
    }

    pub fn companion(&self) -> &[Vec<i64>] {
        &self.companion
    }

    pub fn blocks(&self) -> &[EmbeddingBlock] {
        &self.blocks
    }

    pub fn sigma_matrix(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn m_lambda(&self) -> &DMatrix<f64> {
        &self.m_lambda
    }

    pub fn v_lambda_basis(&self) -> &[DVector<f64>; 2] {
        &self.v_lambda_basis
    }

    pub fn vertical_projector(&self) -> &DMatrix<f64> {
        &self.vertical_projector
    }

    /// Largest modulus among the conjugates other than λ and λ̄ (0 if none).
    pub fn subdominant_modulus(&self) -> f64 {
        let lam = self.lambda();
        self.roots
            .iter()
            .filter(|r| (r.value - lam).norm() > 1e-12 && (r.value - lam.conj()).norm() > 1e-12)
            .map(|r| r.modulus())
            .fold(0.0, f64::max)
    }

    fn check_len(&self, got: usize) -> Result<(), FieldError> {
        if got != self.elem_len() {
            return Err(FieldError::DimensionMismatch { expected: self.elem_len(), got });
        }
        Ok(())
    }

    pub fn sigma(&self, elem: &FieldElement) -> Result<EmbeddedPoint, FieldError> {
        self.check_len(elem.len())?;
        let v = DVector::from_vec(elem.to_f64s());
        Ok(EmbeddedPoint { coords: &self.sigma * v, provenance: Some(elem.clone()) })
    }

    pub fn embed_f64(&self, c: &[f64]) -> DVector<f64> {
        &self.sigma * DVector::from_column_slice(c)
    }

    pub fn embed_int(&self, c: &[i64]) -> DVector<f64> {
        let v: Vec<f64> = c.iter().map(|&x| x as f64).collect();
        self.embed_f64(&v)
    }

    /// Real coefficient vector whose embedding is `w`.
    pub fn unembed(&self, w: &DVector<f64>) -> Vec<f64> {
        (&self.sigma_inv * w).iter().copied().collect()
    }

    /// Coordinates of `W` spanned by `V_λ`.
    pub fn plane_indices(&self) -> (usize, usize) {
        if self.is_real_lambda {
            (0, self.degree())
        } else {
            (0, 1)
        }
    }

    pub fn project(&self, w: &DVector<f64>) -> [f64; 2] {
        let (a, b) = self.plane_indices();
        [w[a], w[b]]
    }

    pub fn pi_project(&self, p: &EmbeddedPoint) -> Result<[f64; 2], FieldError> {
        if p.coords.len() != self.embed_dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.embed_dim,
                got: p.coords.len(),
            });
        }
        Ok(self.project(&p.coords))
    }

    pub fn planar(&self, elem: &FieldElement) -> Result<[f64; 2], FieldError> {
        Ok(self.project(&self.sigma(elem)?.coords))
    }

    pub fn planar_int(&self, c: &[i64]) -> [f64; 2] {
        self.project(&self.embed_int(c))
    }

    /// Point of `W` lying on `V_λ` above the planar point `p`.
    pub fn lift_planar(&self, p: [f64; 2]) -> DVector<f64> {
        let (a, b) = self.plane_indices();
        let mut w = DVector::zeros(self.embed_dim);
        w[a] = p[0];
        w[b] = p[1];
        w
    }

    pub fn vertical_part(&self, w: &DVector<f64>) -> DVector<f64> {
        let (a, b) = self.plane_indices();
        let mut v = w.clone();
        v[a] = 0.0;
        v[b] = 0.0;
        v
    }

    pub fn vertical_norm_embedded(&self, w: &DVector<f64>) -> f64 {
        self.vertical_part(w).norm()
    }

    /// `|||v|||`, the distance from `σ(v)` to `V_λ`.
    pub fn vertical_norm(&self, elem: &FieldElement) -> Result<f64, FieldError> {
        Ok(self.vertical_norm_embedded(&self.sigma(elem)?.coords))
    }

    pub fn vertical_norm_int(&self, c: &[i64]) -> f64 {
        self.vertical_norm_embedded(&self.embed_int(c))
    }

    pub fn mul_lambda(&self, elem: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_len(elem.len())?;
        let d = self.degree();
        let q: Vec<BigRational> = self
            .poly
            .coeffs()
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        let mut out = Vec::with_capacity(elem.len());
        for half in elem.coeffs.chunks(d) {
            let top = &half[d - 1];
            for i in 0..d {
                let shifted = if i == 0 { BigRational::zero() } else { half[i - 1].clone() };
                out.push(shifted - &q[i] * top);
            }
        }
        Ok(FieldElement { coeffs: out })
    }

    pub fn mul_lambda_int(&self, c: &[i64]) -> Vec<i64> {
        let d = self.degree();
        let q = self.poly.coeffs();
        let mut out = Vec::with_capacity(c.len());
        for half in c.chunks(d) {
            let top = half[d - 1];
            for i in 0..d {
                let shifted = if i == 0 { 0 } else { half[i - 1] };
                out.push(shifted - q[i] * top);
            }
        }
        out
    }

    pub fn mul_lambda_pow_int(&self, c: &[i64], n: u32) -> Vec<i64> {
        let mut v = c.to_vec();
        for _ in 0..n {
            v = self.mul_lambda_int(&v);
        }
        v
    }

    /// `m_λ^n w`, computed blockwise from powers of the conjugates.
    pub fn m_lambda_pow(&self, w: &DVector<f64>, n: i32) -> DVector<f64> {
        let d = self.degree();
        let mut out = w.clone();
        let halves = if self.is_real_lambda { 2 } else { 1 };
        for h in 0..halves {
            let mut row = h * d;
            for b in &self.blocks {
                match *b {
                    EmbeddingBlock::Real(i) => {
                        out[row] = w[row] * self.roots[i].value.re.powi(n);
                        row += 1;
                    }
                    EmbeddingBlock::Complex(i) => {
                        let z = self.roots[i].value.powi(n) * Complex64::new(w[row], w[row + 1]);
                        out[row] = z.re;
                        out[row + 1] = z.im;
                        row += 2;
                    }
                }
            }
        }
        out
    }

    /// The bi-Lipschitz constant of `π` restricted to the plane of
    /// `σ(λ^n t)`, from the generalized singular values of the projected
    /// edge vectors against their embedded lengths.
    pub fn bilipschitz_constant(
        &self,
        triangle: &[FieldElement; 3],
        n: u32,
    ) -> Result<f64, FieldError> {
        let e1 = self.sigma(&triangle[1].sub(&triangle[0]))?.coords;
        let e2 = self.sigma(&triangle[2].sub(&triangle[0]))?.coords;
        self.bilipschitz_of_edges(&e1, &e2, n)
    }

    pub fn bilipschitz_of_edges(
        &self,
        e1: &DVector<f64>,
        e2: &DVector<f64>,
        n: u32,
    ) -> Result<f64, FieldError> {
        let w1 = self.m_lambda_pow(e1, n as i32);
        let w2 = self.m_lambda_pow(e2, n as i32);
        let p1 = self.project(&w1);
        let p2 = self.project(&w2);
        let det = p1[0] * p2[1] - p1[1] * p2[0];
        let scale = (p1[0].hypot(p1[1])) * (p2[0].hypot(p2[1]));
        if scale == 0.0 || det.abs() <= 1e-12 * scale {
            return Err(FieldError::DegenerateTriangle);
        }
        // Generalized eigenvalues of (PᵀP, G): det(PᵀP - μ G) = 0.
        let g = [[w1.dot(&w1), w1.dot(&w2)], [w1.dot(&w2), w2.dot(&w2)]];
        let h = [
            [p1[0] * p1[0] + p1[1] * p1[1], p1[0] * p2[0] + p1[1] * p2[1]],
            [p1[0] * p2[0] + p1[1] * p2[1], p2[0] * p2[0] + p2[1] * p2[1]],
        ];
        let a = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let b = -(h[0][0] * g[1][1] + h[1][1] * g[0][0] - h[0][1] * g[1][0] - h[1][0] * g[0][1]);
        let c = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        let mu_small = if b < 0.0 { 2.0 * c / (-b + disc) } else { (-b - disc) / (2.0 * a) };
        let mu_large = c / (a * mu_small);
        let s_min = mu_small.max(0.0).sqrt();
        let s_max = mu_large.max(0.0).sqrt();
        Ok(s_max.max(1.0 / s_min).max(1.0))
    }

    /// Upper bound on the covering radius of `σ(ℤ[λ])` in `W`.
    pub fn covering_radius_bound(&self) -> f64 {
        let n = self.elem_len();
        let basis: Vec<Vec<f64>> = (0..n)
            .map(|j| self.sigma.column(j).iter().copied().collect())
            .collect();
        covering_radius_bound_for_basis(&basis)
    }
}
