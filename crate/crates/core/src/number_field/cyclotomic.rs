use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::context::{FieldContext, FieldElement};
use super::lll::lll_reduce;
use super::poly::{cyclotomic_polynomial, euler_phi, RatPoly};

const SCALES: [f64; 3] = [1e6, 1e8, 1e10];

/// Looks for `ζ_m = e^{2πi/m}` in ℚ[λ] and returns its coefficients
/// `c_0..c_{d-1}` in the power basis of λ.
///
/// Candidates come from an integer relation search on `(1, λ, …, λ^{d-1}, ζ_m)`;
/// a candidate is only accepted when `Φ_m(Σ c_i x^i) ≡ 0 (mod q)` holds exactly
/// and `Σ c_i λ^i` is numerically `ζ_m` under the designated embedding.
pub fn cyclotomic_in_field(ctx: &FieldContext, m: u64) -> Option<FieldElement> {
    let d = ctx.degree();
    if m < 2 {
        return None;
    }
    if m == 2 {
        let mut c = vec![0i64; d];
        c[0] = -1;
        return Some(FieldElement::from_ints(&c));
    }
    if ctx.is_real_lambda() || !(d as u64).is_multiple_of(euler_phi(m)) {
        return None;
    }
    let lam = ctx.lambda();
    let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU / m as f64);
    let mut values: Vec<Complex64> = Vec::with_capacity(d + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..d {
        values.push(p);
        p *= lam;
    }
    values.push(zeta);

    let q = ctx.poly().to_rational();
    let phi = cyclotomic_polynomial(m);
    for scale in SCALES {
        let mut basis: Vec<Vec<f64>> = (0..=d)
            .map(|j| {
                let mut row = vec![0.0; d + 3];
                row[j] = 1.0;
                row[d + 1] = scale * values[j].re;
                row[d + 2] = scale * values[j].im;
                row
            })
            .collect();
        let mut track: Vec<Vec<i64>> = (0..=d)
            .map(|j| {
                let mut row = vec![0i64; d + 1];
                row[j] = 1;
                row
            })
            .collect();
        lll_reduce(&mut basis, 0.99, Some(&mut track));
        for rel in &track {
            let k = rel[d];
            if k == 0 {
                continue;
            }
            // k ζ + Σ a_i λ^i = 0  ⇒  ζ = −Σ a_i λ^i / k
            let den = BigInt::from(-k);
            let coeffs: Vec<BigRational> = rel[..d]
                .iter()
                .map(|&a| BigRational::new(BigInt::from(a), den.clone()))
                .collect();
            let c = RatPoly::new(coeffs.clone());
            if !phi.compose_mod(&c, &q).is_zero() {
                continue;
            }
            if (c.eval_complex(lam) - zeta).norm() > 1e-6 {
                continue;
            }
            let mut full = coeffs;
            full.resize(d, BigRational::zero());
            return Some(FieldElement { coeffs: full });
        }
    }
    None
}

/// True when `Φ_m(elem) ≡ 0 (mod q)` holds exactly.
pub fn verifies_exactly(ctx: &FieldContext, m: u64, elem: &FieldElement) -> bool {
    let c = RatPoly::new(elem.coeffs.clone());
    let q = ctx.poly().to_rational();
    cyclotomic_polynomial(m).compose_mod(&c, &q).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::IntPolynomial;

    fn ctx(c: &[i64]) -> FieldContext {
        FieldContext::new(&IntPolynomial::new(c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn penrose_fifth_root() {
        let k = ctx(&[1, -2, 4, -3, 1]);
        let z = cyclotomic_in_field(&k, 5).unwrap();
        assert_eq!(z, FieldElement::from_ints(&[-1, 1, 0, 0]));
        assert!(verifies_exactly(&k, 5, &z));
        let z10 = cyclotomic_in_field(&k, 10).unwrap();
        assert!(verifies_exactly(&k, 10, &z10));
        assert!(cyclotomic_in_field(&k, 3).is_none());
    }

    #[test]
    fn gaussian_fourth_root() {
        let k = ctx(&[2, -2, 1]);
        assert_eq!(cyclotomic_in_field(&k, 4).unwrap(), FieldElement::from_ints(&[-1, 1]));
        assert!(cyclotomic_in_field(&k, 5).is_none());
        assert!(cyclotomic_in_field(&k, 3).is_none());
        assert!(cyclotomic_in_field(&k, 8).is_none());
    }

    #[test]
    fn eisenstein_sixth_root() {
        // λ = 2 + ζ₆ has minimal polynomial x² − 5x + 7.
        let k = ctx(&[7, -5, 1]);
        let z = cyclotomic_in_field(&k, 6).unwrap();
        assert_eq!(z, FieldElement::from_ints(&[-2, 1]));
        let z3 = cyclotomic_in_field(&k, 3).unwrap();
        assert!(verifies_exactly(&k, 3, &z3));
    }

    #[test]
    fn real_field_and_square_root_of_minus_one() {
        let k = ctx(&[-1, -1, 1]);
        assert!(cyclotomic_in_field(&k, 4).is_none());
        assert_eq!(cyclotomic_in_field(&k, 2).unwrap(), FieldElement::from_ints(&[-1, 0]));
    }

    #[test]
    fn m_two_always_present() {
        let k = ctx(&[1, 2, -1, 1]);
        assert_eq!(cyclotomic_in_field(&k, 2).unwrap(), FieldElement::from_ints(&[-1, 0, 0]));
        assert!(cyclotomic_in_field(&k, 4).is_none());
    }
}
