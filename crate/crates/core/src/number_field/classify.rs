use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use super::FieldError;
use super::poly::{IntPolynomial, RatPoly};
use super::roots::{find_roots, Root};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PerronClass {
    NotAlgebraicallyValid,
    NotPerron,
    RealPerron,
    ComplexPerron,
}

impl PerronClass {
    pub fn is_perron(self) -> bool {
        matches!(self, PerronClass::RealPerron | PerronClass::ComplexPerron)
    }
}

/// Relative margin used when comparing root moduli.
const MODULUS_MARGIN: f64 = 1e-9;

/// Classifies the designated max-modulus root of `poly`.
///
/// Expansion requires `|λ| > 1`, which the complex Perron definition leaves
/// implicit; it is enforced for both real and complex classes.
pub fn classify_perron(poly: &IntPolynomial) -> PerronClass {
    if !poly.is_monic() || !is_squarefree(poly) {
        return PerronClass::NotAlgebraicallyValid;
    }
    let roots = match find_roots(poly, 1e-6) {
        Ok(r) => r,
        Err(_) => return PerronClass::NotAlgebraicallyValid,
    };
    if !is_irreducible(poly, &roots) {
        return PerronClass::NotAlgebraicallyValid;
    }
    classify_roots(&roots)
}

pub(crate) fn classify_roots(roots: &[Root]) -> PerronClass {
    let lambda = roots[0];
    let m = lambda.modulus();
    if m <= 1.0 + MODULUS_MARGIN {
        return PerronClass::NotPerron;
    }
    let conj = lambda.value.conj();
    let dominated = roots[1..]
        .iter()
        .filter(|r| lambda.is_real() || (r.value - conj).norm() > 1e-9 * m)
        .all(|r| r.modulus() < m * (1.0 - MODULUS_MARGIN));
    match (dominated, lambda.is_real()) {
        (false, _) => PerronClass::NotPerron,
        (true, true) if lambda.value.re > 0.0 => PerronClass::RealPerron,
        (true, true) => PerronClass::NotPerron,
        (true, false) => PerronClass::ComplexPerron,
    }
}

fn is_squarefree(poly: &IntPolynomial) -> bool {
    let p = poly.to_rational();
    p.gcd(&p.derivative()).degree() == Some(0)
}

/// Irreducibility over the rationals for a monic squarefree polynomial.
///
/// Every monic factor over ℚ has integer coefficients (Gauss) and is the
/// product of `x - r` over a subset of the roots, so it suffices to try every
/// subset of size at most `d/2` whose product rounds to an integer polynomial
/// and confirm exact divisibility.
pub fn is_irreducible(poly: &IntPolynomial, roots: &[Root]) -> bool {
    let d = poly.degree();
    if d == 1 {
        return true;
    }
    if poly.coeffs()[0] == 0 {
        return false;
    }
    let target = poly.to_rational();
    let mut chosen = Vec::new();
    for size in 1..=d / 2 {
        if has_factor_of_size(roots, size, 0, &mut chosen, &target) {
            return false;
        }
    }
    true
}

/// The irreducible factor of a monic `poly` vanishing at its designated
/// max-modulus root.
pub fn minimal_factor(poly: &IntPolynomial) -> Result<IntPolynomial, FieldError> {
    if !poly.is_monic() {
        return Err(FieldError::InvalidPolynomial("polynomial must be monic".into()));
    }
    let p = poly.to_rational();
    let squarefree = p.div_rem(&p.gcd(&p.derivative())).0.monic();
    let sf = IntPolynomial::new(
        squarefree
            .to_ints()
            .ok_or_else(|| FieldError::InvalidPolynomial("squarefree part is not integral".into()))?,
    )?;
    let roots = find_roots(&sf, 1e-9)?;
    let target = sf.to_rational();
    let mut chosen = vec![0];
    for size in 1..=sf.degree() {
        if let Some(f) = factor_with_first(&roots, size, 1, &mut chosen, &target) {
            return IntPolynomial::new(f);
        }
    }
    Ok(sf)
}

fn factor_with_first(
    roots: &[Root],
    size: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    target: &RatPoly,
) -> Option<Vec<i64>> {
    if chosen.len() == size {
        return test_subset(roots, chosen, target);
    }
    for i in start..roots.len() {
        chosen.push(i);
        if let Some(f) = factor_with_first(roots, size, i + 1, chosen, target) {
            chosen.pop();
            return Some(f);
        }
        chosen.pop();
    }
    None
}

fn has_factor_of_size(
    roots: &[Root],
    size: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    target: &RatPoly,
) -> bool {
    if chosen.len() == size {
        return test_subset(roots, chosen, target).is_some();
    }
    for i in start..roots.len() {
        chosen.push(i);
        if has_factor_of_size(roots, size, i + 1, chosen, target) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn test_subset(roots: &[Root], chosen: &[usize], target: &RatPoly) -> Option<Vec<i64>> {
    let mut prod = vec![Complex64::new(1.0, 0.0)];
    for &i in chosen {
        let r = roots[i].value;
        let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        prod = next;
    }
    let mut ints = Vec::with_capacity(prod.len());
    for c in &prod {
        let rounded = c.re.round();
        if c.im.abs() > 1e-6 * (1.0 + c.norm()) || (c.re - rounded).abs() > 1e-6 * (1.0 + rounded.abs()) {
            return None;
        }
        ints.push(rounded as i64);
    }
    let candidate = RatPoly::from_ints(&ints);
    target.rem(&candidate).is_zero().then_some(ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(c: &[i64]) -> PerronClass {
        classify_perron(&IntPolynomial::new(c.to_vec()).unwrap())
    }

    #[test]
    fn factor_through_dominant_root() {
        let mul = |a: &[i64], b: &[i64]| RatPoly::from_ints(a).mul(&RatPoly::from_ints(b)).to_ints().unwrap();
        let f = |c: Vec<i64>| minimal_factor(&IntPolynomial::new(c).unwrap()).unwrap();
        assert_eq!(f(mul(&[1, 2, -1, 1], &[1, 0, 1])).coeffs(), &[1, 2, -1, 1]);
        let sq = mul(&[-1, 1], &[-1, 1]);
        assert_eq!(f(mul(&[2, -2, 1], &sq)).coeffs(), &[2, -2, 1]);
        assert_eq!(f(mul(&[2, -2, 1], &[-3, 1])).coeffs(), &[-3, 1]);
        assert_eq!(f(vec![1, 2, -1, 1]).coeffs(), &[1, 2, -1, 1]);
    }

    #[test]
    fn examples() {
        assert_eq!(class(&[1, 2, -1, 1]), PerronClass::ComplexPerron);
        assert_eq!(class(&[-2, 0, 1]), PerronClass::NotPerron);
        assert_eq!(class(&[1, 0, 1]), PerronClass::NotPerron);
        assert_eq!(class(&[-1, -1, 1]), PerronClass::RealPerron);
        assert_eq!(class(&[-2, 3, 1]), PerronClass::NotPerron);
        assert_eq!(class(&[2, -2, 1]), PerronClass::ComplexPerron);
        assert_eq!(class(&[1, -2, 4, -3, 1]), PerronClass::ComplexPerron);
    }

    #[test]
    fn invalid_inputs() {
        // non-monic
        assert_eq!(class(&[1, 0, 2]), PerronClass::NotAlgebraicallyValid);
        // (x^2 - 2x + 2)(x - 3) is reducible
        assert_eq!(class(&[-6, 8, -5, 1]), PerronClass::NotAlgebraicallyValid);
        // square factor
        assert_eq!(class(&[1, -2, 1]), PerronClass::NotAlgebraicallyValid);
        // x * (x - 2)
        assert_eq!(class(&[0, -2, 1]), PerronClass::NotAlgebraicallyValid);
        // (x^2+1)(x^2+x+1): no linear factor but reducible
        assert_eq!(class(&[1, 1, 2, 1, 1]), PerronClass::NotAlgebraicallyValid);
    }

    #[test]
    fn linear_polynomials() {
        assert_eq!(class(&[-3, 1]), PerronClass::RealPerron);
        assert_eq!(class(&[1, 1]), PerronClass::NotPerron);
    }
}
