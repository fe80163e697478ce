//! Integer and rational polynomials, lowest degree first.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::FieldError;

/// A polynomial with integer coefficients, stored lowest degree first.
///
/// Trailing zero coefficients are stripped on construction, so the last entry
/// is always the (nonzero) leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self, FieldError> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(FieldError::InvalidPolynomial(
                "degree must be at least 1".to_string(),
            ));
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }

    /// Value and first derivative at `z` (Horner).
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c as f64;
        }
        (p, dp)
    }

    pub fn to_rational(&self) -> RatPoly {
        RatPoly::from_ints(&self.coeffs)
    }
}

impl TryFrom<Vec<i64>> for IntPolynomial {
    type Error = FieldError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        IntPolynomial::new(v)
    }
}

impl From<IntPolynomial> for Vec<i64> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs
    }
}

/// Parses a comma separated coefficient list, lowest degree first: `"1,2,-1,1"`.
impl FromStr for IntPolynomial {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split(',')
            .map(|t| {
                // accept the unicode minus sign as well
                let t = t.trim().replace('\u{2212}', "-");
                t.parse::<i64>().map_err(|_| {
                    FieldError::InvalidPolynomial(format!("bad coefficient {t:?}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntPolynomial::new(coeffs)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let body = match (i, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "x".to_string(),
                (1, m) => format!("{m}x"),
                (k, 1) => format!("x^{k}"),
                (k, m) => format!("{m}x^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Dense polynomial over the rationals, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatPoly::new(vec![c])
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        RatPoly { coeffs: c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        RatPoly::new(c.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Quotient and remainder. Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let f = &rem[k] / &lead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &f * c;
            }
            quot[k - dd] = f;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> RatPoly {
        match self.coeffs.last() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => RatPoly::zero(),
        }
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Evaluates `self(g) mod modulus` by Horner's rule, reducing at every step.
    pub fn compose_mod(&self, g: &RatPoly, modulus: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&RatPoly::constant(c.clone())).rem(modulus);
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Integer coefficients when every coefficient is integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn max_abs_coeff(&self) -> BigRational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// The m-th cyclotomic polynomial, by dividing `x^m - 1` by the cyclotomic
/// polynomials of the proper divisors of `m`.
pub fn cyclotomic_polynomial(m: u64) -> RatPoly {
    assert!(m >= 1);
    let mut num = RatPoly::monomial(m as usize).sub(&RatPoly::one());
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = num.div_rem(&cyclotomic_polynomial(d)).0;
        }
    }
    num
}

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: IntPolynomial = "1,2,-1,1".parse().unwrap();
        assert_eq!(p.degree(), 3);
        assert!(p.is_monic());
        assert_eq!(p.to_string(), "x^3-x^2+2x+1");
        let q: IntPolynomial = "\u{2212}2, 0, 1".parse().unwrap();
        assert_eq!(q.coeffs(), &[-2, 0, 1]);
    }

    #[test]
    fn rejects_constants() {
        assert!(IntPolynomial::new(vec![3]).is_err());
        assert!(IntPolynomial::new(vec![3, 0, 0]).is_err());
        assert!("1,x".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), RatPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), RatPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(5), RatPoly::from_ints(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(6), RatPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), RatPoly::from_ints(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(7), 6);
    }

    #[test]
    fn division_and_gcd() {
        let a = RatPoly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = RatPoly::from_ints(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, RatPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = a.gcd(&RatPoly::from_ints(&[1, 2, 1]));
        assert_eq!(g, b);
    }

    #[test]
    fn penrose_polynomial_is_shifted_cyclotomic() {
        // Phi_5(x - 1) expanded.
        let phi5 = cyclotomic_polynomial(5);
        let shift = RatPoly::from_ints(&[-1, 1]);
        let big = RatPoly::monomial(50);
        let composed = phi5.compose_mod(&shift, &big);
        assert_eq!(composed, RatPoly::from_ints(&[1, -2, 4, -3, 1]));
    }
}
