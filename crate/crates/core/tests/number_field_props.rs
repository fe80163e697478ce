use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selftile::number_field::{
    classify_perron, cyclotomic_in_field, euler_phi, FieldContext, FieldElement, IntPolynomial, PerronClass,
};

const FIELDS: &[&[i64]] = &[
    &[2, -2, 1],
    &[1, 2, -1, 1],
    &[1, -2, 4, -3, 1],
    &[7, -5, 1],
    &[-1, -1, 1],
    &[-1, -1, 0, 1],
];

fn ctx(c: &[i64]) -> FieldContext {
    FieldContext::new(&IntPolynomial::new(c.to_vec()).unwrap()).unwrap()
}

fn elem(ctx: &FieldContext) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, ctx.elem_len())
}

fn as_c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Roots as companion-matrix eigenvalues.
fn eigen_roots(c: &[i64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -(c[i] as f64);
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn eval(c: &[i64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a as f64)
}

/// Reducible over ℤ: an integer root, or for quartics a product of two monic
/// quadratics with bounded middle coefficients.
fn reducible(c: &[i64]) -> bool {
    let d = c.len() - 1;
    if c[0] == 0 {
        return true;
    }
    let c0 = c[0].abs();
    let divisors: Vec<i64> = (1..=c0).filter(|k| c0 % k == 0).flat_map(|k| [k, -k]).collect();
    if divisors.iter().any(|&r| eval(c, Complex64::new(r as f64, 0.0)).norm() < 0.5) {
        return true;
    }
    if d == 4 {
        for &b in &divisors {
            let e = c[0] / b;
            for a in -30i64..=30 {
                // (x² + a x + b)(x² + f x + e)
                let f = c[3] - a;
                if a * f + b + e == c[2] && a * e + b * f == c[1] {
                    return true;
                }
            }
        }
    }
    false
}

fn oracle_class(c: &[i64]) -> Option<PerronClass> {
    if reducible(c) {
        return Some(PerronClass::NotAlgebraicallyValid);
    }
    let mut roots = eigen_roots(c);
    roots.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    let top = roots[0];
    let gap = 1e-7;
    if top.norm() <= 1.0 + gap {
        return if (top.norm() - 1.0).abs() < gap { None } else { Some(PerronClass::NotPerron) };
    }
    if top.im.abs() < gap {
        let next = roots.get(1).map_or(0.0, |r| r.norm());
        if (next - top.norm()).abs() < gap {
            return None;
        }
        return Some(if top.re > 0.0 && next < top.norm() { PerronClass::RealPerron } else { PerronClass::NotPerron });
    }
    let next = roots.get(2).map_or(0.0, |r| r.norm());
    if (next - top.norm()).abs() < gap {
        return Some(PerronClass::NotPerron);
    }
    Some(PerronClass::ComplexPerron)
}

#[test]
fn classification_matches_brute_force_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 50 {
        let d = rng.random_range(2..=4usize);
        let mut c: Vec<i64> = (0..d).map(|_| rng.random_range(-4..=4)).collect();
        c.push(1);
        let Some(expected) = oracle_class(&c) else { continue };
        let got = classify_perron(&IntPolynomial::new(c.clone()).unwrap());
        assert_eq!(got, expected, "{c:?}");
        checked += 1;
    }
}

/// Exact product in ℚ[x]/(q).
fn mul_mod(a: &[BigRational], b: &[BigRational], q: &[i64]) -> Vec<BigRational> {
    let d = q.len() - 1;
    let mut prod = vec![BigRational::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (d..prod.len()).rev() {
        let top = std::mem::take(&mut prod[k]);
        for i in 0..d {
            prod[k - d + i] -= &top * BigRational::from_integer(BigInt::from(q[i]));
        }
    }
    prod.truncate(d);
    prod
}

#[test]
fn roots_of_unity_satisfy_their_order_exactly() {
    for c in FIELDS {
        let k = ctx(c);
        let d = k.degree();
        for m in 1..=12u64 {
            let Some(z) = cyclotomic_in_field(&k, m) else { continue };
            assert_eq!(d as u64 % euler_phi(m), 0, "{c:?} m={m}");
            let z: Vec<BigRational> = z.coeffs[..d].to_vec();
            let mut one = vec![BigRational::zero(); d];
            one[0] = BigRational::one();
            let mut p = one.clone();
            for j in 1..=m {
                p = mul_mod(&p, &z, c);
                assert_eq!(p == one, j == m, "{c:?} ζ_{m}^{j}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn embedding_round_trips((i, v) in (0..FIELDS.len()).prop_flat_map(|i| (Just(i), elem(&ctx(FIELDS[i]))))) {
        let k = ctx(FIELDS[i]);
        let back = k.unembed(&k.embed_int(&v));
        for (a, b) in back.iter().zip(&v) {
            prop_assert!((a - *b as f64).abs() <= 1e-8 * (1.0 + b.abs() as f64));
        }
    }

    #[test]
    fn projection_evaluates_at_lambda((i, v) in (0..4usize).prop_flat_map(|i| (Just(i), elem(&ctx(FIELDS[i]))))) {
        let k = ctx(FIELDS[i]);
        let p = k.pi_project(&k.sigma(&FieldElement::from_ints(&v)).unwrap()).unwrap();
        let mut lifted = v.clone();
        lifted.push(0);
        let expected = eval(&lifted, k.lambda());
        prop_assert!((as_c(p) - expected).norm() < 1e-9 * (1.0 + expected.norm()));
    }

    #[test]
    fn embedding_intertwines_multiplication((i, v) in (0..FIELDS.len()).prop_flat_map(|i| (Just(i), elem(&ctx(FIELDS[i]))))) {
        let k = ctx(FIELDS[i]);
        let e = FieldElement::from_ints(&v);
        let lhs = k.sigma(&k.mul_lambda(&e).unwrap()).unwrap().coords;
        let rhs = k.m_lambda() * k.sigma(&e).unwrap().coords;
        for (a, b) in lhs.iter().zip(rhs.iter()) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn projection_commutes_with_lambda((i, v) in (0..FIELDS.len()).prop_flat_map(|i| (Just(i), elem(&ctx(FIELDS[i]))))) {
        let k = ctx(FIELDS[i]);
        let e = FieldElement::from_ints(&v);
        let lhs = as_c(k.planar(&k.mul_lambda(&e).unwrap()).unwrap());
        let rhs = k.lambda() * as_c(k.planar(&e).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn lambda_multiplication_matches_conjugates((i, v) in (0..4usize).prop_flat_map(|i| (Just(i), elem(&ctx(FIELDS[i]))))) {
        // complex fields only: each conjugate sees multiplication by itself
        let c = FIELDS[i];
        let k = ctx(c);
        let w = k.mul_lambda_int(&v);
        let mut lifted = v.clone();
        lifted.push(0);
        for z in eigen_roots(c) {
            let expected = z * eval(&lifted, z);
            let mut wl = w.clone();
            wl.push(0);
            prop_assert!((eval(&wl, z) - expected).norm() <= 1e-8 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn vertical_norm_contracts((i, v) in (0..FIELDS.len()).prop_flat_map(|i| (Just(i), elem(&ctx(FIELDS[i]))))) {
        let k = ctx(FIELDS[i]);
        let e = FieldElement::from_ints(&v);
        let before = k.vertical_norm(&e).unwrap();
        let after = k.vertical_norm(&k.mul_lambda(&e).unwrap()).unwrap();
        prop_assert!(after <= k.subdominant_modulus() * before * (1.0 + 1e-9) + 1e-9);
    }
}
