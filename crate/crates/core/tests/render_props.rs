mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use selftile::free_group::{decompose_commutator_word, endo_subdivision, generator_vectors, standard_endo, Word};
use selftile::spectral::check_area_eigenvector;
use selftile::tiling_render::{endpoint, signed_area, word_to_path};

use common::{close_up, endo_lambda, word};

fn letters(max_len: usize) -> impl Strategy<Value = Vec<(u16, bool)>> {
    prop::collection::vec((1u16..=3, any::<bool>()), 0..=max_len)
}

fn vectors() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.1f64..3.0, 0.0f64..std::f64::consts::TAU), 3)
        .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
}

fn area(w: &Word, gens: &[Complex64]) -> f64 {
    signed_area(&word_to_path(w, gens).unwrap())
}

/// `(p, q, r)` with a nonnegative subdivision and a consistent nonreal λ.
fn admissible() -> Vec<((i64, i64, i64), Complex64)> {
    let mut out = Vec::new();
    for p in 0..=3 {
        for q in 0..=3 {
            for r in 1..=3 {
                let phi = standard_endo(3, p, q, r).unwrap();
                if endo_subdivision(&phi).is_err() {
                    continue;
                }
                if let Some(l) = endo_lambda(&phi) {
                    out.push(((p, q, r), l));
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn commutators_draw_closed_loops(a in letters(10), b in letters(10), gens in vectors()) {
        let w = Word::commutator(&word(&a), &word(&b));
        prop_assert!(endpoint(&w, &gens).norm() < 1e-9);
        let p = word_to_path(&w, &gens).unwrap();
        prop_assert!(p.closed || w.len() <= 1);
    }

    #[test]
    fn area_scales_by_lambda_squared(l in letters(36)) {
        let phi = standard_endo(3, 1, 2, 1).unwrap();
        let lambda = endo_lambda(&phi).unwrap();
        let gens = generator_vectors(lambda, 3);
        let w = close_up(&word(&l), 3);
        let before = area(&w, &gens);
        let after = area(&phi.apply(&w).unwrap(), &gens);
        let expected = lambda.norm_sqr() * before;
        prop_assert!((after - expected).abs() <= 1e-9 * expected.abs().max(1.0), "{} vs {}", after, expected);
    }

    #[test]
    fn area_is_additive_over_factors(l in letters(36), gens in vectors()) {
        let w = close_up(&word(&l), 3);
        let d = decompose_commutator_word(&w).unwrap();
        let total: f64 = d
            .factors
            .iter()
            .map(|f| f.sign as f64 * area(&Word::basic_commutator(f.pair.0, f.pair.1), &gens))
            .sum();
        let direct = area(&w, &gens);
        let scale: f64 = d.factors.len().max(1) as f64 * gens.iter().map(|g| g.norm_sqr()).fold(1.0, f64::max);
        prop_assert!((direct - total).abs() <= 1e-9 * scale);
    }
}

#[test]
fn basis_parallelograms_share_orientation() {
    let cases = admissible();
    assert!(cases.len() >= 5, "{}", cases.len());
    for ((p, q, r), lambda) in cases {
        let gens = generator_vectors(lambda, 3);
        let areas: Vec<f64> = [(1, 2), (2, 3), (1, 3)].iter().map(|&(i, j)| area(&Word::basic_commutator(i, j), &gens)).collect();
        assert!(areas.iter().all(|&a| a > 0.0) || areas.iter().all(|&a| a < 0.0), "({p},{q},{r}) {areas:?}");
    }
}

#[test]
fn parallelogram_areas_form_the_perron_eigenvector() {
    for ((p, q, r), lambda) in admissible() {
        let phi = standard_endo(3, p, q, r).unwrap();
        let sub = endo_subdivision(&phi).unwrap();
        let gens = generator_vectors(lambda, 3);
        let mut areas: Vec<f64> =
            sub.pairs.iter().map(|&(i, j)| area(&Word::basic_commutator(i, j), &gens)).collect();
        if areas[0] < 0.0 {
            areas.iter_mut().for_each(|a| *a = -*a);
        }
        let rep = check_area_eigenvector(&sub.matrix, &areas, lambda.norm_sqr(), 1e-9).unwrap();
        assert!(rep.passed, "({p},{q},{r}) {:?}", rep.residuals);
    }
}
