use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::decompose::{expand_commutator, ConjugatedCommutator, Decomposition};
use super::word::{Letter, Word};
use super::FreeGroupError;
use crate::number_field::FieldContext;
use crate::spectral::SubdivisionMatrix;

/// An endomorphism of the free group on `n` generators, given by the images
/// of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Endomorphism {
    n: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(images: Vec<Word>) -> Result<Self, FreeGroupError> {
        let n = images.len();
        if n == 0 {
            return Err(FreeGroupError::InvalidEndomorphism("no generators".into()));
        }
        if let Some(w) = images.iter().find(|w| w.max_gen() as usize > n) {
            return Err(FreeGroupError::InvalidEndomorphism(format!(
                "image {w} uses a generator beyond {n}"
            )));
        }
        Ok(Endomorphism { n, images })
    }

    pub fn identity(n: usize) -> Self {
        Endomorphism { n, images: (1..=n as u16).map(Word::generator).collect() }
    }

    /// Parses a JSON object mapping generator letters to word strings,
    /// e.g. `{"a": "b", "b": "c", "c": "ca^-1b^-2"}`. Missing generators
    /// up to the largest letter present map to themselves.
    pub fn from_json(s: &str) -> Result<Self, FreeGroupError> {
        let map: BTreeMap<String, String> =
            serde_json::from_str(s).map_err(|e| FreeGroupError::Parse(e.to_string()))?;
        let mut images: BTreeMap<u16, Word> = BTreeMap::new();
        for (k, v) in &map {
            let g: Word = k.parse()?;
            if g.len() != 1 || g.letters()[0].exp != 1 {
                return Err(FreeGroupError::Parse(format!("\"{k}\" is not a generator")));
            }
            images.insert(g.letters()[0].gen, v.parse()?);
        }
        let n = images.keys().copied().max().unwrap_or(0) as usize;
        let n = n.max(images.values().map(|w| w.max_gen() as usize).max().unwrap_or(0));
        let images = (1..=n as u16)
            .map(|g| images.get(&g).cloned().unwrap_or_else(|| Word::generator(g)))
            .collect();
        Endomorphism::new(images)
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, w)| (Word::generator(i as u16 + 1).to_string(), w.to_string()))
            .collect();
        serde_json::to_string(&map).expect("string map serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: u16) -> &Word {
        &self.images[gen as usize - 1]
    }

    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        if w.max_gen() as usize > self.n {
            return Err(FreeGroupError::GeneratorOutOfRange { gen: w.max_gen(), n: self.n });
        }
        Ok(w.letters().iter().fold(Word::empty(), |acc, l| {
            let img = self.image(l.gen);
            if l.exp > 0 {
                acc.multiply(img)
            } else {
                acc.multiply(&img.inverse())
            }
        }))
    }

    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, FreeGroupError> {
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<_, _>>()?;
        Endomorphism::new(images)
    }

    /// Column `j` is the abelianization of `φ(a_{j+1})`.
    pub fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.abelianize(self.n)).collect();
        (0..self.n).map(|i| (0..self.n).map(|j| cols[j][i]).collect()).collect()
    }

    /// Characteristic polynomial of the abelianization matrix, lowest degree
    /// first.
    pub fn characteristic_polynomial(&self) -> Vec<i64> {
        characteristic_polynomial(&self.abelianization_matrix())
    }
}

/// `apply_endo`.
pub fn apply_endo(phi: &Endomorphism, w: &Word) -> Result<Word, FreeGroupError> {
    phi.apply(w)
}

/// The endomorphism `a_i ↦ a_{i+1}` (i < n), `a_n ↦ a_n^p a_1^{-r} a_2^{-q}`,
/// whose abelianization has characteristic polynomial
/// `x^n − p x^{n−1} + q x + r`.
pub fn standard_endo(n: usize, p: i64, q: i64, r: i64) -> Result<Endomorphism, FreeGroupError> {
    if n < 3 || p < 0 || q < 0 || r < 1 || n > u16::MAX as usize {
        return Err(FreeGroupError::InvalidEndomorphism(format!(
            "need n ≥ 3, p, q ≥ 0, r ≥ 1; got n={n}, p={p}, q={q}, r={r}"
        )));
    }
    let n16 = n as u16;
    let mut images: Vec<Word> = (2..=n16).map(Word::generator).collect();
    let last = Word::power_of(n16, p)
        .multiply(&Word::power_of(1, -r))
        .multiply(&Word::power_of(2, -q));
    images.push(last);
    Endomorphism::new(images)
}

/// Pairs `(i, j)`, `i < j`, ordered by `j − i` and then by `i`; for three
/// generators this is `[a,b], [b,c], [a,c]`.
pub fn pair_basis(n: usize) -> Vec<(u16, u16)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for gap in 1..n as u16 {
        for i in 1..=(n as u16 - gap) {
            out.push((i, i + gap));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub target: (u16, u16),
    pub conjugator: Word,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoSubdivision {
    pub pairs: Vec<(u16, u16)>,
    /// Row `s` counts, by type, the factors of `φ([a_i, a_j])` for source pair `s`.
    pub matrix: SubdivisionMatrix,
    /// Per source pair, the factors in emission order.
    pub placements: Vec<Vec<Placement>>,
}

/// Every `φ([a_i, a_j])` as a product of conjugated basic commutators,
/// obtained by expanding `[φ(a_i), φ(a_j)]`.
pub fn commutator_images(phi: &Endomorphism) -> Vec<((u16, u16), Decomposition)> {
    pair_basis(phi.n)
        .into_iter()
        .map(|(i, j)| ((i, j), expand_commutator(phi.image(i), phi.image(j))))
        .collect()
}

/// Signed factor counts: entry `(s, t)` is the sum of signs of the factors of
/// type `t` in the decomposition of source pair `s`.
pub fn signed_counts(phi: &Endomorphism) -> Vec<Vec<i64>> {
    let pairs = pair_basis(phi.n);
    commutator_images(phi)
        .iter()
        .map(|(_, d)| pairs.iter().map(|&(k, l)| d.signed_count(k, l)).collect())
        .collect()
}

/// Subdivision data of the archtiles `[a_i, a_j]`. Fails when some factor
/// has a negative exponent, or when some archtile has an empty image.
pub fn endo_subdivision(phi: &Endomorphism) -> Result<EndoSubdivision, FreeGroupError> {
    let pairs = pair_basis(phi.n);
    let index = |p: (u16, u16)| pairs.iter().position(|&q| q == p).expect("pair in basis");
    let mut rows = Vec::with_capacity(pairs.len());
    let mut placements = Vec::with_capacity(pairs.len());
    for (src, d) in commutator_images(phi) {
        if let Some(bad) = d.factors.iter().find(|f| f.sign < 0) {
            return Err(FreeGroupError::NegativeExponent { pair: src, factor: bad.pair });
        }
        let mut row = vec![0u64; pairs.len()];
        for f in &d.factors {
            row[index(f.pair)] += 1;
        }
        rows.push(row);
        placements.push(
            d.factors
                .into_iter()
                .map(|ConjugatedCommutator { conjugator, pair, sign }| Placement {
                    target: pair,
                    conjugator,
                    sign,
                })
                .collect(),
        );
    }
    let matrix = SubdivisionMatrix::new(rows)
        .map_err(|e| FreeGroupError::InvalidEndomorphism(e.to_string()))?;
    Ok(EndoSubdivision { pairs, matrix, placements })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lambda2 {
    pub pairs: Vec<(u16, u16)>,
    /// Row `s` is the image of `a_i ∧ a_j` for source pair `s = (i, j)`.
    pub matrix: Vec<Vec<i64>>,
    pub nonnegative: bool,
}

/// The map induced on `[F,F]/[F,[F,F]] ≅ Λ²ℤⁿ` by the abelianization of `φ`.
pub fn lambda2_matrix(phi: &Endomorphism) -> Lambda2 {
    let a = phi.abelianization_matrix();
    let pairs = pair_basis(phi.n);
    let matrix: Vec<Vec<i64>> = pairs
        .iter()
        .map(|&(i, j)| {
            let (i, j) = (i as usize - 1, j as usize - 1);
            pairs
                .iter()
                .map(|&(k, l)| {
                    let (k, l) = (k as usize - 1, l as usize - 1);
                    a[k][i] * a[l][j] - a[l][i] * a[k][j]
                })
                .collect()
        })
        .collect();
    let nonnegative = matrix.iter().flatten().all(|&x| x >= 0);
    Lambda2 { pairs, matrix, nonnegative }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub passed: bool,
    pub lambda: Complex64,
    /// `|endpoint f(φ(a_i)) − λ endpoint f(a_i)|` per generator.
    pub residuals: Vec<f64>,
    pub tol: f64,
}

/// Generator vectors `1, λ, …, λ^{n−1}`.
pub fn generator_vectors(lambda: Complex64, n: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(n);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        v.push(p);
        p *= lambda;
    }
    v
}

fn endpoint(w: &Word, gens: &[Complex64]) -> Complex64 {
    w.letters()
        .iter()
        .map(|&Letter { gen, exp }| gens[gen as usize - 1] * exp as f64)
        .sum()
}

/// Checks `f(φ(a_i)) = λ f(a_i)` at the path endpoints, with generator
/// vectors `1, λ, …`.
pub fn consistency_check_lambda(phi: &Endomorphism, lambda: Complex64, tol: f64) -> ConsistencyReport {
    let gens = generator_vectors(lambda, phi.n);
    let residuals: Vec<f64> = phi
        .images
        .iter()
        .zip(&gens)
        .map(|(img, g)| (endpoint(img, &gens) - lambda * g).norm())
        .collect();
    let scale = gens.iter().map(|g| g.norm()).fold(1.0, f64::max) * lambda.norm().max(1.0);
    let passed = residuals.iter().all(|&r| r <= tol * scale);
    ConsistencyReport { passed, lambda, residuals, tol }
}

pub fn consistency_check(phi: &Endomorphism, ctx: &FieldContext, tol: f64) -> ConsistencyReport {
    consistency_check_lambda(phi, ctx.lambda(), tol)
}

/// Characteristic polynomial `det(xI − A)` by the Faddeev–LeVerrier
/// recursion in exact integer arithmetic. Lowest degree first, monic.
pub fn characteristic_polynomial(a: &[Vec<i64>]) -> Vec<i64> {
    let n = a.len();
    let a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut c = vec![0i128; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k−1} + c_{n−k+1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|t| a[i][t] * m[t][j]).sum::<i128>();
            }
            next[i][i] += c[n - k + 1];
        }
        m = next;
        let tr: i128 = (0..n).map(|i| (0..n).map(|t| a[i][t] * m[t][i]).sum::<i128>()).sum();
        c[n - k] = -tr / k as i128;
    }
    c.into_iter().map(|x| x as i64).collect()
}
