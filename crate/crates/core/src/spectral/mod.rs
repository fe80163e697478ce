//! Subdivision matrices: primitivity, the Perron eigenpair and the check
//! that tile areas form an eigenvector for `|λ|²`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is empty or not square")]
    NotSquare,
    #[error("row {0} is all zeros")]
    ZeroRow(usize),
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("power iteration did not settle within {0} iterations")]
    NoConvergence(usize),
    #[error("size mismatch: matrix has {expected} types, got {got} values")]
    SizeMismatch { expected: usize, got: usize },
}

/// Square matrix of nonnegative tile-type counts: entry `(i, j)` is the
/// number of tiles of type `j` in the expanded tile of type `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct SubdivisionMatrix {
    entries: Vec<Vec<u64>>,
}

impl SubdivisionMatrix {
    pub fn new(entries: Vec<Vec<u64>>) -> Result<Self, SpectralError> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(SpectralError::NotSquare);
        }
        if let Some(i) = entries.iter().position(|r| r.iter().all(|&x| x == 0)) {
            return Err(SpectralError::ZeroRow(i));
        }
        Ok(SubdivisionMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        SubdivisionMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, &x)| a as f64 * x).sum())
            .collect()
    }
}

impl TryFrom<Vec<Vec<u64>>> for SubdivisionMatrix {
    type Error = SpectralError;
    fn try_from(v: Vec<Vec<u64>>) -> Result<Self, Self::Error> {
        SubdivisionMatrix::new(v)
    }
}

impl From<SubdivisionMatrix> for Vec<Vec<u64>> {
    fn from(m: SubdivisionMatrix) -> Self {
        m.entries
    }
}

impl fmt::Display for SubdivisionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

/// Whether some power `M^k` with `k ≤ n² − 2n + 2` is strictly positive.
pub fn is_primitive(m: &SubdivisionMatrix) -> bool {
    let n = m.size();
    let base: Vec<Vec<bool>> = m.entries.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    let bound = n * n + 2 - 2 * n;
    let mut p = base.clone();
    for _ in 0..bound {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        p = bool_mul(&p, &base);
    }
    false
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronEigen {
    pub eigenvalue: f64,
    /// Strictly positive, entries sum to 1.
    pub eigenvector: Vec<f64>,
    pub iterations: usize,
}

pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Right Perron eigenpair `M v = ρ v` by power iteration from the all-ones
/// vector with sum normalisation.
pub fn perron_eigen(m: &SubdivisionMatrix, tol: f64) -> Result<PerronEigen, SpectralError> {
    perron_eigen_with(m, tol, DEFAULT_MAX_ITER)
}

pub fn perron_eigen_with(
    m: &SubdivisionMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<PerronEigen, SpectralError> {
    if !is_primitive(m) {
        return Err(SpectralError::NotPrimitive);
    }
    let n = m.size();
    let mut v = vec![1.0 / n as f64; n];
    for it in 1..=max_iter {
        let w = m.apply(&v);
        let s: f64 = w.iter().sum();
        let w: Vec<f64> = w.into_iter().map(|x| x / s).collect();
        let change: f64 = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = w;
        if change <= tol.max(4.0 * f64::EPSILON * n as f64) {
            let eigenvalue = m.apply(&v).iter().sum::<f64>();
            return Ok(PerronEigen { eigenvalue, eigenvector: v, iterations: it });
        }
    }
    Err(SpectralError::NoConvergence(max_iter))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaReport {
    pub passed: bool,
    /// `|(M a)_i − λλ̄ a_i| / (λλ̄ a_i)` per tile type.
    pub residuals: Vec<f64>,
    pub tol: f64,
}

/// Checks `M · areas = lambda_sq · areas` componentwise to relative `tol`.
pub fn check_area_eigenvector(
    m: &SubdivisionMatrix,
    areas: &[f64],
    lambda_sq: f64,
    tol: f64,
) -> Result<AreaReport, SpectralError> {
    if areas.len() != m.size() {
        return Err(SpectralError::SizeMismatch { expected: m.size(), got: areas.len() });
    }
    let ma = m.apply(areas);
    let residuals: Vec<f64> = ma
        .iter()
        .zip(areas)
        .map(|(x, a)| (x - lambda_sq * a).abs() / (lambda_sq * a).abs())
        .collect();
    let passed = areas.iter().all(|&a| a > 0.0) && residuals.iter().all(|&r| r <= tol);
    Ok(AreaReport { passed, residuals, tol })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Quasiperiodicity {
    Certificate { reason: String },
    Refusal { reason: String },
}

impl Quasiperiodicity {
    pub fn granted(&self) -> bool {
        matches!(self, Quasiperiodicity::Certificate { .. })
    }
}

/// A self-similar tiling with a primitive subdivision matrix and a tile
/// containing the origin in its interior is quasiperiodic.
pub fn quasiperiodicity_certificate(
    origin_tile_has_interior_origin: bool,
    m: &SubdivisionMatrix,
) -> Quasiperiodicity {
    match (origin_tile_has_interior_origin, is_primitive(m)) {
        (true, true) => Quasiperiodicity::Certificate {
            reason: "primitive subdivision matrix and a tile with the origin in its interior"
                .into(),
        },
        (false, _) => Quasiperiodicity::Refusal {
            reason: "no tile contains the origin in its interior".into(),
        },
        (true, false) => Quasiperiodicity::Refusal {
            reason: "subdivision matrix is not primitive".into(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig() -> SubdivisionMatrix {
        SubdivisionMatrix::new(vec![vec![0, 1, 0], vec![0, 2, 1], vec![1, 1, 0]]).unwrap()
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&fig()));
        assert!(!is_primitive(&SubdivisionMatrix::identity(2)));
        assert!(is_primitive(&SubdivisionMatrix::new(vec![vec![2]]).unwrap()));
        // Wielandt's matrix needs exactly n² − 2n + 2 steps.
        let w = SubdivisionMatrix::new(vec![
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 1, 0, 0],
        ])
        .unwrap();
        assert!(is_primitive(&w));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(SubdivisionMatrix::new(vec![]), Err(SpectralError::NotSquare));
        assert_eq!(
            SubdivisionMatrix::new(vec![vec![1, 0], vec![0, 0]]),
            Err(SpectralError::ZeroRow(1))
        );
    }

    #[test]
    fn eigenpairs() {
        let e = perron_eigen(&fig(), 1e-14).unwrap();
        assert!((e.eigenvalue - 2.546818).abs() < 1e-5, "{}", e.eigenvalue);
        assert!(e.eigenvector.iter().all(|&x| x > 0.0));
        let e = perron_eigen(&SubdivisionMatrix::new(vec![vec![2]]).unwrap(), 1e-12).unwrap();
        assert_eq!(e.eigenvalue, 2.0);
        assert_eq!(e.eigenvector, vec![1.0]);
        let e = perron_eigen(&SubdivisionMatrix::new(vec![vec![1, 1], vec![1, 1]]).unwrap(), 1e-12)
            .unwrap();
        assert!((e.eigenvalue - 2.0).abs() < 1e-12);
        assert!((e.eigenvector[0] - 0.5).abs() < 1e-12);
        assert_eq!(
            perron_eigen(&SubdivisionMatrix::identity(2), 1e-9),
            Err(SpectralError::NotPrimitive)
        );
    }

    #[test]
    fn area_vector() {
        let m = SubdivisionMatrix::new(vec![vec![2]]).unwrap();
        assert!(check_area_eigenvector(&m, &[1.0], 2.0, 1e-12).unwrap().passed);
        let e = perron_eigen(&fig(), 1e-15).unwrap();
        let mut a = e.eigenvector.clone();
        assert!(check_area_eigenvector(&fig(), &a, e.eigenvalue, 1e-9).unwrap().passed);
        a[1] *= 1.01;
        assert!(!check_area_eigenvector(&fig(), &a, e.eigenvalue, 1e-9).unwrap().passed);
        assert!(check_area_eigenvector(&fig(), &[1.0], 2.0, 1e-9).is_err());
    }

    #[test]
    fn certificate() {
        assert!(quasiperiodicity_certificate(true, &fig()).granted());
        assert!(!quasiperiodicity_certificate(false, &fig()).granted());
        assert!(!quasiperiodicity_certificate(true, &SubdivisionMatrix::identity(3)).granted());
    }

    #[test]
    fn serde_round_trip() {
        let s = serde_json::to_string(&fig()).unwrap();
        assert_eq!(s, "[[0,1,0],[0,2,1],[1,1,0]]");
        let back: SubdivisionMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fig());
        assert!(serde_json::from_str::<SubdivisionMatrix>("[[0,0],[1,1]]").is_err());
    }
}
