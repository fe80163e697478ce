//! Floating-point LLL reduction and Gram–Schmidt, for small dimensions.

/// Gram–Schmidt orthogonalisation of the rows of `basis`.
/// Returns the orthogonalised rows and the `mu` coefficients.
pub fn gram_schmidt(basis: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = basis.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = basis[i].clone();
        for j in 0..i {
            let denom = dot(&star[j], &star[j]);
            mu[i][j] = if denom > 0.0 { dot(&basis[i], &star[j]) / denom } else { 0.0 };
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        star.push(v);
    }
    (star, mu)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL-reduces the rows of `basis` in place with parameter `delta`.
/// Also applies the same unimodular row operations to `track` when given,
/// which lets callers recover integer coefficient vectors.
pub fn lll_reduce(basis: &mut [Vec<f64>], delta: f64, mut track: Option<&mut [Vec<i64>]>) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let (mut star, mut mu) = gram_schmidt(basis);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let (head, tail) = basis.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= q * y;
                }
                if let Some(t) = track.as_deref_mut() {
                    let (th, tt) = t.split_at_mut(k);
                    for (x, y) in tt[0].iter_mut().zip(&th[j]) {
                        *x -= q as i64 * y;
                    }
                }
                let (star2, mu2) = gram_schmidt(basis);
                star = star2;
                mu = mu2;
            }
        }
        let lhs = dot(&star[k], &star[k]);
        let rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * dot(&star[k - 1], &star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            if let Some(t) = track.as_deref_mut() {
                t.swap(k, k - 1);
            }
            let (star2, mu2) = gram_schmidt(basis);
            star = star2;
            mu = mu2;
            k = (k - 1).max(1);
        }
    }
}

/// Upper bound on the covering radius of the lattice spanned by the rows of
/// `basis`: half the Euclidean norm of the vector of Gram–Schmidt lengths of
/// an LLL-reduced basis.
pub fn covering_radius_bound_for_basis(basis: &[Vec<f64>]) -> f64 {
    let mut b = basis.to_vec();
    lll_reduce(&mut b, 0.99, None);
    let (star, _) = gram_schmidt(&b);
    0.5 * star.iter().map(|s| dot(s, s)).sum::<f64>().sqrt()
}
