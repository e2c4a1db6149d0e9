//! Cyclic Jacobi eigen-decomposition for small symmetric matrices.

use crate::scalar::Scalar;

/// Eigenpairs of a symmetric matrix, sorted by ascending eigenvalue.
/// Eigenvectors are returned as unit vectors.
pub fn symmetric_eigen<T: Scalar>(a: &[Vec<T>]) -> Vec<(T, Vec<T>)> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();

    for _ in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let diag: T = (0..n).map(|i| m[i][i] * m[i][i]).sum();
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == T::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (m[p][q] + m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut pairs: Vec<(T, Vec<T>)> = (0..n)
        .map(|j| (m[j][j], v.iter().map(|row| row[j]).collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_symmetric_matrix() {
        let a = vec![
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.25],
            vec![0.5, -0.25, 1.0],
        ];
        let pairs = symmetric_eigen(&a);
        for (lambda, vec) in &pairs {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i][j] * vec[j]).sum();
                assert!((av - lambda * vec[i]).abs() < 1e-12);
            }
        }
        let trace: f64 = pairs.iter().map(|p| p.0).sum();
        assert!((trace - 8.0).abs() < 1e-12);
        assert!(pairs[0].0 <= pairs[1].0 && pairs[1].0 <= pairs[2].0);
    }
}
