//! Reference implementations that share no code with the library. Used by
//! the core integration tests and the acceptance suite.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Singular values from the eigenvalues of the smaller Gram matrix,
/// descending.
pub fn singular_values_via_eigen(rows: &[Vec<f64>]) -> Vec<f64> {
    let (r, c) = (rows.len(), rows[0].len());
    let a = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
    let gram = if r <= c { &a * a.transpose() } else { a.transpose() * &a };
    let mut ev: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    ev
}

/// Largest eigenvalue of the smaller Gram matrix, the scale for relative
/// eigenvalue comparisons.
pub fn gram_lambda_max(rows: &[Vec<f64>]) -> f64 {
    let s = singular_values_via_eigen(rows);
    s[0] * s[0]
}

/// Supporting hyperplanes `(n, b)` with `n . x <= b` for every point,
/// found by trying every d-subset of the points.
pub fn hull_halfspaces(points: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let d = points[0].len();
    let scale = points.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let tol = 1e-9 * scale;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        // Normal: null vector of the (d-1) x d edge matrix, via SVD.
        let base = &points[idx[0]];
        let edges = DMatrix::from_fn(d, d, |i, j| if i + 1 < d { points[idx[i + 1]][j] - base[j] } else { 0.0 });
        let svd = edges.svd(false, true);
        let vt = svd.v_t.unwrap();
        let k = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap();
        let mut second = f64::INFINITY;
        for (j, s) in svd.singular_values.iter().enumerate() {
            if j != k {
                second = second.min(*s);
            }
        }
        // Skip subsets that do not span a (d-1)-flat.
        if second > 1e-9 * scale {
            let n: DVector<f64> = vt.row(k).transpose();
            let b: f64 = n.iter().zip(base).map(|(a, x)| a * x).sum();
            let side: Vec<f64> = points.iter().map(|p| n.iter().zip(p).map(|(a, x)| a * x).sum::<f64>() - b).collect();
            if side.iter().all(|&s| s <= tol) {
                out.push((n.iter().copied().collect(), b));
            } else if side.iter().all(|&s| s >= -tol) {
                out.push((n.iter().map(|v| -v).collect(), -b));
            }
        }
        // Next combination.
        let n = points.len();
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Monte Carlo hull volume: uniform samples in the bounding box, membership
/// by the brute-force halfspace description.
pub fn monte_carlo_hull_volume(points: &[Vec<f64>], samples: usize, seed: u64) -> f64 {
    let d = points[0].len();
    let planes = hull_halfspaces(points);
    let lo: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; d];
    let mut inside = 0usize;
    for _ in 0..samples {
        for j in 0..d {
            x[j] = rng.random_range(lo[j]..hi[j]);
        }
        if planes.iter().all(|(n, b)| n.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>() <= *b) {
            inside += 1;
        }
    }
    box_volume * inside as f64 / samples as f64
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// k-NN by sorting every training row by (squared distance, index).
pub fn knn_oracle(x: &[Vec<f64>], y: &[usize], q: &[f64], k: usize) -> usize {
    let mut all: Vec<(f64, usize)> = x
        .iter()
        .enumerate()
        .map(|(i, row)| (row.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(), i))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let classes = y.iter().max().unwrap() + 1;
    let mut votes = vec![0usize; classes];
    for &(_, i) in &all[..k] {
        votes[y[i]] += 1;
    }
    let top = *votes.iter().max().unwrap();
    votes.iter().position(|&v| v == top).unwrap()
}

/// Exact weighted Gini impurity of a split, as a rational number.
pub fn weighted_gini(left: &[usize], right: &[usize], classes: usize) -> Ratio<i128> {
    let n = (left.len() + right.len()) as i128;
    let mut total = Ratio::from_integer(0);
    for side in [left, right] {
        if side.is_empty() {
            continue;
        }
        let m = side.len() as i128;
        let mut g = Ratio::from_integer(1);
        for c in 0..classes {
            let cnt = side.iter().filter(|&&v| v == c).count() as i128;
            g -= Ratio::new(cnt * cnt, m * m);
        }
        total += Ratio::new(m, n) * g;
    }
    total
}

/// Root split minimizing weighted Gini over every feature and every midpoint
/// of consecutive distinct values; the first candidate in (feature,
/// threshold) order wins ties.
pub fn exhaustive_root_split(x: &[Vec<f64>], y: &[usize], min_leaf: usize) -> Option<(usize, f64)> {
    let classes = y.iter().max().unwrap() + 1;
    let mut best: Option<(Ratio<i128>, usize, f64)> = None;
    for f in 0..x[0].len() {
        let mut vals: Vec<f64> = x.iter().map(|r| r[f]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let left: Vec<usize> = (0..x.len()).filter(|&i| x[i][f] <= t).map(|i| y[i]).collect();
            let right: Vec<usize> = (0..x.len()).filter(|&i| x[i][f] > t).map(|i| y[i]).collect();
            if left.len() < min_leaf || right.len() < min_leaf {
                continue;
            }
            let g = weighted_gini(&left, &right, classes);
            if best.as_ref().is_none_or(|(b, _, _)| g < *b) {
                best = Some((g, f, t));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

/// Robust / Fragile / Futile from the outcome multiset, as the truth table
/// states it: 0 = Robust, 1 = Fragile, 2 = Futile.
pub fn ternary_truth(stable: usize, unstable: usize) -> usize {
    match (stable > 0, unstable > 0) {
        (true, false) => 0,
        (false, true) => 2,
        (true, true) => 1,
        (false, false) => unreachable!("empty cluster"),
    }
}

/// Average ranks (1-based, ties share the mean rank).
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    cov / (va * vb).sqrt()
}
