use serde::{Deserialize, Serialize};

use super::{check_query, check_training};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How a tied vote among the k neighbours is resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Smallest class code among the tied classes.
    #[default]
    SmallestClass,
    /// Tied class whose closest neighbour ranks first.
    Nearest,
}

/// Stored training set for an exhaustive Euclidean k-NN classifier.
///
/// Features are used as given; there is no internal rescaling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnModel<T> {
    pub k: usize,
    pub tie_rule: TieRule,
    pub n_classes: usize,
    pub features: Vec<Vec<T>>,
    pub labels: Vec<usize>,
}

pub fn knn_fit<T: Scalar>(features: &[Vec<T>], labels: &[usize], k: usize, tie_rule: TieRule) -> Result<KnnModel<T>> {
    check_training(features, labels)?;
    if k == 0 || k > features.len() {
        return Err(Error::InvalidInput(format!("k = {k} must be in 1..={}", features.len())));
    }
    Ok(KnnModel {
        k,
        tie_rule,
        n_classes: labels.iter().max().map_or(0, |m| m + 1),
        features: features.to_vec(),
        labels: labels.to_vec(),
    })
}

pub fn knn_predict<T: Scalar>(model: &KnnModel<T>, x: &[T]) -> Result<usize> {
    model.predict(x)
}

impl<T: Scalar> KnnModel<T> {
    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// Indices of the k nearest rows, closest first; equal distances keep
    /// the lower row index first.
    pub fn neighbours(&self, x: &[T]) -> Result<Vec<usize>> {
        check_query(x, self.n_features())?;
        let mut d: Vec<(T, usize)> = self
            .features
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let s = row.iter().zip(x).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>();
                (s, i)
            })
            .collect();
        let key = |a: &(T, usize), b: &(T, usize)| {
            a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1))
        };
        if self.k < d.len() {
            d.select_nth_unstable_by(self.k - 1, key);
            d.truncate(self.k);
        }
        d.sort_by(key);
        Ok(d.into_iter().map(|(_, i)| i).collect())
    }

    pub fn predict(&self, x: &[T]) -> Result<usize> {
        let nn = self.neighbours(x)?;
        let mut votes = vec![0usize; self.n_classes];
        for &i in &nn {
            votes[self.labels[i]] += 1;
        }
        let top = *votes.iter().max().expect("k >= 1");
        Ok(match self.tie_rule {
            TieRule::SmallestClass => votes.iter().position(|&v| v == top).expect("a maximum exists"),
            TieRule::Nearest => nn.iter().map(|&i| self.labels[i]).find(|&c| votes[c] == top).expect("a maximum exists"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[f64]) -> Vec<Vec<f64>> {
        v.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn exact_match_with_k1() {
        let m = knn_fit(&rows(&[0.0, 1.0, 2.0, 3.0]), &[0, 1, 0, 2], 1, TieRule::default()).unwrap();
        for (x, y) in [(0.0, 0), (1.0, 1), (2.0, 0), (3.0, 2)] {
            assert_eq!(m.predict(&[x]).unwrap(), y);
        }
    }

    #[test]
    fn k_equal_rows_gives_global_majority() {
        let m = knn_fit(&rows(&[0.0, 1.0, 2.0, 3.0, 4.0]), &[1, 2, 2, 1, 2], 5, TieRule::default()).unwrap();
        for x in [-10.0, 0.5, 100.0] {
            assert_eq!(m.predict(&[x]).unwrap(), 2);
        }
    }

    #[test]
    fn distance_and_vote_ties() {
        // Query 1.5 is equidistant from rows 1 and 2: k=1 takes row 1.
        let m = knn_fit(&rows(&[0.0, 1.0, 2.0, 3.0]), &[2, 1, 0, 0], 1, TieRule::default()).unwrap();
        assert_eq!(m.predict(&[1.5]).unwrap(), 1);
        // k=2 at 1.5 sees classes 1 and 0 once each.
        let m = knn_fit(&rows(&[0.0, 1.0, 2.0, 3.0]), &[2, 1, 0, 0], 2, TieRule::SmallestClass).unwrap();
        assert_eq!(m.predict(&[1.5]).unwrap(), 0);
        let m = knn_fit(&rows(&[0.0, 1.0, 2.0, 3.0]), &[2, 1, 0, 0], 2, TieRule::Nearest).unwrap();
        assert_eq!(m.predict(&[1.5]).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(knn_fit::<f64>(&[], &[], 1, TieRule::default()).is_err());
        assert!(knn_fit(&rows(&[0.0]), &[0], 2, TieRule::default()).is_err());
        assert!(knn_fit(&rows(&[0.0]), &[0], 0, TieRule::default()).is_err());
        assert!(knn_fit(&rows(&[f64::NAN]), &[0], 1, TieRule::default()).is_err());
        let m = knn_fit(&rows(&[0.0]), &[0], 1, TieRule::default()).unwrap();
        assert!(m.predict(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn works_in_f32() {
        let m = knn_fit(&[vec![0.0f32, 0.0], vec![1.0, 1.0]], &[0, 1], 1, TieRule::default()).unwrap();
        assert_eq!(m.predict(&[0.9, 0.8]).unwrap(), 1);
    }
}
