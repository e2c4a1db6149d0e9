use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::check_training;
use super::eval::zero_one_score;
use super::model::ModelSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mean and population standard deviation of per-fold accuracies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvScore {
    pub mean: f64,
    pub std: f64,
    pub fold_scores: Vec<f64>,
}

impl CvScore {
    pub fn from_scores(fold_scores: Vec<f64>) -> Self {
        let n = fold_scores.len() as f64;
        let mean = fold_scores.iter().sum::<f64>() / n;
        let var = fold_scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
        CvScore { mean, std: var.sqrt(), fold_scores }
    }
}

/// Fold index for every row.
///
/// Rows of each class are shuffled (classes in code order, one ChaCha8
/// stream) and dealt round-robin, the deal continuing across classes. Fold
/// sizes therefore differ by at most one, as do per-class counts.
pub fn stratified_folds(labels: &[usize], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 folds, got {folds}")));
    }
    if folds > labels.len() {
        return Err(Error::InvalidInput(format!("{folds} folds but only {} rows", labels.len())));
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class = vec![Vec::new(); n_classes];
    for (i, &y) in labels.iter().enumerate() {
        by_class[y].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    let mut next = 0usize;
    for mut rows in by_class {
        rows.shuffle(&mut rng);
        for i in rows {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(assignment)
}

/// Row indices (train, held-out) for fold `f`.
pub(crate) fn fold_split(assignment: &[usize], f: usize) -> (Vec<usize>, Vec<usize>) {
    (0..assignment.len()).partition(|&i| assignment[i] != f)
}

pub(crate) fn gather<T: Clone>(v: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| v[i].clone()).collect()
}

/// Stratified k-fold cross-validation of one model spec.
pub fn cross_validate<T: Scalar>(
    features: &[Vec<T>],
    labels: &[usize],
    folds: usize,
    spec: &ModelSpec,
    seed: u64,
) -> Result<CvScore> {
    check_training(features, labels)?;
    let assignment = stratified_folds(labels, folds, seed)?;
    cross_validate_with(features, labels, &assignment, folds, spec)
}

pub(crate) fn cross_validate_with<T: Scalar>(
    features: &[Vec<T>],
    labels: &[usize],
    assignment: &[usize],
    folds: usize,
    spec: &ModelSpec,
) -> Result<CvScore> {
    let mut scores = Vec::with_capacity(folds);
    for f in 0..folds {
        let (train, held) = fold_split(assignment, f);
        let model = spec.fit(&gather(features, &train), &gather(labels, &train))?;
        let pred = model.predict_many(&gather(features, &held))?;
        scores.push(zero_one_score(&pred, &gather(labels, &held))?);
    }
    Ok(CvScore::from_scores(scores))
}
