use serde::{Deserialize, Serialize};

use super::model::{Model, ModelSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fraction of positions where prediction and label agree.
pub fn zero_one_score(predictions: &[usize], labels: &[usize]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::InvalidInput("cannot score an empty set".into()));
    }
    let hits = predictions.iter().zip(labels).filter(|(p, y)| p == y).count();
    Ok(hits as f64 / labels.len() as f64)
}

/// `m[true][predicted]` counts over `n_classes` classes.
pub fn confusion_matrix(predictions: &[usize], labels: &[usize], n_classes: usize) -> Result<Vec<Vec<usize>>> {
    let mut m = vec![vec![0usize; n_classes]; n_classes];
    for (&p, &y) in predictions.iter().zip(labels) {
        if p >= n_classes || y >= n_classes {
            return Err(Error::InvalidInput(format!("class code out of range for {n_classes} classes")));
        }
        m[y][p] += 1;
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestEval {
    pub accuracy: f64,
    pub confusion: Vec<Vec<usize>>,
    pub predictions: Vec<usize>,
}

/// Scores a fitted model on a held-out set.
pub fn evaluate<T: Scalar>(model: &Model<T>, features: &[Vec<T>], labels: &[usize], n_classes: usize) -> Result<TestEval> {
    if features.len() != labels.len() {
        return Err(Error::InvalidInput(format!("{} rows but {} labels", features.len(), labels.len())));
    }
    let predictions = model.predict_many(features)?;
    Ok(TestEval {
        accuracy: zero_one_score(&predictions, labels)?,
        confusion: confusion_matrix(&predictions, labels, n_classes)?,
        predictions,
    })
}

/// Cross-validated training accuracy next to held-out accuracy.
///
/// `train_accuracy_std` is the population standard deviation of the
/// per-fold accuracies of the selected hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub hyperparameters: ModelSpec,
    pub folds: usize,
    pub seed: u64,
    pub train_accuracy_mean: f64,
    pub train_accuracy_std: f64,
    pub test_accuracy: f64,
    pub confusion: Vec<Vec<usize>>,
    pub n_train: usize,
    pub n_test: usize,
}
