//! k-nearest-neighbour and CART classifiers, 0/1-loss scoring, stratified
//! cross-validation, grid search and model files.
//!
//! Labels are class codes `0..n_classes`. Both learners handle any number of
//! classes; the binary case needs nothing special.

mod cv;
mod eval;
mod grid;
mod knn;
mod model;
mod persist;
mod tree;

pub use cv::{cross_validate, stratified_folds, CvScore};
pub use eval::{confusion_matrix, evaluate, zero_one_score, EvalReport, TestEval};
pub use grid::{default_grid, default_knn_grid, default_tree_grid, grid_search, select_best, CellResult, GridResult, DEFAULT_FOLDS};
pub use knn::{knn_fit, knn_predict, KnnModel, TieRule};
pub use model::{Model, ModelKind, ModelSpec};
pub use persist::{load_model, save_model, ModelFile, MODEL_FILE_VERSION};
pub use tree::{tree_fit, tree_predict, Node, TreeModel, TreeParams};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shape checks shared by the fit functions. Returns the feature count.
pub(crate) fn check_training<T: Scalar>(features: &[Vec<T>], labels: &[usize]) -> Result<usize> {
    if features.is_empty() {
        return Err(Error::InvalidInput("empty training set".into()));
    }
    if features.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} feature rows but {} labels",
            features.len(),
            labels.len()
        )));
    }
    let d = features[0].len();
    if d == 0 {
        return Err(Error::InvalidInput("feature rows are empty".into()));
    }
    for (i, row) in features.iter().enumerate() {
        if row.len() != d {
            return Err(Error::InvalidInput(format!("row {i} has {} features, expected {d}", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("row {i} has a non-finite feature")));
        }
    }
    Ok(d)
}

pub(crate) fn check_query<T: Scalar>(x: &[T], n_features: usize) -> Result<()> {
    if x.len() != n_features {
        return Err(Error::InvalidInput(format!("query has {} features, model expects {n_features}", x.len())));
    }
    Ok(())
}

/// Most frequent class; ties go to the smallest code.
pub(crate) fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}
