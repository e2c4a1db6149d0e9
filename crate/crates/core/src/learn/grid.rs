use serde::{Deserialize, Serialize};

use super::check_training;
use super::cv::{cross_validate_with, fold_split, stratified_folds, CvScore};
use super::knn::TieRule;
use super::model::{Model, ModelKind, ModelSpec};
use super::tree::TreeParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_FOLDS: usize = 5;

pub fn default_knn_grid() -> Vec<ModelSpec> {
    [1, 3, 5, 7, 9, 11].into_iter().map(|k| ModelSpec::Knn { k, tie_rule: TieRule::default() }).collect()
}

/// Depth-major: every `min_samples_leaf` for depth 2, then depth 3, ...
pub fn default_tree_grid() -> Vec<ModelSpec> {
    let depths = [Some(2), Some(3), Some(4), Some(5), Some(6), Some(8), Some(10), None];
    depths
        .into_iter()
        .flat_map(|max_depth| {
            [1, 2, 5].into_iter().map(move |min_samples_leaf| ModelSpec::Tree(TreeParams { max_depth, min_samples_leaf }))
        })
        .collect()
}

pub fn default_grid(kind: ModelKind) -> Vec<ModelSpec> {
    match kind {
        ModelKind::Knn => default_knn_grid(),
        ModelKind::Tree => default_tree_grid(),
    }
}

/// Index of the highest score; the earliest cell wins ties and `None`
/// entries are skipped.
pub fn select_best(scores: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.iter().enumerate() {
        if let Some(s) = *s {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub spec: ModelSpec,
    /// `None` when the cell cannot be fitted on every training fold.
    pub score: Option<CvScore>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridResult<T> {
    pub best_index: usize,
    pub best: ModelSpec,
    pub cv: CvScore,
    pub cells: Vec<CellResult>,
    /// Winner refitted on all rows.
    pub model: Model<T>,
}

/// Cross-validates every cell on one shared fold assignment, keeps the
/// best mean accuracy and refits it on the full training set.
pub fn grid_search<T: Scalar>(
    features: &[Vec<T>],
    labels: &[usize],
    grid: &[ModelSpec],
    folds: usize,
    seed: u64,
) -> Result<GridResult<T>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty hyperparameter grid".into()));
    }
    check_training(features, labels)?;
    let assignment = stratified_folds(labels, folds, seed)?;
    let smallest_train = (0..folds).map(|f| fold_split(&assignment, f).0.len()).min().unwrap_or(0);

    let mut cells = Vec::with_capacity(grid.len());
    for spec in grid {
        let score = if spec.feasible(smallest_train) {
            Some(cross_validate_with(features, labels, &assignment, folds, spec)?)
        } else {
            log::debug!("skipping {spec}: training folds have only {smallest_train} rows");
            None
        };
        cells.push(CellResult { spec: *spec, score });
    }
    let means: Vec<Option<f64>> = cells.iter().map(|c| c.score.as_ref().map(|s| s.mean)).collect();
    let best_index = select_best(&means)
        .ok_or_else(|| Error::InvalidInput(format!("no grid cell fits training folds of {smallest_train} rows")))?;
    let best = cells[best_index].spec;
    let cv = cells[best_index].score.clone().expect("selected cell was scored");
    let model = best.fit(features, labels)?;
    Ok(GridResult { best_index, best, cv, cells, model })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        assert_eq!(default_knn_grid().len(), 6);
        let t = default_tree_grid();
        assert_eq!(t.len(), 24);
        assert_eq!(t[0], ModelSpec::Tree(TreeParams { max_depth: Some(2), min_samples_leaf: 1 }));
        assert_eq!(t[23], ModelSpec::Tree(TreeParams { max_depth: None, min_samples_leaf: 5 }));
    }

    #[test]
    fn selection_rule_on_injected_scores() {
        assert_eq!(select_best(&[Some(0.5), Some(0.9), Some(0.7)]), Some(1));
        assert_eq!(select_best(&[Some(0.8), Some(0.8)]), Some(0));
        assert_eq!(select_best(&[None, Some(0.1), Some(0.3), Some(0.3)]), Some(2));
        assert_eq!(select_best(&[None, None]), None);
        assert_eq!(select_best(&[]), None);
    }

    #[test]
    fn singleton_grid_wins() {
        let x: Vec<Vec<f64>> = (0..12).map(|i| vec![(i % 4) as f64]).collect();
        let y: Vec<usize> = (0..12).map(|i| i % 2).collect();
        let spec = ModelSpec::Knn { k: 3, tie_rule: TieRule::default() };
        let r = grid_search(&x, &y, &[spec], 3, 0).unwrap();
        assert_eq!((r.best_index, r.best), (0, spec));
        assert_eq!(r.model.spec(), spec);
    }

    #[test]
    fn infeasible_cells_are_skipped() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y: Vec<usize> = (0..10).map(|i| usize::from(i >= 5)).collect();
        // Training folds hold 8 rows, so k = 9 and 11 cannot be fitted.
        let r = grid_search(&x, &y, &default_knn_grid(), 5, 1).unwrap();
        assert!(r.cells[4].score.is_none() && r.cells[5].score.is_none());
        assert!(r.cells[3].score.is_some());
        let too_big = [ModelSpec::Knn { k: 50, tie_rule: TieRule::default() }];
        assert!(grid_search(&x, &y, &too_big, 5, 1).is_err());
        assert!(grid_search(&x, &y, &[], 5, 1).is_err());
    }
}
