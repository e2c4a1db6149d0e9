use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::knn::{knn_fit, KnnModel, TieRule};
use super::tree::{tree_fit, TreeModel, TreeParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Knn,
    Tree,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Knn => "knn",
            ModelKind::Tree => "tree",
        }
    }

    /// Row label used in result tables.
    pub fn title(self) -> &'static str {
        match self {
            ModelKind::Knn => "K-Nearest Neighbors",
            ModelKind::Tree => "Classification Trees",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "knn" => Ok(ModelKind::Knn),
            "tree" => Ok(ModelKind::Tree),
            _ => Err(Error::InvalidInput(format!("unknown model `{s}` (knn|tree)"))),
        }
    }
}

/// Hyperparameters of one learner; a grid is a list of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Knn {
        k: usize,
        #[serde(default)]
        tie_rule: TieRule,
    },
    Tree(TreeParams),
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Knn { .. } => ModelKind::Knn,
            ModelSpec::Tree(_) => ModelKind::Tree,
        }
    }

    /// Whether the spec can be fitted on `n_rows` rows.
    pub fn feasible(&self, n_rows: usize) -> bool {
        match self {
            ModelSpec::Knn { k, .. } => *k >= 1 && *k <= n_rows,
            ModelSpec::Tree(_) => n_rows >= 1,
        }
    }

    pub fn fit<T: Scalar>(&self, features: &[Vec<T>], labels: &[usize]) -> Result<Model<T>> {
        match *self {
            ModelSpec::Knn { k, tie_rule } => knn_fit(features, labels, k, tie_rule).map(Model::Knn),
            ModelSpec::Tree(p) => tree_fit(features, labels, p).map(Model::Tree),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Knn { k, .. } => write!(f, "knn(k={k})"),
            ModelSpec::Tree(p) => match p.max_depth {
                Some(d) => write!(f, "tree(max_depth={d}, min_samples_leaf={})", p.min_samples_leaf),
                None => write!(f, "tree(max_depth=inf, min_samples_leaf={})", p.min_samples_leaf),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model<T> {
    Knn(KnnModel<T>),
    Tree(TreeModel<T>),
}

impl<T: Scalar> Model<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Knn(_) => ModelKind::Knn,
            Model::Tree(_) => ModelKind::Tree,
        }
    }

    pub fn spec(&self) -> ModelSpec {
        match self {
            Model::Knn(m) => ModelSpec::Knn { k: m.k, tie_rule: m.tie_rule },
            Model::Tree(m) => ModelSpec::Tree(m.params),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Model::Knn(m) => m.n_features(),
            Model::Tree(m) => m.n_features,
        }
    }

    pub fn predict(&self, x: &[T]) -> Result<usize> {
        match self {
            Model::Knn(m) => m.predict(x),
            Model::Tree(m) => m.predict(x),
        }
    }

    pub fn predict_many(&self, rows: &[Vec<T>]) -> Result<Vec<usize>> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}
