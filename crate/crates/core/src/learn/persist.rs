use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::eval::EvalReport;
use super::knn::KnnModel;
use super::model::{Model, ModelKind, ModelSpec};
use super::tree::{Node, TreeModel};
use crate::data::LabelEncoding;
use crate::error::{Error, Result};
use crate::metrics::Metric;

pub const MODEL_FILE_VERSION: u32 = 1;

/// A trained model plus everything needed to apply it to new records.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub model: Model<f64>,
    pub feature_order: Vec<Metric>,
    pub label_encoding: LabelEncoding,
    /// Normalization ranges the features were computed with, if any.
    pub thresholds: BTreeMap<Metric, [f64; 2]>,
    pub thresholds_source: Option<String>,
    pub report: Option<EvalReport>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    kind: ModelKind,
    hyperparameters: ModelSpec,
    parameters: serde_json::Value,
    feature_order: Vec<Metric>,
    label_encoding: LabelEncoding,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    thresholds: BTreeMap<Metric, [f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    thresholds_source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    report: Option<EvalReport>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnnParameters {
    n_classes: usize,
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeParameters {
    n_features: usize,
    n_classes: usize,
    nodes: Vec<Node<f64>>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

impl ModelFile {
    pub fn to_json(&self) -> Result<String> {
        let parameters = match &self.model {
            Model::Knn(m) => serde_json::to_value(KnnParameters {
                n_classes: m.n_classes,
                features: m.features.clone(),
                labels: m.labels.clone(),
            })?,
            Model::Tree(m) => serde_json::to_value(TreeParameters {
                n_features: m.n_features,
                n_classes: m.n_classes,
                nodes: m.nodes.clone(),
            })?,
        };
        let doc = Document {
            version: MODEL_FILE_VERSION,
            kind: self.model.kind(),
            hyperparameters: self.model.spec(),
            parameters,
            feature_order: self.feature_order.clone(),
            label_encoding: self.label_encoding.clone(),
            thresholds: self.thresholds.clone(),
            thresholds_source: self.thresholds_source.clone(),
            report: self.report.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    /// Parses and validates a model document. The version is checked before
    /// anything else, so files from other format versions are rejected with
    /// `UnsupportedModelVersion` rather than a field error.
    pub fn from_json(text: &str) -> Result<Self> {
        let parse = |e: serde_json::Error| Error::Parse { line: e.line(), message: e.to_string() };
        let value: serde_json::Value = serde_json::from_str(text).map_err(parse)?;
        let found = value.get("version").and_then(serde_json::Value::as_u64).unwrap_or(0);
        if found != u64::from(MODEL_FILE_VERSION) {
            return Err(Error::UnsupportedModelVersion {
                found: u32::try_from(found).unwrap_or(u32::MAX),
                expected: MODEL_FILE_VERSION,
            });
        }
        let doc: Document = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
        if doc.hyperparameters.kind() != doc.kind {
            return Err(schema("hyperparameters do not match model kind"));
        }
        let model = match doc.hyperparameters {
            ModelSpec::Knn { k, tie_rule } => {
                let p: KnnParameters = serde_json::from_value(doc.parameters).map_err(|e| schema(e.to_string()))?;
                Model::Knn(KnnModel { k, tie_rule, n_classes: p.n_classes, features: p.features, labels: p.labels })
            }
            ModelSpec::Tree(params) => {
                let p: TreeParameters = serde_json::from_value(doc.parameters).map_err(|e| schema(e.to_string()))?;
                Model::Tree(TreeModel { params, n_features: p.n_features, n_classes: p.n_classes, nodes: p.nodes })
            }
        };
        let file = ModelFile {
            model,
            feature_order: doc.feature_order,
            label_encoding: doc.label_encoding,
            thresholds: doc.thresholds,
            thresholds_source: doc.thresholds_source,
            report: doc.report,
        };
        file.validate()?;
        Ok(file)
    }

    /// Structural checks that make a loaded model safe to evaluate.
    pub fn validate(&self) -> Result<()> {
        let d = self.feature_order.len();
        if d == 0 {
            return Err(schema("empty feature_order"));
        }
        if self.feature_order.iter().collect::<BTreeSet<_>>().len() != d {
            return Err(schema("feature_order has duplicates"));
        }
        let expected: Vec<String> = self.label_encoding.scheme.classes().iter().map(|s| s.to_string()).collect();
        if self.label_encoding.classes != expected {
            return Err(schema(format!(
                "label classes {:?} do not match the {} scheme",
                self.label_encoding.classes, self.label_encoding.scheme
            )));
        }
        let classes = expected.len();
        match &self.model {
            Model::Knn(m) => {
                if m.features.is_empty() || m.k == 0 || m.k > m.features.len() {
                    return Err(schema("k-NN model needs 1 <= k <= training rows"));
                }
                if m.features.len() != m.labels.len() {
                    return Err(schema("k-NN features and labels differ in length"));
                }
                if m.features.iter().any(|r| r.len() != d || r.iter().any(|v| !v.is_finite())) {
                    return Err(schema("k-NN training row has the wrong width or a non-finite value"));
                }
                if m.n_classes > classes || m.labels.iter().any(|&y| y >= m.n_classes) {
                    return Err(schema("k-NN label out of range"));
                }
            }
            Model::Tree(m) => {
                if m.n_features != d {
                    return Err(schema("tree feature count differs from feature_order"));
                }
                if m.nodes.is_empty() || m.n_classes > classes {
                    return Err(schema("tree has no nodes or too many classes"));
                }
                for (id, node) in m.nodes.iter().enumerate() {
                    match node {
                        Node::Split { feature, threshold, left, right } => {
                            let child_ok = |c: usize| c > id && c < m.nodes.len();
                            if *feature >= d || !threshold.is_finite() || !child_ok(*left) || !child_ok(*right) {
                                return Err(schema(format!("malformed split node {id}")));
                            }
                        }
                        Node::Leaf { class, counts } => {
                            if *class >= m.n_classes || counts.len() != m.n_classes || counts.iter().sum::<usize>() == 0 {
                                return Err(schema(format!("malformed leaf node {id}")));
                            }
                        }
                    }
                }
                if m.params.max_depth.is_some_and(|max| m.depth() > max) {
                    return Err(schema("tree is deeper than its max_depth"));
                }
            }
        }
        Ok(())
    }

    /// Predicts from a row ordered like `feature_order`.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        self.model.predict(x)
    }
}

pub fn save_model(file: &ModelFile, path: impl AsRef<Path>) -> Result<()> {
    file.validate()?;
    fs::write(path, file.to_json()?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelFile> {
    ModelFile::from_json(&fs::read_to_string(path)?)
}
