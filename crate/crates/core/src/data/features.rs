use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::schema::{Dataset, GraspRecord, Outcome, TernaryLabel};
use crate::error::{Error, Result};
use crate::metrics::Metric;

/// Which label a learner is trained on.
///
/// `Homogeneous` keeps only Robust and Futile grasps (Fragile ones are
/// dropped by [`LabelScheme::restrict`]), separating grasps that always
/// succeed from those that always fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelScheme {
    Binary,
    Ternary,
    Homogeneous,
}

impl LabelScheme {
    pub const ALL: [LabelScheme; 3] = [LabelScheme::Binary, LabelScheme::Ternary, LabelScheme::Homogeneous];

    pub fn name(self) -> &'static str {
        match self {
            LabelScheme::Binary => "binary",
            LabelScheme::Ternary => "ternary",
            LabelScheme::Homogeneous => "homogeneous",
        }
    }

    /// Class names indexed by class code.
    pub fn classes(self) -> &'static [&'static str] {
        match self {
            LabelScheme::Binary => &["unstable", "stable"],
            LabelScheme::Ternary => &["robust", "fragile", "futile"],
            LabelScheme::Homogeneous => &["robust", "futile"],
        }
    }

    pub fn n_classes(self) -> usize {
        self.classes().len()
    }

    pub fn encoding(self) -> LabelEncoding {
        LabelEncoding { scheme: self, classes: self.classes().iter().map(|s| s.to_string()).collect() }
    }

    /// Class code of a labeled record. `Ok(None)` means the record is outside
    /// this scheme (a Fragile grasp under `Homogeneous`).
    pub fn code(self, record: &GraspRecord) -> Result<Option<usize>> {
        let missing = |what: &str| {
            Error::InvalidInput(format!("record `{}` has no {what} label; label the dataset first", record.grasp_id))
        };
        match self {
            LabelScheme::Binary => match record.binary_label.ok_or_else(|| missing("binary"))? {
                Outcome::Unstable => Ok(Some(0)),
                Outcome::Stable => Ok(Some(1)),
            },
            LabelScheme::Ternary => match record.ternary_label.ok_or_else(|| missing("ternary"))? {
                TernaryLabel::Robust => Ok(Some(0)),
                TernaryLabel::Fragile => Ok(Some(1)),
                TernaryLabel::Futile => Ok(Some(2)),
            },
            LabelScheme::Homogeneous => match record.ternary_label.ok_or_else(|| missing("ternary"))? {
                TernaryLabel::Robust => Ok(Some(0)),
                TernaryLabel::Fragile => Ok(None),
                TernaryLabel::Futile => Ok(Some(1)),
            },
        }
    }

    /// Drops records this scheme does not cover, keeping order.
    pub fn restrict(self, ds: &Dataset) -> Result<Dataset> {
        let mut kept = Vec::with_capacity(ds.len());
        for r in &ds.records {
            if self.code(r)?.is_some() {
                kept.push(r.clone());
            }
        }
        Ok(ds.with_records(kept))
    }
}

impl fmt::Display for LabelScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LabelScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LabelScheme::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown label scheme `{s}` (binary|ternary|homogeneous)")))
    }
}

/// Label scheme plus class names, stored alongside trained models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEncoding {
    pub scheme: LabelScheme,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    pub metrics: Vec<Metric>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub grasp_ids: Vec<String>,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// One row per record, one column per selected metric, in the given order.
///
/// Every record must carry a label covered by `scheme`; use
/// [`LabelScheme::restrict`] first when that is not guaranteed.
pub fn feature_matrix(ds: &Dataset, metrics: &[Metric], scheme: LabelScheme) -> Result<FeatureMatrix> {
    if metrics.is_empty() {
        return Err(Error::InvalidInput("no metrics selected".into()));
    }
    let mut out = FeatureMatrix {
        metrics: metrics.to_vec(),
        features: Vec::with_capacity(ds.len()),
        labels: Vec::with_capacity(ds.len()),
        grasp_ids: Vec::with_capacity(ds.len()),
    };
    for r in &ds.records {
        let row = metrics
            .iter()
            .map(|&m| {
                r.quality.as_ref().and_then(|q| q.get(&m)).copied().ok_or_else(|| Error::MissingFeature {
                    grasp_id: r.grasp_id.clone(),
                    metric: m.name().to_string(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let label = scheme.code(r)?.ok_or_else(|| {
            Error::InvalidInput(format!("record `{}` is not covered by the {scheme} scheme", r.grasp_id))
        })?;
        out.features.push(row);
        out.labels.push(label);
        out.grasp_ids.push(r.grasp_id.clone());
    }
    Ok(out)
}
