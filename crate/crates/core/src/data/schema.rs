use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Matrix;
use crate::grasp::{Contact, GraspInstance, HandPosture, NormConstants, ObjectModel};
use crate::metrics::Metric;

/// Result of one real or simulated execution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TernaryLabel {
    Robust,
    Fragile,
    Futile,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExecutionContext {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gravity_orientation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExecutionRecord {
    pub outcome: Outcome,
    #[serde(default)]
    pub context: ExecutionContext,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactRecord {
    pub position: [f64; 3],
    pub normal: [f64; 3],
    pub mu: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostureRecord {
    pub y: Vec<f64>,
    pub y_min: Vec<f64>,
    pub y_max: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
}

/// Provenance of computed quality values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QualityMeta {
    pub contact_model: String,
    pub torque_origin: String,
    pub torque_length: f64,
    pub cone_edges: usize,
    pub wrench_dim: usize,
    pub theta_max_rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<Metric>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clamped: Vec<Metric>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unnormalized: Vec<Metric>,
}

/// One line of a grasp record file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspRecord {
    pub grasp_id: String,
    pub cluster_id: String,
    pub robot: String,
    pub object: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contacts: Vec<ContactRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub posture: Option<PostureRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<BTreeMap<Metric, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_meta: Option<QualityMeta>,
    #[serde(default)]
    pub executions: Vec<ExecutionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary_label: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ternary_label: Option<TernaryLabel>,
}

impl GraspRecord {
    pub fn has_geometry(&self) -> bool {
        !self.contacts.is_empty() && self.posture.is_some()
    }

    /// Checks the record-level schema rules that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.grasp_id.is_empty() {
            return Err(Error::Schema("empty grasp_id".into()));
        }
        if !self.has_geometry() && self.quality.is_none() {
            return Err(Error::Schema(format!(
                "record `{}` has neither contacts+posture nor a quality vector",
                self.grasp_id
            )));
        }
        if let Some(q) = &self.quality {
            if let Some((m, v)) = q.iter().find(|(_, v)| !v.is_finite()) {
                return Err(Error::Schema(format!("record `{}`: {m} = {v} is not finite", self.grasp_id)));
            }
        }
        Ok(())
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> + '_ {
        self.executions.iter().map(|e| e.outcome)
    }

    /// Builds the geometric grasp description against `object`.
    pub fn to_grasp_instance(&self, object: Arc<ObjectModel<f64>>) -> Result<GraspInstance<f64>> {
        let posture = self
            .posture
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("record `{}` has no posture", self.grasp_id)))?;
        let posture = HandPosture::new(posture.y.clone(), posture.y_min.clone(), posture.y_max.clone(), posture.a.clone())?;
        let contacts = self
            .contacts
            .iter()
            .map(|c| Contact::new(c.position, c.normal, c.mu))
            .collect::<Result<Vec<_>>>()?;
        let jacobian = self.jacobian.as_deref().map(Matrix::from_rows).transpose()?;
        GraspInstance::new(self.grasp_id.clone(), contacts, posture, jacobian, object)
    }
}

/// Ordered collection of grasp records with a fixed feature order.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub records: Vec<GraspRecord>,
    pub feature_order: [Metric; 7],
    pub provenance: Option<String>,
}

impl Default for Dataset {
    fn default() -> Self {
        Self::new(Vec::new())
    }
}

impl Dataset {
    pub fn new(records: Vec<GraspRecord>) -> Self {
        Self { records, feature_order: Metric::ALL, provenance: None }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Same provenance and feature order, different records.
    pub fn with_records(&self, records: Vec<GraspRecord>) -> Self {
        Self { records, feature_order: self.feature_order, provenance: self.provenance.clone() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
}

/// Object description as stored in an objects file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectRecord {
    pub name: String,
    pub center_of_mass: [f64; 3],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub surface_points: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default)]
    pub norm: NormRecord,
}

impl ObjectRecord {
    pub fn to_model(&self) -> Result<ObjectModel<f64>> {
        let norm = NormConstants {
            distance_max: self.norm.distance_max,
            area_max: self.norm.area_max,
            volume_max: self.norm.volume_max,
            theta_max: self.norm.theta_max,
        };
        let mut model = ObjectModel::new(self.name.clone(), self.center_of_mass, norm)?.with_surface(self.surface_points.clone());
        model.mass = self.mass;
        Ok(model)
    }
}
