//! Grasp quality metrics and the feature vector assembled from them.

mod formulas;
mod normalize;
mod stability;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grasp::{GraspConfig, GraspInstance};
use crate::scalar::Scalar;

pub use formulas::*;
pub use normalize::{normalize, normalize_q_a1, Thresholds};
pub use stability::{perturbation_stability, MetricStats};

/// The seven metrics, in canonical feature order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "q_a1")]
    QA1,
    #[serde(rename = "q_b1")]
    QB1,
    #[serde(rename = "q_b2")]
    QB2,
    #[serde(rename = "q_b3")]
    QB3,
    #[serde(rename = "q_c2")]
    QC2,
    #[serde(rename = "q_d1")]
    QD1,
    #[serde(rename = "q_d2")]
    QD2,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::QA1,
        Metric::QB1,
        Metric::QB2,
        Metric::QB3,
        Metric::QC2,
        Metric::QD1,
        Metric::QD2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::QA1 => "q_a1",
            Metric::QB1 => "q_b1",
            Metric::QB2 => "q_b2",
            Metric::QB3 => "q_b3",
            Metric::QC2 => "q_c2",
            Metric::QD1 => "q_d1",
            Metric::QD2 => "q_d2",
        }
    }

    /// Subscripted symbol for LaTeX tables, e.g. `$Q_{A1}$`.
    pub fn latex(self) -> String {
        format!("$Q_{{{}}}$", self.name()[2..].to_uppercase())
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown metric `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MetricFlags {
    pub clamped: bool,
    pub degenerate: bool,
    /// The value is the raw formula output: no bound was available.
    pub unnormalized: bool,
}

/// How the metrics in a [`QualityVector`] were computed.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityMetadata<T> {
    pub contact_model: &'static str,
    pub torque_origin: &'static str,
    pub torque_length: T,
    pub cone_edges: usize,
    pub wrench_dim: usize,
    pub theta_max_rule: &'static str,
    pub thresholds: Vec<(Metric, T, T)>,
}

pub const CONTACT_MODEL: &str = "point-contact-with-friction";
pub const TORQUE_ORIGIN: &str = "center-of-mass";
pub const THETA_MAX_RULE: &str = "(n-2)*180deg unless overridden per object";

/// The feature vector of one grasp.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityVector<T> {
    values: [Option<T>; 7],
    flags: [MetricFlags; 7],
    pub metadata: QualityMetadata<T>,
}

impl<T: Scalar> QualityVector<T> {
    pub fn get(&self, metric: Metric) -> Option<T> {
        self.values[metric.index()]
    }

    pub fn flags(&self, metric: Metric) -> MetricFlags {
        self.flags[metric.index()]
    }

    pub fn values(&self) -> &[Option<T>; 7] {
        &self.values
    }

    /// True when every present component is normalized to [0, 1].
    pub fn normalized(&self) -> bool {
        self.flags.iter().all(|f| !f.unnormalized)
    }

    pub fn q_a1(&self) -> Option<T> {
        self.get(Metric::QA1)
    }
    pub fn q_b1(&self) -> Option<T> {
        self.get(Metric::QB1)
    }
    pub fn q_b2(&self) -> Option<T> {
        self.get(Metric::QB2)
    }
    pub fn q_b3(&self) -> Option<T> {
        self.get(Metric::QB3)
    }
    pub fn q_c2(&self) -> Option<T> {
        self.get(Metric::QC2)
    }
    pub fn q_d1(&self) -> Option<T> {
        self.get(Metric::QD1)
    }
    pub fn q_d2(&self) -> Option<T> {
        self.get(Metric::QD2)
    }
}

/// Running count of clamping events per metric.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClampCounts {
    counts: [usize; 7],
}

impl ClampCounts {
    pub fn record<T: Scalar>(&mut self, q: &QualityVector<T>) {
        for m in Metric::ALL {
            if q.flags(m).clamped {
                self.counts[m.index()] += 1;
            }
        }
    }

    pub fn get(&self, metric: Metric) -> usize {
        self.counts[metric.index()]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Computes all seven metrics in canonical order.
///
/// `q_a1` is normalized with `thresholds` when it has bounds for it; `q_c2`
/// uses the object's `volume_max` if present, otherwise `thresholds`.
/// Without a bound the raw value is kept and flagged unnormalized. A grasp
/// without a hand Jacobian has no `q_d2`.
pub fn quality_vector<T: Scalar>(
    g: &GraspInstance<T>,
    cfg: &GraspConfig<T>,
    thresholds: &Thresholds<T>,
) -> Result<QualityVector<T>> {
    let mut values = [None; 7];
    let mut flags = [MetricFlags::default(); 7];
    let mut put = |m: Metric, v: MetricValue<T>, unnormalized: bool| {
        values[m.index()] = Some(v.value);
        flags[m.index()] = MetricFlags { clamped: v.clamped, degenerate: v.degenerate, unnormalized };
    };

    let a1 = eval_q_a1(g, cfg).map_err(|e| e.in_metric("q_a1"))?;
    match thresholds.apply(Metric::QA1, a1.value) {
        Some(n) => {
            let raw = a1.value;
            let value = n.map_err(|e| e.in_metric("q_a1"))?;
            let (lo, hi) = thresholds.get(Metric::QA1).unwrap();
            put(Metric::QA1, MetricValue { value, clamped: raw < lo || raw > hi, ..a1 }, false);
        }
        None => put(Metric::QA1, a1, true),
    }

    put(Metric::QB1, eval_q_b1(g).map_err(|e| e.in_metric("q_b1"))?, false);
    put(Metric::QB2, eval_q_b2(g).map_err(|e| e.in_metric("q_b2"))?, false);
    put(Metric::QB3, eval_q_b3(g).map_err(|e| e.in_metric("q_b3"))?, false);

    if g.object.norm.volume_max.is_some() {
        put(Metric::QC2, eval_q_c2(g, cfg).map_err(|e| e.in_metric("q_c2"))?, false);
    } else {
        let vol = eval_wrench_volume(g, cfg).map_err(|e| e.in_metric("q_c2"))?;
        match thresholds.apply(Metric::QC2, vol.value) {
            Some(n) => {
                let value = n.map_err(|e| e.in_metric("q_c2"))?;
                let (lo, hi) = thresholds.get(Metric::QC2).unwrap();
                let clamped = vol.value < lo || vol.value > hi;
                put(Metric::QC2, MetricValue { value, clamped, ..vol }, false);
            }
            None => put(Metric::QC2, vol, true),
        }
    }

    put(Metric::QD1, eval_q_d1(&g.posture).map_err(|e| e.in_metric("q_d1"))?, false);
    match eval_q_d2(g, cfg) {
        Ok(v) => put(Metric::QD2, v, false),
        Err(Error::MissingJacobian) => {}
        Err(e) => return Err(e.in_metric("q_d2")),
    }

    let metadata = QualityMetadata {
        contact_model: CONTACT_MODEL,
        torque_origin: TORQUE_ORIGIN,
        torque_length: cfg.torque_length(&g.object)?,
        cone_edges: cfg.cone_edges,
        wrench_dim: cfg.wrench_space.dim(),
        theta_max_rule: THETA_MAX_RULE,
        thresholds: thresholds.iter().collect(),
    };
    Ok(QualityVector { values, flags, metadata })
}
