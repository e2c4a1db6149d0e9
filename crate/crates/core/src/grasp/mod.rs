//! Grasp descriptions and the matrices and point sets derived from them.

mod map;
mod polygon;
mod wrench;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::vec3::{self, Point3};
use crate::geom::Matrix;
use crate::scalar::Scalar;

pub use map::{contact_frame, grasp_jacobian_product, grasp_map};
pub use polygon::contact_polygon;
pub use wrench::{friction_cone_edges, wrench_set};

/// Point contact with friction, expressed in the object frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Contact<T> {
    pub position: Point3<T>,
    /// Inward unit normal (pointing into the object).
    pub normal: Point3<T>,
    pub friction_mu: T,
}

impl<T: Scalar> Contact<T> {
    /// Normalizes `normal`; rejects zero normals and negative friction.
    pub fn new(position: Point3<T>, normal: Point3<T>, friction_mu: T) -> Result<Self> {
        if !vec3::is_finite(position) {
            return Err(Error::InvalidInput("non-finite contact position".into()));
        }
        let normal = vec3::normalize(normal)
            .ok_or_else(|| Error::InvalidInput("contact normal has zero length".into()))?;
        if !(friction_mu >= T::zero()) || !friction_mu.is_finite() {
            return Err(Error::InvalidInput(format!(
                "friction coefficient must be finite and >= 0, got {friction_mu}"
            )));
        }
        Ok(Self { position, normal, friction_mu })
    }
}

/// Per-object normalization constants. Absent values are either derived
/// from the object's surface samples or supplied by a thresholds file.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NormConstants<T> {
    pub distance_max: Option<T>,
    pub area_max: Option<T>,
    pub volume_max: Option<T>,
    /// Override for the polygon-shape bound, in degrees.
    pub theta_max: Option<T>,
}

impl<T: Scalar> NormConstants<T> {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("distance_max", self.distance_max),
            ("area_max", self.area_max),
            ("volume_max", self.volume_max),
            ("theta_max", self.theta_max),
        ];
        for (name, value) in named {
            if let Some(v) = value {
                if !(v > T::zero()) || !v.is_finite() {
                    return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectModel<T> {
    pub name: String,
    pub center_of_mass: Point3<T>,
    pub surface_points: Vec<Point3<T>>,
    pub mass: Option<T>,
    pub norm: NormConstants<T>,
}

impl<T: Scalar> ObjectModel<T> {
    pub fn new(name: impl Into<String>, center_of_mass: Point3<T>, norm: NormConstants<T>) -> Result<Self> {
        norm.validate()?;
        if !vec3::is_finite(center_of_mass) {
            return Err(Error::InvalidInput("non-finite center of mass".into()));
        }
        Ok(Self {
            name: name.into(),
            center_of_mass,
            surface_points: Vec::new(),
            mass: None,
            norm,
        })
    }

    pub fn with_surface(mut self, points: Vec<Point3<T>>) -> Self {
        self.surface_points = points;
        self
    }

    /// Explicit `distance_max`, or the largest surface-point distance from
    /// the center of mass.
    pub fn distance_max(&self) -> Result<T> {
        if let Some(d) = self.norm.distance_max {
            return Ok(d);
        }
        let derived = self
            .surface_points
            .iter()
            .map(|&p| vec3::distance(p, self.center_of_mass))
            .fold(T::zero(), T::max);
        if derived > T::zero() {
            Ok(derived)
        } else {
            Err(Error::MissingNormalization("distance_max".into()))
        }
    }

    /// Explicit `area_max`, or the area of the great disk of radius
    /// `distance_max`: any planar polygon with vertices within that radius of
    /// the center of mass fits inside it.
    pub fn area_max(&self) -> Result<T> {
        if let Some(a) = self.norm.area_max {
            return Ok(a);
        }
        if self.surface_points.is_empty() {
            return Err(Error::MissingNormalization("area_max".into()));
        }
        let r = self.distance_max()?;
        Ok(T::of(std::f64::consts::PI) * r * r)
    }

    pub fn volume_max(&self) -> Result<T> {
        self.norm
            .volume_max
            .ok_or_else(|| Error::MissingNormalization("volume_max".into()))
    }
}

/// Joint configuration with limits.
#[derive(Clone, Debug, PartialEq)]
pub struct HandPosture<T> {
    values: Vec<T>,
    min: Vec<T>,
    max: Vec<T>,
    mid: Vec<T>,
}

impl<T: Scalar> HandPosture<T> {
    /// `mid` defaults to the center of each joint's range.
    pub fn new(values: Vec<T>, min: Vec<T>, max: Vec<T>, mid: Option<Vec<T>>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidInput("posture needs at least one joint".into()));
        }
        if min.len() != n || max.len() != n || mid.as_ref().is_some_and(|m| m.len() != n) {
            return Err(Error::InvalidInput("posture joint lists differ in length".into()));
        }
        let mid = mid.unwrap_or_else(|| {
            min.iter()
                .zip(&max)
                .map(|(&lo, &hi)| (lo + hi) / T::of(2.0))
                .collect()
        });
        for j in 0..n {
            if [values[j], min[j], max[j], mid[j]].iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("joint {j} has non-finite values")));
            }
            if !(min[j] < max[j]) {
                return Err(Error::InvalidInput(format!(
                    "joint {j}: lower limit {} not below upper limit {}",
                    min[j], max[j]
                )));
            }
            if !(min[j] < mid[j] && mid[j] < max[j]) {
                return Err(Error::InvalidInput(format!(
                    "joint {j}: mid-range value {} outside ({}, {})",
                    mid[j], min[j], max[j]
                )));
            }
        }
        Ok(Self { values, min, max, mid })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn min(&self) -> &[T] {
        &self.min
    }

    pub fn max(&self) -> &[T] {
        &self.max
    }

    pub fn mid(&self) -> &[T] {
        &self.mid
    }
}

/// Everything the quality metrics need to know about one grasp.
#[derive(Clone, Debug)]
pub struct GraspInstance<T> {
    pub grasp_id: String,
    pub contacts: Vec<Contact<T>>,
    pub posture: HandPosture<T>,
    /// Hand Jacobian, `3n x n_q`, mapping joint velocities to stacked
    /// contact velocities.
    pub jacobian: Option<Matrix<T>>,
    pub object: Arc<ObjectModel<T>>,
}

impl<T: Scalar> GraspInstance<T> {
    pub fn new(
        grasp_id: impl Into<String>,
        contacts: Vec<Contact<T>>,
        posture: HandPosture<T>,
        jacobian: Option<Matrix<T>>,
        object: Arc<ObjectModel<T>>,
    ) -> Result<Self> {
        if contacts.is_empty() {
            return Err(Error::InvalidInput("grasp needs at least one contact".into()));
        }
        if let Some(j) = &jacobian {
            if j.rows() != 3 * contacts.len() || j.cols() != posture.len() {
                return Err(Error::InvalidInput(format!(
                    "Jacobian is {}x{}, expected {}x{}",
                    j.rows(),
                    j.cols(),
                    3 * contacts.len(),
                    posture.len()
                )));
            }
        }
        Ok(Self {
            grasp_id: grasp_id.into(),
            contacts,
            posture,
            jacobian,
            object,
        })
    }

    pub fn contact_positions(&self) -> Vec<Point3<T>> {
        self.contacts.iter().map(|c| c.position).collect()
    }
}

/// How torques are made commensurate with forces in the grasp map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TorqueScale<T> {
    /// Divide torques by the object's `distance_max`.
    ObjectDistanceMax,
    /// Divide torques by a fixed length.
    Fixed(T),
}

/// Which wrench coordinates span the hull whose volume is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WrenchSpace {
    /// Force and torque, 6D.
    Full,
    /// Force components only, 3D.
    Force,
}

impl WrenchSpace {
    pub fn dim(self) -> usize {
        match self {
            WrenchSpace::Full => 6,
            WrenchSpace::Force => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraspConfig<T> {
    pub cone_edges: usize,
    pub torque_scale: TorqueScale<T>,
    pub wrench_space: WrenchSpace,
}

impl<T: Scalar> Default for GraspConfig<T> {
    fn default() -> Self {
        Self {
            cone_edges: 8,
            torque_scale: TorqueScale::ObjectDistanceMax,
            wrench_space: WrenchSpace::Full,
        }
    }
}

impl<T: Scalar> GraspConfig<T> {
    /// The length torques are divided by for grasps on `object`.
    pub fn torque_length(&self, object: &ObjectModel<T>) -> Result<T> {
        match self.torque_scale {
            TorqueScale::ObjectDistanceMax => object.distance_max(),
            TorqueScale::Fixed(rho) if rho > T::zero() && rho.is_finite() => Ok(rho),
            TorqueScale::Fixed(rho) => Err(Error::InvalidInput(format!(
                "torque scale must be positive, got {rho}"
            ))),
        }
    }
}
