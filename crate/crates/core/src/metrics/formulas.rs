//! The seven independent grasp quality measures.

use crate::error::{Error, Result};
use crate::geom::{
    convex_hull_volume, polygon_area, polygon_centroid, polygon_internal_angles,
    smallest_singular_value_padded, svd_singular_values, vec3,
};
use crate::grasp::{contact_polygon, grasp_jacobian_product, grasp_map, wrench_set, GraspConfig, GraspInstance, HandPosture};
use crate::metrics::Metric;
use crate::scalar::Scalar;

/// A metric value together with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricValue<T> {
    pub value: T,
    /// The formula left [0, 1] and was clamped.
    pub clamped: bool,
    /// The grasp is degenerate for this metric and the value is the
    /// documented fallback (usually 0).
    pub degenerate: bool,
}

impl<T: Scalar> MetricValue<T> {
    fn exact(value: T) -> Self {
        Self { value, clamped: false, degenerate: false }
    }

    fn degenerate(value: T) -> Self {
        Self { value, clamped: false, degenerate: true }
    }

    /// Clamps to [0, 1], logging when the raw value was outside.
    pub(crate) fn unit(metric: Metric, raw: T) -> Self {
        let value = raw.max(T::zero()).min(T::one());
        let clamped = value != raw;
        if clamped {
            log::warn!("{}: raw value {raw} clamped to {value}", metric.name());
        }
        Self { value, clamped, degenerate: false }
    }
}

/// Smallest singular value of the grasp map, counted over all six wrench
/// directions (grasps with fewer than two contacts score 0).
pub fn eval_q_a1<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<MetricValue<T>> {
    let gmap = grasp_map(g, cfg)?;
    let value = smallest_singular_value_padded(&gmap)?;
    Ok(MetricValue { value, clamped: false, degenerate: gmap.cols() < gmap.rows() })
}

pub fn q_a1<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<T> {
    eval_q_a1(g, cfg).map(|m| m.value)
}

/// `1 - |centroid - com| / distance_max`.
pub fn eval_q_b1<T: Scalar>(g: &GraspInstance<T>) -> Result<MetricValue<T>> {
    let distance_max = g.object.distance_max()?;
    let poly = contact_polygon(g)?;
    let centroid = polygon_centroid(&poly)?;
    let raw = T::one() - vec3::distance(centroid, g.object.center_of_mass) / distance_max;
    let mut m = MetricValue::unit(Metric::QB1, raw);
    m.degenerate = poly.is_degenerate();
    Ok(m)
}

pub fn q_b1<T: Scalar>(g: &GraspInstance<T>) -> Result<T> {
    eval_q_b1(g).map(|m| m.value)
}

/// Contact polygon area over `area_max`; 0 for fewer than three contacts.
pub fn eval_q_b2<T: Scalar>(g: &GraspInstance<T>) -> Result<MetricValue<T>> {
    let area_max = g.object.area_max()?;
    let poly = contact_polygon(g)?;
    if poly.is_degenerate() {
        return Ok(MetricValue::degenerate(T::zero()));
    }
    Ok(MetricValue::unit(Metric::QB2, polygon_area(&poly)? / area_max))
}

pub fn q_b2<T: Scalar>(g: &GraspInstance<T>) -> Result<T> {
    eval_q_b2(g).map(|m| m.value)
}

/// Bound on the summed angle deviation used when the object does not
/// override it: `(n - 2) * 180` degrees.
pub fn default_theta_max<T: Scalar>(vertices: usize) -> T {
    T::of_usize(vertices.saturating_sub(2)) * T::of(180.0)
}

/// `1 - sum |theta_i - mean| / theta_max` over the contact polygon's
/// interior angles. Degenerate polygons score 0.
pub fn eval_q_b3<T: Scalar>(g: &GraspInstance<T>) -> Result<MetricValue<T>> {
    let poly = contact_polygon(g)?;
    let n = poly.len();
    if n < 3 || poly.is_degenerate() {
        return Ok(MetricValue::degenerate(T::zero()));
    }
    let angles = match polygon_internal_angles(&poly) {
        Ok(a) => a,
        Err(Error::DegenerateInput(_)) => return Ok(MetricValue::degenerate(T::zero())),
        Err(e) => return Err(e),
    };
    let mean = default_theta_max::<T>(n) / T::of_usize(n);
    let theta_max = g.object.norm.theta_max.unwrap_or_else(|| default_theta_max(n));
    let deviation: T = angles.iter().map(|&a| (a - mean).abs()).sum();
    Ok(MetricValue::unit(Metric::QB3, T::one() - deviation / theta_max))
}

pub fn q_b3<T: Scalar>(g: &GraspInstance<T>) -> Result<T> {
    eval_q_b3(g).map(|m| m.value)
}

/// Volume of the grasp wrench space hull, unnormalized. Degenerate hulls
/// (too few or affinely dependent wrenches) have volume 0.
pub fn eval_wrench_volume<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<MetricValue<T>> {
    let cloud = wrench_set(g, cfg)?;
    match convex_hull_volume(&cloud) {
        Ok(v) if v > T::zero() => Ok(MetricValue::exact(v)),
        Ok(_) | Err(Error::DegenerateInput(_)) => Ok(MetricValue::degenerate(T::zero())),
        Err(e) => Err(e),
    }
}

/// Wrench hull volume over the object's `volume_max`.
pub fn eval_q_c2<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<MetricValue<T>> {
    let volume_max = g.object.volume_max()?;
    let volume = eval_wrench_volume(g, cfg)?;
    if volume.degenerate {
        return Ok(volume);
    }
    Ok(MetricValue::unit(Metric::QC2, volume.value / volume_max))
}

pub fn q_c2<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<T> {
    eval_q_c2(g, cfg).map(|m| m.value)
}

/// `1 - mean_i ((y_i - a_i) / (a_i - limit_i))^2`, where `limit_i` is the
/// joint limit on the same side of the mid-range value as `y_i`.
pub fn eval_q_d1<T: Scalar>(posture: &HandPosture<T>) -> Result<MetricValue<T>> {
    let mut total = T::zero();
    for j in 0..posture.len() {
        let (y, a) = (posture.values()[j], posture.mid()[j]);
        let limit = if y >= a { posture.max()[j] } else { posture.min()[j] };
        let span = a - limit;
        if span == T::zero() {
            return Err(Error::DegenerateRange { joint: j });
        }
        let r = (y - a) / span;
        total = total + r * r;
    }
    let raw = T::one() - total / T::of_usize(posture.len());
    Ok(MetricValue::unit(Metric::QD1, raw))
}

pub fn q_d1<T: Scalar>(posture: &HandPosture<T>) -> Result<T> {
    eval_q_d1(posture).map(|m| m.value)
}

/// Inverse condition number `sigma_min / sigma_max` of `G J`. An all-zero
/// product scores 0.
pub fn eval_q_d2<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<MetricValue<T>> {
    let gj = grasp_jacobian_product(g, cfg)?;
    let sv = svd_singular_values(&gj)?;
    let (max, min) = (sv[0], *sv.last().unwrap());
    if max == T::zero() {
        return Ok(MetricValue::degenerate(T::zero()));
    }
    Ok(MetricValue::unit(Metric::QD2, min / max))
}

pub fn q_d2<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<T> {
    eval_q_d2(g, cfg).map(|m| m.value)
}
