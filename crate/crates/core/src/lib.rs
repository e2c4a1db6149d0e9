//! Grasp quality metrics, execution labeling and grasp-success classifiers.
//!
//! The numeric core ([`geom`], [`grasp`], [`metrics`], [`learn`]) is generic
//! over [`Scalar`] (`f32` or `f64`). Dataset handling in [`data`] and model
//! persistence work in `f64`; the aliases below name the concrete
//! instantiations used throughout the command-line tool.

// `!(a < b)` rejects NaN on purpose; index loops mirror the matrix math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod data;
pub mod error;
pub mod geom;
pub mod grasp;
pub mod learn;
pub mod metrics;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Matrix64 = geom::Matrix<f64>;
pub type Matrix32 = geom::Matrix<f32>;
pub type Polygon64 = geom::Polygon3D<f64>;
pub type PointCloud64 = geom::PointCloudD<f64>;
pub type GraspInstance64 = grasp::GraspInstance<f64>;
pub type QualityVector64 = metrics::QualityVector<f64>;
pub type KnnModel64 = learn::KnnModel<f64>;
pub type TreeModel64 = learn::TreeModel<f64>;
pub type Model64 = learn::Model<f64>;
