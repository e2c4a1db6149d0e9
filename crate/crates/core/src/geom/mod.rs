//! Numerical kernel: small dense linear algebra, planar polygon measures and
//! convex hull volume.

pub(crate) mod eigen;
pub mod hull;
pub mod matrix;
pub mod polygon;
pub mod svd;
pub mod vec3;

pub use eigen::symmetric_eigen;
pub use hull::{convex_hull_volume, PointCloudD};
pub use matrix::Matrix;
pub use polygon::{
    polygon_area, polygon_centroid, polygon_internal_angles, tangent_basis, PlaneFrame, Polygon3D,
    EPS_PLANE,
};
pub use svd::{smallest_singular_value_padded, svd_singular_values};
pub use vec3::Point3;
