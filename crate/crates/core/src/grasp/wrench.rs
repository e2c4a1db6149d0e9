use crate::error::Result;
use crate::geom::vec3::Point3;
use crate::geom::PointCloudD;
use crate::grasp::{grasp_map, GraspConfig, GraspInstance, WrenchSpace};
use crate::scalar::Scalar;

/// Unit generators of the discretized friction cone, in the contact frame
/// (normal along +z). Frictionless contacts have the single generator
/// `(0, 0, 1)`.
pub fn friction_cone_edges<T: Scalar>(mu: T, edges: usize) -> Vec<Point3<T>> {
    if mu == T::zero() {
        return vec![[T::zero(), T::zero(), T::one()]];
    }
    let inv = T::one() / (T::one() + mu * mu).sqrt();
    let tau = T::of(std::f64::consts::TAU);
    (0..edges)
        .map(|j| {
            let phi = tau * T::of_usize(j) / T::of_usize(edges);
            [mu * phi.cos() * inv, mu * phi.sin() * inv, inv]
        })
        .collect()
}

/// Wrenches produced by every friction-cone generator of every contact,
/// contact-major. The dimension follows `cfg.wrench_space`; fewer than three
/// cone edges are raised to three.
pub fn wrench_set<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<PointCloudD<T>> {
    let gmap = grasp_map(g, cfg)?;
    let dim = cfg.wrench_space.dim();
    let edges = cfg.cone_edges.max(3);
    let mut wrenches = Vec::new();
    for (i, c) in g.contacts.iter().enumerate() {
        for f in friction_cone_edges(c.friction_mu, edges) {
            let w: Vec<T> = (0..6)
                .map(|row| (0..3).map(|k| gmap[(row, 3 * i + k)] * f[k]).sum())
                .collect();
            wrenches.push(match cfg.wrench_space {
                WrenchSpace::Full => w,
                WrenchSpace::Force => w[..3].to_vec(),
            });
        }
    }
    PointCloudD::new(dim, wrenches)
}
