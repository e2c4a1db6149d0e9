use crate::error::{Error, Result};
use crate::geom::vec3::{self, Point3};
use crate::geom::{tangent_basis, Matrix};
use crate::grasp::{GraspConfig, GraspInstance};
use crate::scalar::Scalar;

/// Rotation from a contact frame to the object frame. Column 2 is the
/// inward normal; columns 0 and 1 complete it deterministically from the
/// global axis least aligned with the normal.
pub fn contact_frame<T: Scalar>(normal: Point3<T>) -> Result<[[T; 3]; 3]> {
    let z = vec3::normalize(normal)
        .ok_or_else(|| Error::InvalidInput("contact normal has zero length".into()))?;
    let (x, y) = tangent_basis(z);
    Ok([[x[0], y[0], z[0]], [x[1], y[1], z[1]], [x[2], y[2], z[2]]])
}

/// Grasp map `G` (6 x 3n) under point contact with friction, torques taken
/// about the center of mass and divided by the configured torque length.
///
/// Block `i` is `[R_i ; S(c_i - com) R_i / rho]`.
pub fn grasp_map<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<Matrix<T>> {
    let rho = cfg.torque_length(&g.object)?;
    let inv_rho = T::one() / rho;
    let com = g.object.center_of_mass;
    let mut out = Matrix::zeros(6, 3 * g.contacts.len());
    for (i, c) in g.contacts.iter().enumerate() {
        let r = contact_frame(c.normal)?;
        let s = vec3::skew(vec3::sub(c.position, com));
        for row in 0..3 {
            for col in 0..3 {
                out[(row, 3 * i + col)] = r[row][col];
                let torque: T = (0..3).map(|k| s[row][k] * r[k][col]).sum();
                out[(3 + row, 3 * i + col)] = torque * inv_rho;
            }
        }
    }
    Ok(out)
}

/// `G_J = G * J`, the map from joint space to object wrenches.
pub fn grasp_jacobian_product<T: Scalar>(g: &GraspInstance<T>, cfg: &GraspConfig<T>) -> Result<Matrix<T>> {
    let j = g.jacobian.as_ref().ok_or(Error::MissingJacobian)?;
    let gmap = grasp_map(g, cfg)?;
    if j.rows() != gmap.cols() {
        return Err(Error::InvalidInput(format!(
            "Jacobian has {} rows, grasp map has {} columns",
            j.rows(),
            gmap.cols()
        )));
    }
    gmap.matmul(j)
}
