//! Grasp fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod oracles;

use std::f64::consts::PI;
use std::sync::Arc;

use graspq::geom::Matrix;
use graspq::grasp::{contact_frame, Contact, GraspInstance, HandPosture, NormConstants, ObjectModel};
use rand::Rng;

pub const RADIUS: f64 = 0.05;

/// Sphere of radius [`RADIUS`] centered at `com`, with explicit
/// `distance_max` and `area_max`.
pub fn sphere(com: [f64; 3]) -> Arc<ObjectModel<f64>> {
    let norm = NormConstants {
        distance_max: Some(RADIUS),
        area_max: Some(PI * RADIUS * RADIUS),
        volume_max: None,
        theta_max: None,
    };
    Arc::new(ObjectModel::new("sphere", com, norm).unwrap())
}

pub fn sphere_with(norm: NormConstants<f64>) -> Arc<ObjectModel<f64>> {
    Arc::new(ObjectModel::new("sphere", [0.0; 3], norm).unwrap())
}

/// Contact on the sphere surface in direction `dir`, normal pointing in.
pub fn surface_contact(com: [f64; 3], dir: [f64; 3], mu: f64) -> Contact<f64> {
    let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    let u = [dir[0] / n, dir[1] / n, dir[2] / n];
    let pos = [com[0] + RADIUS * u[0], com[1] + RADIUS * u[1], com[2] + RADIUS * u[2]];
    Contact::new(pos, [-u[0], -u[1], -u[2]], mu).unwrap()
}

pub fn mid_posture(n_q: usize) -> HandPosture<f64> {
    HandPosture::new(vec![0.5; n_q], vec![0.0; n_q], vec![1.0; n_q], None).unwrap()
}

/// One revolute joint: rotation axis and a point on it, object frame.
#[derive(Clone, Copy, Debug)]
pub struct Joint {
    pub axis: [f64; 3],
    pub origin: [f64; 3],
}

/// Hand Jacobian of independent serial fingers, one per contact: column j
/// of finger i holds `axis_j x (p_i - origin_j)` expressed in contact i's
/// frame, in rows `3i..3i+3`.
pub fn serial_chain_jacobian(contacts: &[Contact<f64>], fingers: &[Vec<Joint>]) -> Matrix<f64> {
    let n_q: usize = fingers.iter().map(Vec::len).sum();
    let mut m = vec![vec![0.0; n_q]; 3 * contacts.len()];
    let mut col = 0;
    for (i, (c, joints)) in contacts.iter().zip(fingers).enumerate() {
        let r = contact_frame(c.normal).unwrap();
        for j in joints {
            let lever = [c.position[0] - j.origin[0], c.position[1] - j.origin[1], c.position[2] - j.origin[2]];
            let a = j.axis;
            let v = [
                a[1] * lever[2] - a[2] * lever[1],
                a[2] * lever[0] - a[0] * lever[2],
                a[0] * lever[1] - a[1] * lever[0],
            ];
            // Column k of r is the k-th contact axis, so the contact-frame
            // coordinates are r^T v.
            for k in 0..3 {
                m[3 * i + k][col] = (0..3).map(|row| r[row][k] * v[row]).sum::<f64>();
            }
            col += 1;
        }
    }
    Matrix::from_rows(&m).unwrap()
}

/// Two-joint finger reaching contact `p` from a palm below the object.
pub fn finger_for(p: [f64; 3]) -> Vec<Joint> {
    let base = [p[0] * 1.6, p[1] * 1.6, -0.08];
    let knuckle = [p[0] * 1.3, p[1] * 1.3, -0.02];
    let tangent = [-p[1], p[0], 0.0];
    let t = (tangent[0] * tangent[0] + tangent[1] * tangent[1]).sqrt().max(1e-12);
    let axis = [tangent[0] / t, tangent[1] / t, 0.0];
    vec![Joint { axis, origin: base }, Joint { axis, origin: knuckle }]
}

/// Equilateral triangle of contacts on the sphere's equator around `com`,
/// mid-range joints and a serial-chain Jacobian.
pub fn ideal_grasp(com: [f64; 3]) -> GraspInstance<f64> {
    let contacts: Vec<_> = (0..3)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / 3.0;
            surface_contact(com, [a.cos(), a.sin(), 0.0], 0.5)
        })
        .collect();
    let fingers: Vec<_> = contacts.iter().map(|c| finger_for([c.position[0] - com[0], c.position[1] - com[1], 0.0])).collect();
    let j = serial_chain_jacobian(&contacts, &fingers);
    GraspInstance::new("ideal", contacts, mid_posture(6), Some(j), sphere(com)).unwrap()
}

pub fn single_contact_grasp() -> GraspInstance<f64> {
    let c = surface_contact([0.0; 3], [1.0, 0.0, 0.0], 0.0);
    GraspInstance::new("single", vec![c], mid_posture(1), None, sphere([0.0; 3])).unwrap()
}

/// `n` contacts at random directions on the sphere, random friction and
/// posture, with a serial-chain Jacobian.
pub fn random_grasp(rng: &mut impl Rng, n: usize) -> GraspInstance<f64> {
    let contacts: Vec<_> = (0..n)
        .map(|_| {
            let dir = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-0.5..0.5)];
            surface_contact([0.0; 3], dir, rng.random_range(0.2..1.0))
        })
        .collect();
    let fingers: Vec<_> = contacts.iter().map(|c| finger_for(c.position)).collect();
    let j = serial_chain_jacobian(&contacts, &fingers);
    let n_q = 2 * n;
    let y: Vec<f64> = (0..n_q).map(|_| rng.random_range(0.0..1.0)).collect();
    let posture = HandPosture::new(y, vec![0.0; n_q], vec![1.0; n_q], None).unwrap();
    GraspInstance::new("random", contacts, posture, Some(j), sphere([0.0; 3])).unwrap()
}

pub fn rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

pub fn rotate(r: &[[f64; 3]; 3], p: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2])
}

/// Applies `p -> R p + t` to contacts and center of mass together.
pub fn transform_grasp(g: &GraspInstance<f64>, r: &[[f64; 3]; 3], t: [f64; 3]) -> GraspInstance<f64> {
    let mv = |p: [f64; 3]| {
        let q = rotate(r, p);
        [q[0] + t[0], q[1] + t[1], q[2] + t[2]]
    };
    let contacts = g
        .contacts
        .iter()
        .map(|c| Contact::new(mv(c.position), rotate(r, c.normal), c.friction_mu).unwrap())
        .collect();
    let obj = &g.object;
    let mut moved = ObjectModel::new(obj.name.clone(), mv(obj.center_of_mass), obj.norm).unwrap();
    moved.mass = obj.mass;
    GraspInstance::new(g.grasp_id.clone(), contacts, g.posture.clone(), None, Arc::new(moved)).unwrap()
}
