use std::cmp::Ordering;

use crate::error::Result;
use crate::geom::vec3::Point3;
use crate::geom::{PlaneFrame, Polygon3D};
use crate::grasp::GraspInstance;
use crate::scalar::Scalar;

fn lexicographic<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.partial_cmp(y).unwrap())
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Contact positions ordered counterclockwise (about the best-fit plane
/// normal) around their centroid.
///
/// The order does not depend on the order contacts were listed in. One or
/// two contacts give a degenerate polygon.
pub fn contact_polygon<T: Scalar>(g: &GraspInstance<T>) -> Result<Polygon3D<T>> {
    let mut points = g.contact_positions();
    points.sort_by(lexicographic);
    if points.len() < 3 {
        return Polygon3D::new(points);
    }
    let plane = PlaneFrame::fit(&points);
    let projected: Vec<[T; 2]> = points.iter().map(|&p| plane.project(p)).collect();
    let inv = T::one() / T::of_usize(points.len());
    let cx = projected.iter().map(|q| q[0]).sum::<T>() * inv;
    let cy = projected.iter().map(|q| q[1]).sum::<T>() * inv;
    let mut keyed: Vec<(T, T, Point3<T>)> = points
        .iter()
        .zip(&projected)
        .map(|(&p, q)| {
            let (dx, dy) = (q[0] - cx, q[1] - cy);
            (dy.atan2(dx), dx * dx + dy * dy, p)
        })
        .collect();
    keyed.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.partial_cmp(&b.1).unwrap())
            .then(lexicographic(&a.2, &b.2))
    });
    Polygon3D::new(keyed.into_iter().map(|(_, _, p)| p).collect())
}
