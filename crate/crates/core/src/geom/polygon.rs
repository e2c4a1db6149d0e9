//! Planar polygon measures for (approximately) coplanar 3D vertex loops.
//!
//! Vertices are projected onto their least-squares plane before any 2D
//! formula is applied, so small out-of-plane noise in measured contacts
//! does not invalidate the polygon.

use crate::error::{Error, Result};
use crate::geom::eigen::symmetric_eigen;
use crate::geom::vec3::{self, Point3};
use crate::scalar::Scalar;

/// Out-of-plane distance (meters) below which vertices count as coplanar.
pub const EPS_PLANE: f64 = 1e-6;

/// Relative tolerance on |sin(angle)| for treating adjacent edges as
/// collinear.
const COLLINEAR_SIN_TOL: f64 = 1e-9;

/// Ordered vertex loop in 3D.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon3D<T> {
    vertices: Vec<Point3<T>>,
}

/// Orthonormal frame of a best-fit plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneFrame<T> {
    pub origin: Point3<T>,
    pub u: Point3<T>,
    pub v: Point3<T>,
    pub normal: Point3<T>,
}

impl<T: Scalar> PlaneFrame<T> {
    /// Least-squares plane through `points`: origin at their mean, normal
    /// along the smallest principal axis. The normal's largest component is
    /// made positive so the frame does not depend on eigen-solver sign
    /// conventions.
    pub fn fit(points: &[Point3<T>]) -> Self {
        let origin = vec3::mean(points);
        let mut cov = vec![vec![T::zero(); 3]; 3];
        for p in points {
            let d = vec3::sub(*p, origin);
            for i in 0..3 {
                for j in 0..3 {
                    cov[i][j] = cov[i][j] + d[i] * d[j];
                }
            }
        }
        let pairs = symmetric_eigen(&cov);
        let e = &pairs[0].1;
        let mut normal = vec3::normalize([e[0], e[1], e[2]]).unwrap_or([T::zero(), T::zero(), T::one()]);
        let lead = (0..3)
            .max_by(|&a, &b| normal[a].abs().partial_cmp(&normal[b].abs()).unwrap().then(b.cmp(&a)))
            .unwrap();
        if normal[lead] < T::zero() {
            normal = vec3::scale(normal, -T::one());
        }
        let (u, v) = tangent_basis(normal);
        Self { origin, u, v, normal }
    }

    pub fn project(&self, p: Point3<T>) -> [T; 2] {
        let d = vec3::sub(p, self.origin);
        [vec3::dot(d, self.u), vec3::dot(d, self.v)]
    }

    pub fn lift(&self, q: [T; 2]) -> Point3<T> {
        vec3::add(
            self.origin,
            vec3::add(vec3::scale(self.u, q[0]), vec3::scale(self.v, q[1])),
        )
    }

    pub fn signed_distance(&self, p: Point3<T>) -> T {
        vec3::dot(vec3::sub(p, self.origin), self.normal)
    }
}

/// Completes `z` (unit) to a right-handed orthonormal frame `(x, y, z)`.
///
/// `x` is the global axis least aligned with `z` (lowest index on ties),
/// orthogonalized against `z`; `y = z × x`.
pub fn tangent_basis<T: Scalar>(z: Point3<T>) -> (Point3<T>, Point3<T>) {
    let axis = (0..3)
        .min_by(|&a, &b| z[a].abs().partial_cmp(&z[b].abs()).unwrap().then(a.cmp(&b)))
        .unwrap();
    let mut e = [T::zero(); 3];
    e[axis] = T::one();
    let x = vec3::normalize(vec3::sub(e, vec3::scale(z, vec3::dot(e, z))))
        .expect("least-aligned axis is never parallel to a unit vector");
    let y = vec3::cross(z, x);
    (x, y)
}

impl<T: Scalar> Polygon3D<T> {
    pub fn new(vertices: Vec<Point3<T>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::DegenerateInput("polygon has no vertices".into()));
        }
        if vertices.iter().any(|p| !vec3::is_finite(*p)) {
            return Err(Error::InvalidInput("non-finite polygon vertex".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point3<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True when the polygon cannot enclose area: fewer than three vertices
    /// or all vertices collinear.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3 || self.signed_area_2d().1
    }

    pub fn plane(&self) -> PlaneFrame<T> {
        PlaneFrame::fit(&self.vertices)
    }

    /// Largest distance of a vertex from the best-fit plane.
    pub fn planarity_residual(&self) -> T {
        let plane = self.plane();
        self.vertices
            .iter()
            .map(|&p| plane.signed_distance(p).abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_coplanar(&self) -> bool {
        self.planarity_residual() <= T::of(EPS_PLANE)
    }

    fn projected(&self) -> (PlaneFrame<T>, Vec<[T; 2]>) {
        let plane = self.plane();
        let pts = self.vertices.iter().map(|&p| plane.project(p)).collect();
        (plane, pts)
    }

    /// Signed shoelace area in the plane frame and whether it is negligible
    /// relative to the polygon's extent.
    fn signed_area_2d(&self) -> (T, bool) {
        let (_, pts) = self.projected();
        let area = shoelace(&pts);
        let extent = pts
            .iter()
            .map(|q| q[0] * q[0] + q[1] * q[1])
            .fold(T::zero(), T::max);
        (area, area.abs() <= T::of(1e-12) * extent)
    }
}

fn shoelace<T: Scalar>(pts: &[[T; 2]]) -> T {
    let n = pts.len();
    let twice: T = (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    twice / T::of(2.0)
}

/// Area of the polygon after projection to its best-fit plane. Collinear
/// vertex sets give 0.
pub fn polygon_area<T: Scalar>(poly: &Polygon3D<T>) -> Result<T> {
    if poly.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "polygon area needs at least 3 vertices, got {}",
            poly.len()
        )));
    }
    let (_, pts) = poly.projected();
    Ok(shoelace(&pts).abs())
}

/// Area-weighted centroid; degenerate polygons (fewer than three vertices or
/// negligible area) fall back to the vertex mean.
pub fn polygon_centroid<T: Scalar>(poly: &Polygon3D<T>) -> Result<Point3<T>> {
    if poly.is_empty() {
        return Err(Error::DegenerateInput("polygon has no vertices".into()));
    }
    if poly.is_degenerate() {
        return Ok(vec3::mean(poly.vertices()));
    }
    let (plane, pts) = poly.projected();
    let n = pts.len();
    let (mut a2, mut cx, mut cy) = (T::zero(), T::zero(), T::zero());
    for i in 0..n {
        let (p, q) = (pts[i], pts[(i + 1) % n]);
        let w = p[0] * q[1] - p[1] * q[0];
        a2 = a2 + w;
        cx = cx + (p[0] + q[0]) * w;
        cy = cy + (p[1] + q[1]) * w;
    }
    let denom = T::of(3.0) * a2;
    Ok(plane.lift([cx / denom, cy / denom]))
}

/// Interior angle at every vertex, in degrees, in vertex order.
pub fn polygon_internal_angles<T: Scalar>(poly: &Polygon3D<T>) -> Result<Vec<T>> {
    if poly.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "internal angles need at least 3 vertices, got {}",
            poly.len()
        )));
    }
    let (area, negligible) = poly.signed_area_2d();
    if negligible {
        return Err(Error::DegenerateInput("polygon vertices are collinear".into()));
    }
    let orientation = area.signum();
    let (_, pts) = poly.projected();
    let n = pts.len();
    let full_turn = T::of(360.0);
    (0..n)
        .map(|i| {
            let cur = pts[i];
            let next = pts[(i + 1) % n];
            let prev = pts[(i + n - 1) % n];
            let a = [next[0] - cur[0], next[1] - cur[1]];
            let b = [prev[0] - cur[0], prev[1] - cur[1]];
            let cr = a[0] * b[1] - a[1] * b[0];
            let dt = a[0] * b[0] + a[1] * b[1];
            let lens = (a[0] * a[0] + a[1] * a[1]).sqrt() * (b[0] * b[0] + b[1] * b[1]).sqrt();
            if lens == T::zero() || cr.abs() <= T::of(COLLINEAR_SIN_TOL) * lens {
                return Err(Error::DegenerateInput(format!(
                    "edges adjacent to vertex {i} are collinear"
                )));
            }
            let mut deg = (orientation * cr).atan2(dt).to_degrees();
            if deg < T::zero() {
                deg = deg + full_turn;
            }
            Ok(deg)
        })
        .collect()
}
