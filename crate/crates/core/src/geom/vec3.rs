//! Fixed-size 3-vector helpers.

use crate::scalar::Scalar;

pub type Point3<T> = [T; 3];

#[inline]
pub fn add<T: Scalar>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub<T: Scalar>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale<T: Scalar>(a: Point3<T>, c: T) -> Point3<T> {
    [a[0] * c, a[1] * c, a[2] * c]
}

#[inline]
pub fn dot<T: Scalar>(a: Point3<T>, b: Point3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<T: Scalar>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm<T: Scalar>(a: Point3<T>) -> T {
    dot(a, a).sqrt()
}

pub fn distance<T: Scalar>(a: Point3<T>, b: Point3<T>) -> T {
    norm(sub(a, b))
}

/// Unit vector in the direction of `a`, or `None` for a zero vector.
pub fn normalize<T: Scalar>(a: Point3<T>) -> Option<Point3<T>> {
    let n = norm(a);
    if n > T::zero() && n.is_finite() {
        Some(scale(a, T::one() / n))
    } else {
        None
    }
}

pub fn mean<T: Scalar>(points: &[Point3<T>]) -> Point3<T> {
    let inv = T::one() / T::of_usize(points.len());
    let s = points
        .iter()
        .fold([T::zero(); 3], |acc, &p| add(acc, p));
    scale(s, inv)
}

/// Cross-product (skew-symmetric) matrix of `a`, row-major.
pub fn skew<T: Scalar>(a: Point3<T>) -> [[T; 3]; 3] {
    let z = T::zero();
    [[z, -a[2], a[1]], [a[2], z, -a[0]], [-a[1], a[0], z]]
}

pub fn is_finite<T: Scalar>(a: Point3<T>) -> bool {
    a.iter().all(|v| v.is_finite())
}
