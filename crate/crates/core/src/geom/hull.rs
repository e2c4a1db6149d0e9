//! Convex hull volume in arbitrary dimension.
//!
//! Quickhull-style incremental construction with simplicial facets: each
//! facet is a (d-1)-simplex with an outward unit normal and a conflict list
//! of points lying strictly above it. The volume is the sum of the cones
//! from an interior point to every facet.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::matrix::determinant;
use crate::scalar::Scalar;

/// Finite point set in `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloudD<T> {
    dim: usize,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> PointCloudD<T> {
    pub fn new(dim: usize, points: Vec<Vec<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("point cloud dimension must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("point {i} has non-finite coordinates")));
            }
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

struct Facet<T> {
    vertices: Vec<usize>,
    normal: Vec<T>,
    offset: T,
    outside: Vec<usize>,
    alive: bool,
}

impl<T: Scalar> Facet<T> {
    fn distance(&self, p: &[T]) -> T {
        dot(&self.normal, p) - self.offset
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Oriented hyperplane through `d` points, with the normal pointing away
/// from `interior`. `None` when the points are affinely dependent.
fn hyperplane<T: Scalar>(pts: &[&[T]], interior: &[T]) -> Option<(Vec<T>, T)> {
    let d = interior.len();
    let edges: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    // Generalized cross product: cofactors of the (d-1) x d edge matrix.
    let mut normal: Vec<T> = (0..d)
        .map(|col| {
            let minor: Vec<Vec<T>> = edges
                .iter()
                .map(|e| e.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
                .collect();
            let cof = if d == 1 { T::one() } else { determinant(minor) };
            if col % 2 == 0 { cof } else { -cof }
        })
        .collect();
    let len = dot(&normal, &normal).sqrt();
    let scale = edges
        .iter()
        .map(|e| dot(e, e).sqrt())
        .fold(T::one(), |acc, l| acc * l);
    if len == T::zero() || len <= T::epsilon() * scale {
        return None;
    }
    for v in normal.iter_mut() {
        *v = *v / len;
    }
    let mut offset = dot(&normal, pts[0]);
    if dot(&normal, interior) - offset > T::zero() {
        for v in normal.iter_mut() {
            *v = -*v;
        }
        offset = -offset;
    }
    Some((normal, offset))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Picks `d + 1` affinely independent points by greedy farthest-point
/// selection. `None` when the cloud spans less than `d` dimensions.
fn initial_simplex<T: Scalar>(pts: &[Vec<T>], tol: T) -> Option<Vec<usize>> {
    let d = pts[0].len();
    let argmax = |score: &dyn Fn(&[T]) -> T, taken: &[usize]| -> Option<(usize, T)> {
        let mut best: Option<(usize, T)> = None;
        for (i, p) in pts.iter().enumerate() {
            if taken.contains(&i) {
                continue;
            }
            let s = score(p);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        best
    };

    // Points are centered, so the first pick is the one farthest from the mean.
    let (first, _) = argmax(&|p| dot(p, p), &[])?;
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<T>> = Vec::new();
    for _ in 0..d {
        let origin = &pts[first];
        let residual = |p: &[T]| -> Vec<T> {
            let mut r = sub(p, origin);
            for b in &basis {
                let c = dot(&r, b);
                for (ri, &bi) in r.iter_mut().zip(b) {
                    *ri = *ri - c * bi;
                }
            }
            r
        };
        let (idx, dist2) = argmax(&|p| {
            let r = residual(p);
            dot(&r, &r)
        }, &chosen)?;
        if dist2.sqrt() <= tol {
            return None;
        }
        let r = residual(&pts[idx]);
        // Second Gram-Schmidt pass for orthogonality.
        let mut r2 = r.clone();
        for b in &basis {
            let c = dot(&r2, b);
            for (ri, &bi) in r2.iter_mut().zip(b) {
                *ri = *ri - c * bi;
            }
        }
        let len = dot(&r2, &r2).sqrt();
        basis.push(r2.into_iter().map(|v| v / len).collect());
        chosen.push(idx);
    }
    Some(chosen)
}

/// Lebesgue measure of the convex hull of `cloud` in its ambient dimension.
///
/// Returns 0 for affinely dependent input (points in a lower-dimensional
/// flat). Fewer than `d + 1` points is an error.
pub fn convex_hull_volume<T: Scalar>(cloud: &PointCloudD<T>) -> Result<T> {
    let d = cloud.dim();
    if d < 2 {
        return Err(Error::InvalidInput("hull volume needs dimension >= 2".into()));
    }
    if cloud.len() < d + 1 {
        return Err(Error::DegenerateInput(format!(
            "{} points cannot span a {d}-dimensional hull",
            cloud.len()
        )));
    }
    let n = cloud.len();
    let inv_n = T::one() / T::of_usize(n);
    let mean: Vec<T> = (0..d)
        .map(|k| cloud.points().iter().map(|p| p[k]).sum::<T>() * inv_n)
        .collect();
    let pts: Vec<Vec<T>> = cloud.points().iter().map(|p| sub(p, &mean)).collect();
    let radius = pts.iter().map(|p| dot(p, p).sqrt()).fold(T::zero(), T::max);
    if radius == T::zero() {
        return Ok(T::zero());
    }
    let tol = T::of(1e3) * T::epsilon() * radius;

    let Some(simplex) = initial_simplex(&pts, tol) else {
        return Ok(T::zero());
    };
    let inv = T::one() / T::of_usize(d + 1);
    let interior: Vec<T> = (0..d)
        .map(|k| simplex.iter().map(|&i| pts[i][k]).sum::<T>() * inv)
        .collect();

    let make_facet = |vertices: Vec<usize>| -> Option<Facet<T>> {
        let refs: Vec<&[T]> = vertices.iter().map(|&i| pts[i].as_slice()).collect();
        let (normal, offset) = hyperplane(&refs, &interior)?;
        Some(Facet { vertices, normal, offset, outside: Vec::new(), alive: true })
    };

    let mut facets: Vec<Facet<T>> = Vec::new();
    for skip in 0..=d {
        let mut verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &i)| i)
            .collect();
        verts.sort_unstable();
        facets.push(make_facet(verts).expect("initial simplex is non-degenerate"));
    }

    for i in 0..n {
        if simplex.contains(&i) {
            continue;
        }
        if let Some(f) = facets.iter_mut().find(|f| f.distance(&pts[i]) > tol) {
            f.outside.push(i);
        }
    }

    while let Some(owner) = facets.iter().position(|f| f.alive && !f.outside.is_empty()) {
        let eye = *facets[owner]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                let (da, db) = (facets[owner].distance(&pts[a]), facets[owner].distance(&pts[b]));
                da.partial_cmp(&db).unwrap().then(b.cmp(&a))
            })
            .unwrap();

        let visible: Vec<usize> = (0..facets.len())
            .filter(|&f| facets[f].alive && facets[f].distance(&pts[eye]) > tol)
            .collect();

        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut ridge_order: Vec<Vec<usize>> = Vec::new();
        for &f in &visible {
            let verts = &facets[f].vertices;
            for skip in 0..verts.len() {
                let ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let count = ridge_count.entry(ridge.clone()).or_insert(0);
                if *count == 0 {
                    ridge_order.push(ridge);
                }
                *count += 1;
            }
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            orphans.append(&mut facets[f].outside);
        }
        orphans.retain(|&p| p != eye);

        let first_new = facets.len();
        for ridge in ridge_order {
            if ridge_count[&ridge] != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(eye);
            verts.sort_unstable();
            if let Some(f) = make_facet(verts) {
                facets.push(f);
            }
        }

        orphans.sort_unstable();
        for p in orphans {
            let target = (first_new..facets.len())
                .chain(0..first_new)
                .find(|&f| facets[f].alive && facets[f].distance(&pts[p]) > tol);
            if let Some(f) = target {
                facets[f].outside.push(p);
            }
        }
    }

    let denom = T::of(factorial(d));
    let volume = facets
        .iter()
        .filter(|f| f.alive)
        .map(|f| {
            let rows: Vec<Vec<T>> = f.vertices.iter().map(|&i| sub(&pts[i], &interior)).collect();
            determinant(rows).abs()
        })
        .sum::<T>()
        / denom;
    Ok(volume)
}
