mod common;

use common::oracles::{factorial, monte_carlo_hull_volume, singular_values_via_eigen};
use common::{rotate, rotation};
use graspq::geom::{
    convex_hull_volume, polygon_area, polygon_internal_angles, svd_singular_values, Matrix, PointCloudD, Polygon3D,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=6, 1usize..=9).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-10.0f64..10.0, c), r))
}

fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

fn cloud(points: &[Vec<f64>]) -> PointCloudD<f64> {
    PointCloudD::new(points[0].len(), points.to_vec()).unwrap()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn svd_squares_match_gram_eigenvalues(m in matrix_strategy()) {
        let s = svd_singular_values(&Matrix::from_rows(&m).unwrap()).unwrap();
        let oracle = singular_values_via_eigen(&m);
        prop_assert_eq!(s.len(), m.len().min(m[0].len()));
        let lmax = oracle[0] * oracle[0];
        for (a, b) in s.iter().zip(&oracle) {
            prop_assert!((a * a - b * b).abs() <= 1e-9 * lmax.max(1e-300), "{} vs {}", a, b);
        }
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]) && s.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn svd_of_transpose_is_identical(m in matrix_strategy()) {
        let a = svd_singular_values(&Matrix::from_rows(&m).unwrap()).unwrap();
        let b = svd_singular_values(&Matrix::from_rows(&transpose(&m)).unwrap()).unwrap();
        let scale = a[0].max(1.0);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn svd_scales_linearly(m in matrix_strategy(), c in 0.0f64..20.0) {
        let a = svd_singular_values(&Matrix::from_rows(&m).unwrap()).unwrap();
        let scaled: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|v| v * c).collect()).collect();
        let b = svd_singular_values(&Matrix::from_rows(&scaled).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x * c - y).abs() <= 1e-9 * (a[0] * c).max(1e-12));
        }
    }

    #[test]
    fn polygon_area_is_rigid_invariant(
        n in 3usize..9,
        radii in prop::collection::vec(0.5f64..2.0, 8),
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0f64..std::f64::consts::TAU,
        shift in prop::array::uniform3(-5.0f64..5.0),
    ) {
        prop_assume!(axis.iter().map(|a| a * a).sum::<f64>() > 1e-3);
        // Star-shaped about the origin, hence simple.
        let pts: Vec<[f64; 3]> = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                [radii[k] * a.cos(), radii[k] * a.sin(), 0.0]
            })
            .collect();
        let r = rotation(axis, angle);
        let moved: Vec<[f64; 3]> = pts.iter().map(|&p| {
            let q = rotate(&r, p);
            [q[0] + shift[0], q[1] + shift[1], q[2] + shift[2]]
        }).collect();
        let a0 = polygon_area(&Polygon3D::new(pts).unwrap()).unwrap();
        let a1 = polygon_area(&Polygon3D::new(moved.clone()).unwrap()).unwrap();
        prop_assert!((a0 - a1).abs() <= 1e-9 * a0);
        let angles = polygon_internal_angles(&Polygon3D::new(moved).unwrap()).unwrap();
        let sum: f64 = angles.iter().sum();
        prop_assert!((sum - (n as f64 - 2.0) * 180.0).abs() < 1e-6);
    }

    #[test]
    fn hull_volume_invariances(seed in any::<u64>(), d in 2usize..=4, extra in 0usize..12, c in 0.2f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, d + 1 + extra, d);
        let v = convex_hull_volume(&cloud(&pts)).unwrap();

        let mut shuffled = pts.clone();
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let vp = convex_hull_volume(&cloud(&shuffled)).unwrap();
        prop_assert!((v - vp).abs() <= 1e-9 * v.max(1e-12));

        let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| x * c).collect()).collect();
        let vs = convex_hull_volume(&cloud(&scaled)).unwrap();
        prop_assert!((vs - v * c.powi(d as i32)).abs() <= 1e-9 * vs.max(1e-12));

        // Rotation in the first coordinate plane plus a translation.
        let (s, co) = rng.random_range(0.0..std::f64::consts::TAU).sin_cos();
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| {
            let mut q = p.clone();
            q[0] = co * p[0] - s * p[1] + 0.7;
            q[1] = s * p[0] + co * p[1] - 1.3;
            q
        }).collect();
        let vr = convex_hull_volume(&cloud(&moved)).unwrap();
        prop_assert!((v - vr).abs() <= 1e-9 * v.max(1e-12));

        let mut grown = pts.clone();
        grown.push((0..d).map(|_| rng.random_range(-2.0..2.0)).collect());
        prop_assert!(convex_hull_volume(&cloud(&grown)).unwrap() >= v * (1.0 - 1e-12));
    }
}

#[test]
fn unit_simplices_match_closed_form() {
    for d in 2..=6 {
        let mut pts = vec![vec![0.0; d]];
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            pts.push(e);
        }
        let v = convex_hull_volume(&cloud(&pts)).unwrap();
        assert!((v - 1.0 / factorial(d)).abs() < 1e-9, "d={d}: {v}");
    }
}

#[test]
fn interior_points_leave_volume_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cube: Vec<Vec<f64>> = (0..8).map(|m| (0..3).map(|b| ((m >> b) & 1) as f64).collect()).collect();
    let mut with_inner = cube.clone();
    with_inner.extend(random_points(&mut rng, 40, 3).into_iter().map(|p| p.iter().map(|x| 0.5 + 0.4 * x).collect()));
    let a = convex_hull_volume(&cloud(&cube)).unwrap();
    let b = convex_hull_volume(&cloud(&with_inner)).unwrap();
    assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
}

#[test]
fn random_4d_hulls_match_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..3 {
        let pts = random_points(&mut rng, 20, 4);
        let v = convex_hull_volume(&cloud(&pts)).unwrap();
        let mc = monte_carlo_hull_volume(&pts, 200_000, trial);
        assert!((v - mc).abs() / v < 0.03, "trial {trial}: {v} vs {mc}");
    }
}

#[test]
fn f32_kernels_agree_with_f64() {
    let m = vec![vec![1.0f32, 2.0, 0.5], vec![-0.3, 0.8, 1.1]];
    let s32 = svd_singular_values(&Matrix::from_rows(&m).unwrap()).unwrap();
    let m64: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let s64 = svd_singular_values(&Matrix::from_rows(&m64).unwrap()).unwrap();
    for (a, b) in s32.iter().zip(&s64) {
        assert!((*a as f64 - b).abs() < 1e-5);
    }
    let tri = Polygon3D::new(vec![[0.0f32, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
    assert!((polygon_area(&tri).unwrap() - 0.5).abs() < 1e-6);
}
