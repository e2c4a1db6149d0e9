mod common;

use common::oracles::{exhaustive_root_split, knn_oracle};
use graspq::data::LabelScheme;
use graspq::learn::{
    cross_validate, evaluate, grid_search, knn_fit, stratified_folds, tree_fit, zero_one_score, Model, ModelFile,
    ModelSpec, TieRule, TreeParams,
};
use graspq::metrics::Metric;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_set(rng: &mut ChaCha8Rng, rows: usize, d: usize, classes: usize, grid: Option<u32>) -> (Vec<Vec<f64>>, Vec<usize>) {
    let x = (0..rows)
        .map(|_| {
            (0..d)
                .map(|_| match grid {
                    // Coarse values produce distance ties and repeated values.
                    Some(g) => rng.random_range(0..g) as f64 / g as f64,
                    None => rng.random::<f64>(),
                })
                .collect()
        })
        .collect();
    let y = (0..rows).map(|_| rng.random_range(0..classes)).collect();
    (x, y)
}

#[test]
fn knn_matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..300 {
        let rows = rng.random_range(1..40);
        let grid = if trial % 2 == 0 { Some(4) } else { None };
        let (d, classes) = (rng.random_range(1..5), rng.random_range(1..4));
        let (x, y) = random_set(&mut rng, rows, d, classes, grid);
        let k = rng.random_range(1..=rows);
        let m = knn_fit(&x, &y, k, TieRule::SmallestClass).unwrap();
        for _ in 0..5 {
            let q: Vec<f64> = (0..x[0].len()).map(|_| rng.random_range(0..5) as f64 / 4.0).collect();
            assert_eq!(m.predict(&q).unwrap(), knn_oracle(&x, &y, &q, k));
        }
    }
}

#[test]
fn knn_thirty_rows_k3() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let (x, y) = random_set(&mut rng, 30, 3, 3, None);
    let m = knn_fit(&x, &y, 3, TieRule::default()).unwrap();
    for _ in 0..100 {
        let q: Vec<f64> = (0..3).map(|_| rng.random()).collect();
        assert_eq!(m.predict(&q).unwrap(), knn_oracle(&x, &y, &q, 3));
    }
}

#[test]
fn tree_root_split_matches_exhaustive_gini() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..200 {
        let rows = rng.random_range(2..=50);
        let grid = if trial % 2 == 0 { Some(5) } else { None };
        let (d, classes) = (rng.random_range(1..4), rng.random_range(2..4));
        let (x, y) = random_set(&mut rng, rows, d, classes, grid);
        let min_leaf = [1, 1, 2, 5][trial % 4];
        let t = tree_fit(&x, &y, TreeParams { max_depth: None, min_samples_leaf: min_leaf }).unwrap();
        let pure = y.iter().all(|&v| v == y[0]);
        let want = if pure { None } else { exhaustive_root_split(&x, &y, min_leaf) };
        assert_eq!(t.root_split(), want, "trial {trial}");
    }
}

#[test]
fn root_split_example() {
    let x: Vec<Vec<f64>> = [0.0, 1.0, 2.0, 3.0].iter().map(|&v| vec![v]).collect();
    let t = tree_fit(&x, &[0, 0, 1, 1], TreeParams::default()).unwrap();
    assert_eq!(t.root_split(), Some((0, 1.5)));
    assert_eq!(exhaustive_root_split(&x, &[0, 0, 1, 1], 1), Some((0, 1.5)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unlimited_tree_memorizes_consistent_data(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, mut y) = random_set(&mut rng, 40, 2, 3, Some(6));
        // Memorizing oracle: the first label seen for each distinct row.
        let mut seen: Vec<(Vec<f64>, usize)> = Vec::new();
        for (row, label) in x.iter().zip(y.iter_mut()) {
            match seen.iter().find(|(r, _)| r == row) {
                Some((_, l)) => *label = *l,
                None => seen.push((row.clone(), *label)),
            }
        }
        let t = tree_fit(&x, &y, TreeParams::default()).unwrap();
        for (row, &label) in x.iter().zip(&y) {
            prop_assert_eq!(t.predict(row).unwrap(), label);
        }
    }

    #[test]
    fn knn_is_invariant_to_training_order(seed in any::<u64>(), k in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = random_set(&mut rng, 25, 3, 3, None);
        let mut perm: Vec<usize> = (0..25).collect();
        for i in (1..25).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let px: Vec<Vec<f64>> = perm.iter().map(|&i| x[i].clone()).collect();
        let py: Vec<usize> = perm.iter().map(|&i| y[i]).collect();
        let (a, b) = (knn_fit(&x, &y, k, TieRule::default()).unwrap(), knn_fit(&px, &py, k, TieRule::default()).unwrap());
        for _ in 0..20 {
            let q: Vec<f64> = (0..3).map(|_| rng.random()).collect();
            prop_assert_eq!(a.predict(&q).unwrap(), b.predict(&q).unwrap());
        }
    }

    #[test]
    fn fold_partition_is_stratified(seed in any::<u64>(), rows in 10usize..80, folds in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<usize> = (0..rows).map(|_| rng.random_range(0..3)).collect();
        let a = stratified_folds(&y, folds, seed).unwrap();
        prop_assert!(a.iter().all(|&f| f < folds));
        let sizes: Vec<usize> = (0..folds).map(|f| a.iter().filter(|&&v| v == f).count()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for c in 0..3 {
            let per: Vec<usize> = (0..folds).map(|f| (0..rows).filter(|&i| a[i] == f && y[i] == c).count()).collect();
            prop_assert!(per.iter().max().unwrap() - per.iter().min().unwrap() <= 1);
        }
    }
}

#[test]
fn trees_ignore_monotone_rescaling_but_knn_does_not() {
    let g = |v: f64| v.powi(3) * 50.0 + v.exp();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut knn_changed = false;
    for _ in 0..20 {
        let (x, y) = random_set(&mut rng, 40, 2, 2, None);
        let gx: Vec<Vec<f64>> = x.iter().map(|r| vec![g(r[0]), r[1]]).collect();
        let t = tree_fit(&x, &y, TreeParams::default()).unwrap();
        let tg = tree_fit(&gx, &y, TreeParams::default()).unwrap();
        let k = knn_fit(&x, &y, 3, TieRule::default()).unwrap();
        let kg = knn_fit(&gx, &y, 3, TieRule::default()).unwrap();
        // Training rows, plus points beyond the data on the rescaled axis.
        // Midpoint thresholds make arbitrary in-range queries unsafe: g of a
        // midpoint is not the midpoint of g.
        let mut queries = x.clone();
        queries.extend((0..10).map(|i| vec![if i % 2 == 0 { -0.5 } else { 1.5 }, rng.random::<f64>()]));
        for q in &queries {
            let qg = vec![g(q[0]), q[1]];
            assert_eq!(t.predict(q).unwrap(), tg.predict(&qg).unwrap());
            knn_changed |= k.predict(q).unwrap() != kg.predict(&qg).unwrap();
        }
    }
    assert!(knn_changed, "rescaling should move at least one k-NN prediction");
}

#[test]
fn cross_validation_matches_hand_rolled_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let (x, y) = random_set(&mut rng, 25, 2, 2, None);
    let spec = ModelSpec::Knn { k: 3, tie_rule: TieRule::default() };
    let cv = cross_validate(&x, &y, 5, &spec, 4).unwrap();
    let folds = stratified_folds(&y, 5, 4).unwrap();
    let mut scores = Vec::new();
    for f in 0..5 {
        let held: Vec<usize> = (0..25).filter(|&i| folds[i] == f).collect();
        assert_eq!(held.len(), 5);
        let train: Vec<usize> = (0..25).filter(|&i| folds[i] != f).collect();
        let tx: Vec<Vec<f64>> = train.iter().map(|&i| x[i].clone()).collect();
        let ty: Vec<usize> = train.iter().map(|&i| y[i]).collect();
        let hits = held.iter().filter(|&&i| knn_oracle(&tx, &ty, &x[i], 3) == y[i]).count();
        scores.push(hits as f64 / held.len() as f64);
    }
    let mean = scores.iter().sum::<f64>() / 5.0;
    let std = (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / 5.0).sqrt();
    assert_eq!(cv.fold_scores, scores);
    assert!((cv.mean - mean).abs() < 1e-15 && (cv.std - std).abs() < 1e-15);
}

#[test]
fn grid_search_picks_first_of_equal_cells_and_refits() {
    // A wide gap between the classes: any split inside it is exact.
    let x: Vec<Vec<f64>> = (0..30).map(|i| vec![if i < 15 { i as f64 } else { i as f64 + 100.0 }]).collect();
    let y: Vec<usize> = (0..30).map(|i| usize::from(i >= 15)).collect();
    let grid = [
        ModelSpec::Tree(TreeParams { max_depth: Some(1), min_samples_leaf: 1 }),
        ModelSpec::Tree(TreeParams { max_depth: Some(3), min_samples_leaf: 1 }),
    ];
    let r = grid_search(&x, &y, &grid, 5, 0).unwrap();
    assert_eq!(r.best_index, 0);
    assert_eq!((r.cv.mean, r.cv.std), (1.0, 0.0));
    let e = evaluate(&r.model, &x, &y, 2).unwrap();
    assert_eq!(e.accuracy, 1.0);
    assert_eq!(e.accuracy, zero_one_score(&e.predictions, &y).unwrap());
}

#[test]
fn model_files_predict_identically_after_reload() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (x, y) = random_set(&mut rng, 60, 3, 3, None);
    let dir = tempfile::tempdir().unwrap();
    for spec in [ModelSpec::Knn { k: 5, tie_rule: TieRule::Nearest }, ModelSpec::Tree(TreeParams { max_depth: Some(4), min_samples_leaf: 2 })] {
        let model: Model<f64> = spec.fit(&x, &y).unwrap();
        let file = ModelFile {
            model,
            feature_order: vec![Metric::QD1, Metric::QA1, Metric::QB3],
            label_encoding: LabelScheme::Ternary.encoding(),
            thresholds: Default::default(),
            thresholds_source: None,
            report: None,
        };
        let p = dir.path().join(format!("{}.json", spec.kind()));
        graspq::learn::save_model(&file, &p).unwrap();
        let back = graspq::learn::load_model(&p).unwrap();
        assert_eq!(back, file);
        for _ in 0..100 {
            let q: Vec<f64> = (0..3).map(|_| rng.random()).collect();
            assert_eq!(back.predict(&q).unwrap(), file.predict(&q).unwrap());
        }
    }
}

#[test]
fn f32_models_fit_and_predict() {
    let x: Vec<Vec<f32>> = (0..20).map(|i| vec![i as f32 / 20.0]).collect();
    let y: Vec<usize> = (0..20).map(|i| usize::from(i >= 10)).collect();
    let r = grid_search(&x, &y, &graspq::learn::default_tree_grid(), 5, 0).unwrap();
    assert_eq!(r.model.predict(&[0.9f32]).unwrap(), 1);
}
