use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{bail, Context, Result};
use graspq::data::{feature_matrix, load_dataset, split, Dataset, DatasetFormat, FeatureMatrix, SplitOptions};
use graspq::learn::{evaluate, grid_search, load_model, EvalReport, ModelFile};
use graspq::metrics::Thresholds;
use graspq::Error;

use crate::args::{EvaluateArgs, TrainArgs};
use crate::config::{GridConfig, RunConfig};
use crate::io::{display_name, read_text, require_file, require_output, write_atomic};
use crate::report::{RunReport, Table, REPORT_SCHEMA, STD_NOTE};

fn load(path: &Path) -> Result<Dataset> {
    load_dataset(path, DatasetFormat::from_path(path)).with_context(|| format!("loading {}", path.display()))
}

fn classes_present(labels: &[usize]) -> BTreeSet<usize> {
    labels.iter().copied().collect()
}

/// Everything `train` produces, before anything is written.
#[derive(Debug)]
pub struct TrainOutcome {
    pub model: ModelFile,
    pub report: RunReport,
}

pub fn train_dataset(ds: &Dataset, cfg: &RunConfig, input_name: &str) -> Result<TrainOutcome> {
    let scheme = cfg.label_scheme;
    let ds = scheme.restrict(ds)?;
    let all = feature_matrix(&ds, &cfg.metrics, scheme)?;
    let opts = SplitOptions {
        test_fraction: cfg.test_fraction,
        seed: cfg.seed,
        stratified: true,
        mode: cfg.split_mode,
        scheme,
    };
    let (train, test) = split(&ds, &opts).map_err(|e| match e {
        Error::Stratification(msg) => Error::Stratification(format!(
            "{msg}; every {scheme} class needs at least two {} units. Add data, use --split-mode record, \
             or choose another --label-scheme",
            cfg.split_mode
        )),
        e => e,
    })?;
    let train_x: FeatureMatrix = feature_matrix(&train, &cfg.metrics, scheme)?;
    let test_x = feature_matrix(&test, &cfg.metrics, scheme)?;
    let missing: Vec<&str> = classes_present(&all.labels)
        .difference(&classes_present(&train_x.labels))
        .map(|&c| scheme.classes()[c])
        .collect();
    if !missing.is_empty() {
        return Err(Error::Stratification(format!(
            "class(es) {} absent from the training split; add data or lower --test-fraction",
            missing.join(", ")
        ))
        .into());
    }

    let grid = cfg.grid_cells()?;
    let result = grid_search(&train_x.features, &train_x.labels, &grid, cfg.folds, cfg.seed)?;
    let eval = evaluate(&result.model, &test_x.features, &test_x.labels, scheme.n_classes())?;
    log::info!("selected {} (cv {:.4} ± {:.4})", result.best, result.cv.mean, result.cv.std);

    let eval_report = EvalReport {
        hyperparameters: result.best,
        folds: cfg.folds,
        seed: cfg.seed,
        train_accuracy_mean: result.cv.mean,
        train_accuracy_std: result.cv.std,
        test_accuracy: eval.accuracy,
        confusion: eval.confusion.clone(),
        n_train: train_x.len(),
        n_test: test_x.len(),
    };
    let report = RunReport {
        schema: REPORT_SCHEMA.into(),
        command: "train".into(),
        seed: cfg.seed,
        input: input_name.into(),
        model: cfg.model,
        hyperparameters: result.best,
        label_scheme: scheme,
        classes: scheme.encoding().classes,
        metrics: cfg.metrics.clone(),
        split_mode: Some(cfg.split_mode),
        test_fraction: Some(cfg.test_fraction),
        folds: Some(cfg.folds),
        train_accuracy_mean: Some(result.cv.mean),
        train_accuracy_std: Some(result.cv.std),
        n_train: Some(train_x.len()),
        test_accuracy: eval.accuracy,
        n_test: test_x.len(),
        confusion: eval.confusion,
        std_definition: STD_NOTE.into(),
        grid: result.cells,
    };
    let model = ModelFile {
        model: result.model,
        feature_order: cfg.metrics.clone(),
        label_encoding: scheme.encoding(),
        thresholds: BTreeMap::new(),
        thresholds_source: None,
        report: Some(eval_report),
    };
    Ok(TrainOutcome { model, report })
}

pub fn run_train(args: &TrainArgs, cfg: &RunConfig) -> Result<()> {
    require_file(&args.input)?;
    let thresholds_path = args.thresholds.as_ref().or(cfg.thresholds.as_ref());
    if let Some(p) = thresholds_path {
        require_file(p)?;
    }
    require_output(&args.model_out)?;
    if let Some(p) = &args.report_out {
        require_output(p)?;
    }
    let mut cfg = cfg.clone();
    if let Some(spec) = &args.grid {
        cfg.grid = Some(GridConfig::parse(spec)?);
    }
    cfg.grid_cells()?;

    let ds = load(&args.input)?;
    let mut out = train_dataset(&ds, &cfg, &display_name(&args.input))?;
    if let Some(p) = thresholds_path {
        let t: Thresholds<f64> = Thresholds::parse(&read_text(p)?).with_context(|| format!("parsing {}", p.display()))?;
        out.model.thresholds = t.iter().map(|(m, lo, hi)| (m, [lo, hi])).collect();
        out.model.thresholds_source = Some(display_name(p));
    }

    write_atomic(&args.model_out, out.model.to_json()?.as_bytes())?;
    if let Some(p) = &args.report_out {
        write_atomic(p, out.report.to_json()?.as_bytes())?;
    }
    eprintln!(
        "{} on {} ({} train / {} test, seed {}): selected {}",
        cfg.model,
        cfg.label_scheme,
        out.report.n_train.unwrap_or(0),
        out.report.n_test,
        cfg.seed,
        out.report.hyperparameters
    );
    print!("{}", Table::new(vec![out.report])?.to_text());
    Ok(())
}

pub fn evaluate_dataset(model: &ModelFile, ds: &Dataset, seed: u64, input_name: &str) -> Result<RunReport> {
    let scheme = model.label_encoding.scheme;
    if model.label_encoding.classes != scheme.encoding().classes {
        bail!(Error::Schema("model label encoding does not match its scheme".into()));
    }
    let ds = scheme.restrict(ds)?;
    let x = feature_matrix(&ds, &model.feature_order, scheme)?;
    let eval = evaluate(&model.model, &x.features, &x.labels, scheme.n_classes())?;
    let train = model.report.as_ref();
    Ok(RunReport {
        schema: REPORT_SCHEMA.into(),
        command: "evaluate".into(),
        seed,
        input: input_name.into(),
        model: model.model.kind(),
        hyperparameters: model.model.spec(),
        label_scheme: scheme,
        classes: model.label_encoding.classes.clone(),
        metrics: model.feature_order.clone(),
        split_mode: None,
        test_fraction: None,
        folds: train.map(|r| r.folds),
        train_accuracy_mean: train.map(|r| r.train_accuracy_mean),
        train_accuracy_std: train.map(|r| r.train_accuracy_std),
        n_train: train.map(|r| r.n_train),
        test_accuracy: eval.accuracy,
        n_test: x.len(),
        confusion: eval.confusion,
        std_definition: STD_NOTE.into(),
        grid: Vec::new(),
    })
}

pub fn run_evaluate(args: &EvaluateArgs, cfg: &RunConfig) -> Result<()> {
    require_file(&args.model_file)?;
    require_file(&args.input)?;
    if let Some(p) = &args.report_out {
        require_output(p)?;
    }
    let model = load_model(&args.model_file).with_context(|| format!("loading model {}", args.model_file.display()))?;
    let ds = load(&args.input)?;
    let report = evaluate_dataset(&model, &ds, cfg.seed, &display_name(&args.input))?;
    if let Some(p) = &args.report_out {
        write_atomic(p, report.to_json()?.as_bytes())?;
    }
    eprintln!("accuracy {:.4} on {} record(s)", report.test_accuracy, report.n_test);
    print!("{}", Table::new(vec![report])?.to_text());
    Ok(())
}
