use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use graspq::data::{load_dataset, load_objects, to_json_lines, Dataset, DatasetFormat, ObjectCatalog, QualityMeta};
use graspq::grasp::{GraspConfig, WrenchSpace};
use graspq::metrics::{quality_vector, ClampCounts, Metric, QualityVector, Thresholds};

use crate::args::ComputeArgs;
use crate::config::{parse_torque_scale, RunConfig};
use crate::io::{display_name, read_text, require_file, require_output, write_atomic};

/// Metrics that may need dataset-calibrated ranges.
const CALIBRATED: [Metric; 2] = [Metric::QA1, Metric::QC2];

#[derive(Debug, Default)]
pub struct ComputeSummary {
    pub computed: usize,
    pub passed_through: Vec<String>,
    pub failed: Vec<(String, String)>,
    pub missing_q_d2: Vec<String>,
    pub clamps: ClampCounts,
    /// Ranges actually used, and whether they came from the data.
    pub thresholds: Thresholds<f64>,
    pub calibrated: Vec<Metric>,
}

/// Fills `quality` and `quality_meta` for every record that lacks them.
///
/// Records that already carry a quality vector are kept as they are.
/// q_a1 and (for objects without `volume_max`) q_c2 are normalized with
/// `supplied` where it has a range, otherwise with the min/max observed
/// over this dataset.
pub fn compute_dataset(
    ds: &Dataset,
    objects: Option<&ObjectCatalog>,
    cfg: &GraspConfig<f64>,
    supplied: &Thresholds<f64>,
) -> Result<(Dataset, ComputeSummary)> {
    let mut summary = ComputeSummary::default();
    let mut vectors: Vec<Option<QualityVector<f64>>> = Vec::with_capacity(ds.len());
    for r in &ds.records {
        if r.quality.is_some() {
            summary.passed_through.push(r.grasp_id.clone());
            vectors.push(None);
            continue;
        }
        let Some(catalog) = objects else {
            bail!("record `{}` needs object geometry; pass --objects", r.grasp_id);
        };
        let result = catalog
            .get(&r.object)
            .and_then(|obj| r.to_grasp_instance(obj))
            .and_then(|g| quality_vector(&g, cfg, supplied));
        match result {
            Ok(q) => vectors.push(Some(q)),
            Err(e) => {
                summary.failed.push((r.grasp_id.clone(), e.to_string()));
                vectors.push(None);
            }
        }
    }

    let mut thresholds = supplied.clone();
    for m in CALIBRATED {
        let raw: Vec<f64> = vectors
            .iter()
            .flatten()
            .filter(|q| q.flags(m).unnormalized)
            .filter_map(|q| q.get(m))
            .collect();
        if !raw.is_empty() && thresholds.get(m).is_none() {
            Thresholds::calibrate(m, &raw, &mut thresholds);
            summary.calibrated.push(m);
        }
    }

    let mut records = Vec::with_capacity(ds.len());
    for (r, q) in ds.records.iter().zip(&vectors) {
        let mut r = r.clone();
        if let Some(q) = q {
            let mut quality = BTreeMap::new();
            let mut meta = QualityMeta {
                contact_model: q.metadata.contact_model.to_string(),
                torque_origin: q.metadata.torque_origin.to_string(),
                torque_length: q.metadata.torque_length,
                cone_edges: q.metadata.cone_edges,
                wrench_dim: q.metadata.wrench_dim,
                theta_max_rule: q.metadata.theta_max_rule.to_string(),
                degenerate: Vec::new(),
                clamped: Vec::new(),
                unnormalized: Vec::new(),
            };
            for m in Metric::ALL {
                let Some(mut v) = q.get(m) else { continue };
                let flags = q.flags(m);
                if flags.unnormalized {
                    match thresholds.apply(m, v) {
                        Some(n) => v = n?,
                        None => meta.unnormalized.push(m),
                    }
                }
                if flags.degenerate {
                    meta.degenerate.push(m);
                }
                if flags.clamped {
                    meta.clamped.push(m);
                }
                quality.insert(m, v);
            }
            if q.get(Metric::QD2).is_none() {
                summary.missing_q_d2.push(r.grasp_id.clone());
            }
            summary.clamps.record(q);
            summary.computed += 1;
            r.quality = Some(quality);
            r.quality_meta = Some(meta);
        }
        records.push(r);
    }
    summary.thresholds = thresholds;
    Ok((ds.with_records(records), summary))
}

fn print_summary(s: &ComputeSummary, total: usize) {
    eprintln!("records: {total}, computed: {}, passed through: {}, failed: {}", s.computed, s.passed_through.len(), s.failed.len());
    if !s.passed_through.is_empty() {
        log::warn!("{} record(s) already had quality vectors and were passed through unchanged", s.passed_through.len());
    }
    for (id, e) in &s.failed {
        eprintln!("  failed {id}: {e}");
    }
    if !s.missing_q_d2.is_empty() {
        eprintln!("q_d2 missing (no hand Jacobian): {} record(s)", s.missing_q_d2.len());
    }
    let clamps: Vec<String> = Metric::ALL.iter().map(|&m| format!("{} {}", m.name(), s.clamps.get(m))).collect();
    eprintln!("clamped: {}", clamps.join(", "));
    for (m, lo, hi) in s.thresholds.iter() {
        let src = if s.calibrated.contains(&m) { "calibrated" } else { "supplied" };
        eprintln!("{} range [{lo}, {hi}] ({src})", m.name());
    }
}

pub fn run(args: &ComputeArgs, cfg: &RunConfig) -> Result<()> {
    require_file(&args.input)?;
    let objects_path = args.objects.as_ref().or(cfg.objects.as_ref());
    let thresholds_path = args.thresholds.as_ref().or(cfg.thresholds.as_ref());
    for p in objects_path.into_iter().chain(thresholds_path) {
        require_file(p)?;
    }
    require_output(&args.output)?;
    if let Some(p) = &args.thresholds_out {
        require_output(p)?;
    }

    let grasp_cfg = GraspConfig {
        cone_edges: args.cone_edges.unwrap_or(cfg.cone_edges),
        torque_scale: match &args.torque_scale {
            Some(s) => parse_torque_scale(s)?,
            None => cfg.torque_scale,
        },
        wrench_space: WrenchSpace::Full,
    };
    if grasp_cfg.cone_edges < 3 {
        bail!("--cone-edges must be at least 3");
    }
    let ds = load_dataset(&args.input, DatasetFormat::from_path(&args.input))
        .with_context(|| format!("loading {}", args.input.display()))?;
    let objects = objects_path
        .map(|p| load_objects(p).with_context(|| format!("loading objects {}", p.display())))
        .transpose()?;
    let supplied = match thresholds_path {
        Some(p) => Thresholds::parse(&read_text(p)?).with_context(|| format!("parsing thresholds {}", p.display()))?,
        None => Thresholds::new(),
    };

    let (out, summary) = compute_dataset(&ds, objects.as_ref(), &grasp_cfg, &supplied)?;
    print_summary(&summary, ds.len());
    if cfg.strict && !summary.failed.is_empty() {
        let ids: Vec<&str> = summary.failed.iter().map(|(id, _)| id.as_str()).collect();
        bail!("{} record(s) failed: {}", ids.len(), ids.join(", "));
    }

    write_atomic(&args.output, to_json_lines(&out)?.as_bytes())?;
    if let Some(p) = &args.thresholds_out {
        let source = if summary.calibrated.is_empty() {
            "supplied".to_string()
        } else {
            let names: Vec<&str> = summary.calibrated.iter().map(|m| m.name()).collect();
            format!("{} calibrated from {} ({} records)", names.join(", "), display_name(&args.input), summary.computed)
        };
        let header = vec![format!("graspq thresholds: {source}"), format!("seed {}", cfg.seed)];
        write_atomic(p, summary.thresholds.to_text(&header).as_bytes())?;
    }
    Ok(())
}
