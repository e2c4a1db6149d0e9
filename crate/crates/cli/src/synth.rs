//! Seeded synthetic grasp datasets with known labels.
//!
//! Every grasp holds a sphere with three fingertip contacts. One scalar
//! "badness" level `s` in [0, 1] drives the geometry: contacts drift
//! toward the pole and lose symmetry, friction drops and the joints move
//! toward their limits (q_d1 = 1 - s^2). Clusters of three records share a
//! level and a ground-truth class:
//!
//! | class   | level band   | executions                  |
//! |---------|--------------|-----------------------------|
//! | robust  | 0.05 to 0.25 | all stable                  |
//! | fragile | 0.40 to 0.60 | alternating stable/unstable |
//! | futile  | 0.75 to 0.95 | all unstable                |
//!
//! The `noisy` preset adds Gaussian noise of standard deviation `sigma` to
//! each cluster's level, so the bands overlap as `sigma` grows.

use std::f64::consts::PI;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use graspq::data::{
    to_json_lines, ContactRecord, Dataset, ExecutionContext, ExecutionRecord, GraspRecord, NormRecord, ObjectCatalog,
    ObjectRecord, Outcome, PostureRecord,
};
use graspq::grasp::contact_frame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::args::SynthArgs;
use crate::io::{require_output, write_atomic};

pub const DEFAULT_N: usize = 600;
pub const CLUSTER_SIZE: usize = 3;
pub const RADIUS: f64 = 0.05;
pub const OBJECT: &str = "sphere_r50mm";
const COM: [f64; 3] = [0.1, -0.05, 0.3];
const N_JOINTS: usize = 2 * 3;
const BANDS: [(f64, f64); 3] = [(0.05, 0.25), (0.40, 0.60), (0.75, 0.95)];
const JITTER: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Preset {
    Ideal,
    Separable,
    Noisy(f64),
}

impl Preset {
    /// Accepts `ideal`, `separable`, `noisy` (with `sigma`) and `noisy(0.2)`.
    pub fn parse(name: &str, sigma: Option<f64>) -> Result<Self> {
        let name = name.trim();
        let preset = if let Some(inner) = name.strip_prefix("noisy(").and_then(|s| s.strip_suffix(')')) {
            let s = f64::from_str(inner.trim()).with_context(|| format!("bad sigma in `{name}`"))?;
            if sigma.is_some_and(|t| t != s) {
                bail!("--sigma {} conflicts with `{name}`", sigma.unwrap());
            }
            Preset::Noisy(s)
        } else {
            match name {
                "ideal" => Preset::Ideal,
                "separable" => Preset::Separable,
                "noisy" => Preset::Noisy(sigma.context("the noisy preset needs --sigma")?),
                _ => bail!("unknown preset `{name}` (ideal|separable|noisy)"),
            }
        };
        if let Preset::Noisy(s) = preset {
            if !(s >= 0.0 && s.is_finite()) {
                bail!("sigma must be a finite non-negative number, got {s}");
            }
        } else if sigma.is_some() {
            bail!("--sigma only applies to the noisy preset");
        }
        Ok(preset)
    }

    pub fn name(self) -> String {
        match self {
            Preset::Ideal => "ideal".into(),
            Preset::Separable => "separable".into(),
            Preset::Noisy(s) => format!("noisy({s})"),
        }
    }
}

pub fn objects() -> ObjectCatalog {
    let record = ObjectRecord {
        name: OBJECT.into(),
        center_of_mass: COM,
        surface_points: Vec::new(),
        mass: Some(0.2),
        norm: NormRecord { distance_max: Some(RADIUS), area_max: Some(PI * RADIUS * RADIUS), volume_max: None, theta_max: None },
    };
    ObjectCatalog::from_records(vec![record]).expect("built-in object is valid")
}

/// Geometry of one grasp at badness level `s`.
fn grasp_geometry(s: f64, phase: f64, signs: &[f64; N_JOINTS]) -> (Vec<ContactRecord>, Vec<Vec<f64>>, PostureRecord) {
    let latitude = 0.9 * s;
    let skew = [0.0, 0.4 * s, -0.2 * s];
    let mu = 0.8 - 0.5 * s;
    let mut contacts = Vec::with_capacity(3);
    for (k, dk) in skew.iter().enumerate() {
        let az = phase + 2.0 * PI * k as f64 / 3.0 + dk;
        let u = [latitude.cos() * az.cos(), latitude.cos() * az.sin(), latitude.sin()];
        let position = [0, 1, 2].map(|i| COM[i] + RADIUS * u[i]);
        contacts.push(ContactRecord { position, normal: u.map(|c| -c), mu });
    }
    let jacobian = finger_jacobian(&contacts);
    let y: Vec<f64> = signs.iter().map(|sg| 0.5 + 0.5 * s * sg).collect();
    let posture = PostureRecord { y, y_min: vec![0.0; N_JOINTS], y_max: vec![1.0; N_JOINTS], a: None };
    (contacts, jacobian, posture)
}

/// Two revolute joints per finger, reaching each contact from a palm below
/// the object; rows are expressed in the contact frames.
fn finger_jacobian(contacts: &[ContactRecord]) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; N_JOINTS]; 3 * contacts.len()];
    for (i, c) in contacts.iter().enumerate() {
        let p = [0, 1, 2].map(|k| c.position[k] - COM[k]);
        let t = (p[0] * p[0] + p[1] * p[1]).sqrt().max(1e-12);
        let axis = [-p[1] / t, p[0] / t, 0.0];
        let origins = [[p[0] * 1.6, p[1] * 1.6, -0.08], [p[0] * 1.3, p[1] * 1.3, -0.02]];
        let r = contact_frame(c.normal).expect("unit normal");
        for (j, o) in origins.iter().enumerate() {
            let lever = [p[0] - o[0], p[1] - o[1], p[2] - o[2]];
            let v = [
                axis[1] * lever[2] - axis[2] * lever[1],
                axis[2] * lever[0] - axis[0] * lever[2],
                axis[0] * lever[1] - axis[1] * lever[0],
            ];
            for k in 0..3 {
                m[3 * i + k][2 * i + j] = (0..3).map(|row| r[row][k] * v[row]).sum();
            }
        }
    }
    m
}

fn outcomes(class: usize, member: usize, cluster_len: usize) -> Vec<Outcome> {
    match class {
        0 => vec![Outcome::Stable],
        2 => vec![Outcome::Unstable],
        _ if cluster_len == 1 => vec![Outcome::Stable, Outcome::Unstable],
        _ if member.is_multiple_of(2) => vec![Outcome::Stable],
        _ => vec![Outcome::Unstable],
    }
}

pub fn generate(preset: Preset, n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let notes = format!("synth preset={} seed={seed}", preset.name());
    let mut records = Vec::with_capacity(n);
    let n_clusters = n.div_ceil(CLUSTER_SIZE);
    for c in 0..n_clusters {
        let len = CLUSTER_SIZE.min(n - c * CLUSTER_SIZE);
        let class = if preset == Preset::Ideal { 0 } else { c % 3 };
        let (lo, hi) = BANDS[class];
        let level = match preset {
            Preset::Ideal => 0.0,
            Preset::Separable => rng.random_range(lo..hi),
            Preset::Noisy(sigma) => {
                let base: f64 = rng.random_range(lo..hi);
                let noise = if sigma > 0.0 { Normal::new(0.0, sigma).expect("sigma >= 0").sample(&mut rng) } else { 0.0 };
                (base + noise).clamp(0.0, 1.0)
            }
        };
        let phase = if preset == Preset::Ideal { 0.0 } else { rng.random_range(0.0..2.0 * PI / 3.0) };
        let signs: [f64; N_JOINTS] = std::array::from_fn(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 });
        for member in 0..len {
            let s = if preset == Preset::Ideal {
                0.0
            } else {
                (level + rng.random_range(-JITTER..JITTER)).clamp(0.0, 1.0)
            };
            let (contacts, jacobian, posture) = grasp_geometry(s, phase, &signs);
            let executions = outcomes(class, member, len)
                .into_iter()
                .map(|outcome| ExecutionRecord {
                    outcome,
                    context: ExecutionContext {
                        object_variant: Some(format!("load-{member}")),
                        notes: Some(notes.clone()),
                        ..ExecutionContext::default()
                    },
                })
                .collect();
            records.push(GraspRecord {
                grasp_id: format!("g{c:05}-{member}"),
                cluster_id: format!("c{c:05}"),
                robot: "synthetic-3f".into(),
                object: OBJECT.into(),
                contacts,
                jacobian: Some(jacobian),
                posture: Some(posture),
                quality: None,
                quality_meta: None,
                executions,
                binary_label: None,
                ternary_label: None,
            });
        }
    }
    Dataset::new(records)
}

pub fn run(args: &SynthArgs, seed: u64) -> Result<()> {
    require_output(&args.output)?;
    require_output(&args.objects_out)?;
    let preset = Preset::parse(&args.preset, args.sigma)?;
    let n = args.n.unwrap_or(DEFAULT_N);
    let ds = generate(preset, n, seed);
    write_atomic(&args.output, to_json_lines(&ds)?.as_bytes())?;
    write_atomic(&args.objects_out, objects().to_json()?.as_bytes())?;
    eprintln!("wrote {n} {} record(s), seed {seed}", preset.name());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use graspq::data::label_dataset;
    use graspq::metrics::{q_b1, q_b3, q_d1};

    #[test]
    fn preset_names() {
        assert_eq!(Preset::parse("noisy(0.25)", None).unwrap(), Preset::Noisy(0.25));
        assert_eq!(Preset::parse("noisy", Some(0.1)).unwrap(), Preset::Noisy(0.1));
        assert!(Preset::parse("noisy", None).is_err());
        assert!(Preset::parse("separable", Some(0.1)).is_err());
        assert!(Preset::parse("noisy(-1)", None).is_err());
        assert!(Preset::parse("wobbly", None).is_err());
    }

    #[test]
    fn empty_and_partial_clusters() {
        assert!(generate(Preset::Separable, 0, 1).is_empty());
        let ds = generate(Preset::Separable, 7, 1);
        assert_eq!(ds.len(), 7);
        assert_eq!(ds.records[6].cluster_id, "c00002");
        let (labeled, summary) = label_dataset(&ds).unwrap();
        assert_eq!(labeled.len(), 7);
        assert!(summary.excluded.is_empty());
    }

    #[test]
    fn labels_follow_classes() {
        let (labeled, summary) = label_dataset(&generate(Preset::Separable, 600, 3)).unwrap();
        assert_eq!(summary.ternary.values().copied().collect::<Vec<_>>(), vec![201, 201, 198]);
        assert_eq!(labeled.len(), 600);
    }

    #[test]
    fn ideal_grasps_hit_the_optima() {
        let cat = objects();
        for r in &generate(Preset::Ideal, 6, 0).records {
            let g = r.to_grasp_instance(cat.get(&r.object).unwrap()).unwrap();
            assert!((q_b1(&g).unwrap() - 1.0f64).abs() < 1e-12);
            assert!((q_b3(&g).unwrap() - 1.0f64).abs() < 1e-12);
            assert_eq!(q_d1(&g.posture).unwrap(), 1.0);
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = to_json_lines(&generate(Preset::Noisy(0.2), 30, 5)).unwrap();
        let b = to_json_lines(&generate(Preset::Noisy(0.2), 30, 5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, to_json_lines(&generate(Preset::Noisy(0.2), 30, 6)).unwrap());
    }
}
