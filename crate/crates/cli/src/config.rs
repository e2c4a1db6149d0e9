//! Run settings: built-in defaults, overridden by a TOML file, overridden
//! by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use graspq::data::{LabelScheme, SplitMode};
use graspq::grasp::TorqueScale;
use graspq::learn::{default_grid, ModelKind, ModelSpec, TieRule, TreeParams, DEFAULT_FOLDS};
use graspq::metrics::Metric;
use serde::Deserialize;

use crate::args::GlobalArgs;

/// Settings file layout. Every key is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub strict: Option<bool>,
    pub split_mode: Option<SplitMode>,
    pub label_scheme: Option<LabelScheme>,
    pub metrics: Option<MetricList>,
    pub model: Option<ModelKind>,
    pub folds: Option<usize>,
    pub test_fraction: Option<f64>,
    pub cone_edges: Option<usize>,
    pub torque_scale: Option<TorqueSetting>,
    pub thresholds: Option<PathBuf>,
    pub objects: Option<PathBuf>,
    pub grid: Option<GridConfig>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MetricList {
    Text(String),
    List(Vec<String>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum TorqueSetting {
    Length(f64),
    Text(String),
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default)]
    pub max_depth: Vec<Depth>,
    #[serde(default)]
    pub min_samples_leaf: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Depth {
    Limit(usize),
    Text(String),
}

impl Depth {
    fn resolve(&self) -> Result<Option<usize>> {
        match self {
            Depth::Limit(d) => Ok(Some(*d)),
            Depth::Text(s) if s == "inf" || s == "none" => Ok(None),
            Depth::Text(s) => s.parse().map(Some).with_context(|| format!("bad max_depth `{s}`")),
        }
    }
}

impl GridConfig {
    /// Parses `k=1,3,5` or `max_depth=2,inf;min_samples_leaf=1,2`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut out = GridConfig::default();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, values) = part.split_once('=').with_context(|| format!("grid entry `{part}` has no `=`"))?;
            let values = values.split(',').map(str::trim).filter(|v| !v.is_empty());
            match key.trim() {
                "k" => out.k = values.map(|v| v.parse().with_context(|| format!("bad k `{v}`"))).collect::<Result<_>>()?,
                "max_depth" => out.max_depth = values.map(|v| Depth::Text(v.to_string())).collect(),
                "min_samples_leaf" => {
                    out.min_samples_leaf = values
                        .map(|v| v.parse().with_context(|| format!("bad min_samples_leaf `{v}`")))
                        .collect::<Result<_>>()?
                }
                other => bail!("unknown grid key `{other}` (k, max_depth, min_samples_leaf)"),
            }
        }
        Ok(out)
    }

    /// Expands the override into cells for `kind`. Tree grids are
    /// depth-major; an unset axis takes the default grid's values.
    pub fn cells(&self, kind: ModelKind) -> Result<Vec<ModelSpec>> {
        match kind {
            ModelKind::Knn => {
                if !self.max_depth.is_empty() || !self.min_samples_leaf.is_empty() {
                    bail!("tree grid keys given for a knn model");
                }
                if self.k.is_empty() {
                    return Ok(default_grid(kind));
                }
                Ok(self.k.iter().map(|&k| ModelSpec::Knn { k, tie_rule: TieRule::default() }).collect())
            }
            ModelKind::Tree => {
                if !self.k.is_empty() {
                    bail!("grid key `k` given for a tree model");
                }
                let defaults = default_grid(kind);
                let axis = |f: fn(&TreeParams) -> Option<usize>| {
                    let mut v: Vec<Option<usize>> = Vec::new();
                    for s in &defaults {
                        if let ModelSpec::Tree(p) = s {
                            if !v.contains(&f(p)) {
                                v.push(f(p));
                            }
                        }
                    }
                    v
                };
                let depths = if self.max_depth.is_empty() {
                    axis(|p| p.max_depth)
                } else {
                    self.max_depth.iter().map(Depth::resolve).collect::<Result<_>>()?
                };
                let leaves: Vec<usize> = if self.min_samples_leaf.is_empty() {
                    axis(|p| Some(p.min_samples_leaf)).into_iter().flatten().collect()
                } else {
                    self.min_samples_leaf.clone()
                };
                Ok(depths
                    .iter()
                    .flat_map(|&max_depth| {
                        leaves.iter().map(move |&min_samples_leaf| ModelSpec::Tree(TreeParams { max_depth, min_samples_leaf }))
                    })
                    .collect())
            }
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub strict: bool,
    pub split_mode: SplitMode,
    pub label_scheme: LabelScheme,
    pub metrics: Vec<Metric>,
    pub model: ModelKind,
    pub folds: usize,
    pub test_fraction: f64,
    pub cone_edges: usize,
    pub torque_scale: TorqueScale<f64>,
    pub thresholds: Option<PathBuf>,
    pub objects: Option<PathBuf>,
    pub grid: Option<GridConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            strict: false,
            split_mode: SplitMode::default(),
            label_scheme: LabelScheme::Ternary,
            metrics: Metric::ALL.to_vec(),
            model: ModelKind::Tree,
            folds: DEFAULT_FOLDS,
            test_fraction: 0.25,
            cone_edges: 8,
            torque_scale: TorqueScale::ObjectDistanceMax,
            thresholds: None,
            objects: None,
            grid: None,
        }
    }
}

pub fn parse_metrics(list: &str) -> Result<Vec<Metric>> {
    if list.trim() == "all" {
        return Ok(Metric::ALL.to_vec());
    }
    let mut out: Vec<Metric> = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m: Metric = name.parse()?;
        if out.contains(&m) {
            bail!("metric `{name}` listed twice");
        }
        out.push(m);
    }
    if out.is_empty() {
        bail!("empty metric list");
    }
    Ok(out)
}

pub fn parse_torque_scale(s: &str) -> Result<TorqueScale<f64>> {
    if s == "distance-max" || s == "distance_max" {
        return Ok(TorqueScale::ObjectDistanceMax);
    }
    let rho: f64 = s.parse().with_context(|| format!("torque scale `{s}` is neither `distance-max` nor a length"))?;
    if !(rho > 0.0 && rho.is_finite()) {
        bail!("torque scale must be a positive length, got {rho}");
    }
    Ok(TorqueScale::Fixed(rho))
}

/// Paths in the config file are relative to the file itself.
fn rebase(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

pub fn load_file_config(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut cfg: FileConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    cfg.thresholds = cfg.thresholds.map(|p| rebase(base, p));
    cfg.objects = cfg.objects.map(|p| rebase(base, p));
    Ok(cfg)
}

impl RunConfig {
    /// Merges defaults, the optional config file and the global flags.
    pub fn resolve(global: &GlobalArgs) -> Result<Self> {
        let file = match &global.config {
            Some(p) => load_file_config(p)?,
            None => FileConfig::default(),
        };
        let mut cfg = RunConfig::default();
        cfg.apply_file(file)?;
        cfg.apply_flags(global)?;
        cfg.check()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, f: FileConfig) -> Result<()> {
        if let Some(v) = f.seed {
            self.seed = v;
        }
        if let Some(v) = f.strict {
            self.strict = v;
        }
        if let Some(v) = f.split_mode {
            self.split_mode = v;
        }
        if let Some(v) = f.label_scheme {
            self.label_scheme = v;
        }
        if let Some(v) = f.metrics {
            self.metrics = match v {
                MetricList::Text(s) => parse_metrics(&s)?,
                MetricList::List(l) => parse_metrics(&l.join(","))?,
            };
        }
        if let Some(v) = f.model {
            self.model = v;
        }
        if let Some(v) = f.folds {
            self.folds = v;
        }
        if let Some(v) = f.test_fraction {
            self.test_fraction = v;
        }
        if let Some(v) = f.cone_edges {
            self.cone_edges = v;
        }
        if let Some(v) = f.torque_scale {
            self.torque_scale = match v {
                TorqueSetting::Length(l) => parse_torque_scale(&l.to_string())?,
                TorqueSetting::Text(s) => parse_torque_scale(&s)?,
            };
        }
        self.thresholds = f.thresholds.or(self.thresholds.take());
        self.objects = f.objects.or(self.objects.take());
        self.grid = f.grid.or(self.grid.take());
        Ok(())
    }

    fn apply_flags(&mut self, g: &GlobalArgs) -> Result<()> {
        if let Some(v) = g.seed {
            self.seed = v;
        }
        if g.strict {
            self.strict = true;
        }
        if let Some(v) = g.split_mode {
            self.split_mode = v;
        }
        if let Some(v) = g.label_scheme {
            self.label_scheme = v;
        }
        if let Some(v) = &g.metrics {
            self.metrics = parse_metrics(v)?;
        }
        if let Some(v) = g.model {
            self.model = v;
        }
        if let Some(v) = g.folds {
            self.folds = v;
        }
        if let Some(v) = g.test_fraction {
            self.test_fraction = v;
        }
        Ok(())
    }

    pub fn check(&self) -> Result<()> {
        if self.folds < 2 {
            bail!("--folds must be at least 2, got {}", self.folds);
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            bail!("--test-fraction must be in (0, 1), got {}", self.test_fraction);
        }
        if self.cone_edges < 3 {
            bail!("cone_edges must be at least 3, got {}", self.cone_edges);
        }
        Ok(())
    }

    pub fn grid_cells(&self) -> Result<Vec<ModelSpec>> {
        match &self.grid {
            Some(g) => g.cells(self.model),
            None => Ok(default_grid(self.model)),
        }
    }
}
