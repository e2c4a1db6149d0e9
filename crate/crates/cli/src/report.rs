//! Run reports and the comparison tables built from them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use graspq::data::{LabelScheme, SplitMode};
use graspq::learn::{CellResult, ModelKind, ModelSpec};
use graspq::metrics::Metric;
use graspq::Error;
use serde::{Deserialize, Serialize};

use crate::args::ReportArgs;
use crate::io::{read_text, require_file, require_output, write_atomic};

pub const REPORT_SCHEMA: &str = "graspq-report/1";

pub const STD_NOTE: &str =
    "Std is the population standard deviation of the per-fold cross-validation accuracies on the training split";

/// Machine-readable result of one `train` or `evaluate` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub input: String,
    pub model: ModelKind,
    pub hyperparameters: ModelSpec,
    pub label_scheme: LabelScheme,
    pub classes: Vec<String>,
    pub metrics: Vec<Metric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_mode: Option<SplitMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_accuracy_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_accuracy_std: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_train: Option<usize>,
    pub test_accuracy: f64,
    pub n_test: usize,
    pub confusion: Vec<Vec<usize>>,
    pub std_definition: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<CellResult>,
}

fn schema_error(msg: String) -> anyhow::Error {
    anyhow!(Error::Schema(msg))
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parses a report; anything that is not a valid report of this schema
    /// version is a schema error.
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| schema_error(e.to_string()))?;
        let found = value.get("schema").and_then(|s| s.as_str()).unwrap_or("<missing>");
        if found != REPORT_SCHEMA {
            return Err(schema_error(format!("report schema `{found}`, expected `{REPORT_SCHEMA}`")));
        }
        let r: RunReport = serde_json::from_value(value).map_err(|e| schema_error(e.to_string()))?;
        r.validate().map_err(schema_error)?;
        Ok(r)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.hyperparameters.kind() != self.model {
            return Err("hyperparameters do not match the model kind".into());
        }
        if self.metrics.is_empty() {
            return Err("empty metric list".into());
        }
        if self.classes != self.label_scheme.encoding().classes {
            return Err(format!("classes {:?} do not match label scheme {}", self.classes, self.label_scheme));
        }
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.test_accuracy) {
            return Err(format!("test accuracy {} outside [0, 1]", self.test_accuracy));
        }
        match (self.train_accuracy_mean, self.train_accuracy_std) {
            (Some(m), Some(s)) if unit(m) && (0.0..=0.5).contains(&s) => Ok(()),
            (None, None) => Ok(()),
            _ => Err("train accuracy mean and std must both be present and within range".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum RowKey {
    Metric(Metric),
    Model(ModelKind, Vec<Metric>),
}

impl RowKey {
    fn of(r: &RunReport) -> Self {
        if r.metrics.len() == 1 {
            RowKey::Metric(r.metrics[0])
        } else {
            RowKey::Model(r.model, r.metrics.clone())
        }
    }

    fn label(&self, latex: bool) -> String {
        match self {
            RowKey::Metric(m) if latex => m.latex(),
            RowKey::Metric(m) => m.name().to_uppercase(),
            RowKey::Model(kind, metrics) if metrics.len() == Metric::ALL.len() => kind.title().to_string(),
            RowKey::Model(kind, metrics) => {
                let names: Vec<&str> = metrics.iter().map(|m| m.name()).collect();
                let names = names.join("+");
                if latex {
                    format!("{} ({})", kind.title(), names.replace('_', "\\_"))
                } else {
                    format!("{} ({names})", kind.title())
                }
            }
        }
    }
}

pub fn group_title(scheme: LabelScheme) -> &'static str {
    match scheme {
        LabelScheme::Binary => "Binary Classification",
        LabelScheme::Ternary => "3-categories scale",
        LabelScheme::Homogeneous => "Robust vs. Futile",
    }
}

/// Reports arranged as metric or classifier rows and one column group
/// (Train ± Std, Test) per label scheme.
#[derive(Debug)]
pub struct Table {
    groups: Vec<LabelScheme>,
    rows: BTreeMap<RowKey, BTreeMap<LabelScheme, RunReport>>,
}

impl Table {
    pub fn new(reports: Vec<RunReport>) -> Result<Self> {
        let mut rows: BTreeMap<RowKey, BTreeMap<LabelScheme, RunReport>> = BTreeMap::new();
        for r in reports {
            let key = RowKey::of(&r);
            let scheme = r.label_scheme;
            if rows.entry(key.clone()).or_default().insert(scheme, r).is_some() {
                return Err(schema_error(format!("two reports for row `{}` under {scheme}", key.label(false))));
            }
        }
        let mut groups: Vec<LabelScheme> =
            LabelScheme::ALL.into_iter().filter(|s| rows.values().any(|cells| cells.contains_key(s))).collect();
        groups.dedup();
        Ok(Self { groups, rows })
    }

    fn row_header(&self) -> &'static str {
        let metric_rows = self.rows.keys().filter(|k| matches!(k, RowKey::Metric(_))).count();
        if metric_rows == self.rows.len() {
            "Metric"
        } else if metric_rows == 0 {
            "Classifier"
        } else {
            "Features"
        }
    }

    fn cells(&self, key: &RowKey, pm: &str, missing: &str) -> Vec<String> {
        let mut out = Vec::new();
        for g in &self.groups {
            match self.rows[key].get(g) {
                Some(r) => {
                    out.push(match (r.train_accuracy_mean, r.train_accuracy_std) {
                        (Some(m), Some(s)) => format!("{m:.2}{pm}{s:.2}"),
                        _ => missing.to_string(),
                    });
                    out.push(format!("{:.2}", r.test_accuracy));
                }
                None => out.extend([missing.to_string(), missing.to_string()]),
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut header = vec![self.row_header().to_string()];
        let mut body: Vec<Vec<String>> = Vec::new();
        for _ in &self.groups {
            header.extend(["Train ± Std".to_string(), "Test".to_string()]);
        }
        for key in self.rows.keys() {
            let mut line = vec![key.label(false)];
            line.extend(self.cells(key, " ± ", "-"));
            body.push(line);
        }
        let width = |s: &str| s.chars().count();
        let mut widths: Vec<usize> = (0..header.len())
            .map(|c| body.iter().map(|row| width(&row[c])).chain([width(&header[c])]).max().unwrap_or(0))
            .collect();
        for (i, g) in self.groups.iter().enumerate() {
            let (a, b) = (1 + 2 * i, 2 + 2 * i);
            let need = width(group_title(*g));
            if widths[a] + 3 + widths[b] < need {
                widths[b] = need - 3 - widths[a];
            }
        }
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - width(s)));
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| pad(c, w)).collect();
            parts.join(" | ").trim_end().to_string()
        };

        let mut s = String::new();
        let _ = writeln!(s, "# {STD_NOTE}");
        let mut groups_line = vec![String::new()];
        let mut group_widths = vec![widths[0]];
        for (i, g) in self.groups.iter().enumerate() {
            groups_line.push(group_title(*g).to_string());
            group_widths.push(widths[1 + 2 * i] + 3 + widths[2 + 2 * i]);
        }
        let parts: Vec<String> = groups_line.iter().zip(&group_widths).map(|(c, &w)| pad(c, w)).collect();
        let _ = writeln!(s, "{}", parts.join(" | ").trim_end());
        let _ = writeln!(s, "{}", line(&header));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        let _ = writeln!(s, "{}", rule.join("-+-"));
        for row in &body {
            let _ = writeln!(s, "{}", line(row));
        }
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "% {}", STD_NOTE);
        let cols: String = self.groups.iter().map(|_| "|ll").collect();
        let _ = writeln!(s, "\\begin{{tabular}}{{l{cols}}}");
        let _ = writeln!(s, "\\hline");
        let titles: Vec<String> = self
            .groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let align = if i + 1 == self.groups.len() { "c" } else { "c|" };
                format!("\\multicolumn{{2}}{{{align}}}{{{}}}", group_title(*g))
            })
            .collect();
        let _ = writeln!(s, " & {}\\\\", titles.join(" & "));
        let sub: Vec<&str> = self.groups.iter().flat_map(|_| ["Train $\\pm$ Std", "Test"]).collect();
        let _ = writeln!(s, "{} & {} \\\\ \\hline", self.row_header(), sub.join(" & "));
        let n = self.rows.len();
        for (i, key) in self.rows.keys().enumerate() {
            let cells = self.cells(key, " $\\pm$ ", "--");
            let end = if i + 1 == n { " \\\\ \\hline" } else { " \\\\" };
            let _ = writeln!(s, "{} & {}{end}", key.label(true), cells.join(" & "));
        }
        let _ = writeln!(s, "\\end{{tabular}}");
        s
    }

    /// One line per report with full-precision numbers.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "row",
            "label_scheme",
            "model",
            "metrics",
            "train_accuracy_mean",
            "train_accuracy_std",
            "test_accuracy",
            "n_train",
            "n_test",
            "seed",
        ])?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for (key, cells) in &self.rows {
            for g in &self.groups {
                let Some(r) = cells.get(g) else { continue };
                let metrics: Vec<&str> = r.metrics.iter().map(|m| m.name()).collect();
                w.write_record([
                    key.label(false),
                    g.name().to_string(),
                    r.model.name().to_string(),
                    metrics.join(";"),
                    opt(r.train_accuracy_mean.map(|v| v.to_string())),
                    opt(r.train_accuracy_std.map(|v| v.to_string())),
                    r.test_accuracy.to_string(),
                    opt(r.n_train.map(|v| v.to_string())),
                    r.n_test.to_string(),
                    r.seed.to_string(),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| anyhow!("csv: {e}"))?;
        Ok(String::from_utf8(bytes)?)
    }
}

pub fn load_report(path: &Path) -> Result<RunReport> {
    RunReport::parse(&read_text(path)?).with_context(|| format!("report {}", path.display()))
}

pub fn run(args: &ReportArgs) -> Result<()> {
    for p in &args.reports {
        require_file(p)?;
    }
    for p in [&args.output, &args.csv, &args.latex].into_iter().flatten() {
        require_output(p)?;
    }
    let reports = args.reports.iter().map(|p| load_report(p)).collect::<Result<Vec<_>>>()?;
    let table = Table::new(reports)?;
    let text = table.to_text();
    match &args.output {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let Some(p) = &args.csv {
        write_atomic(p, table.to_csv()?.as_bytes())?;
    }
    if let Some(p) = &args.latex {
        write_atomic(p, table.to_latex().as_bytes())?;
    }
    Ok(())
}
