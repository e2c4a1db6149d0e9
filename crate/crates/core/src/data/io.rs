use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::data::schema::{Dataset, GraspRecord, ObjectRecord};
use crate::error::{Error, Result};
use crate::grasp::ObjectModel;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DatasetFormat {
    /// One JSON object per line; blank lines are ignored.
    #[default]
    JsonLines,
    /// A single JSON array of records.
    JsonArray,
}

impl DatasetFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => DatasetFormat::JsonArray,
            _ => DatasetFormat::JsonLines,
        }
    }
}

fn check_record(record: &GraspRecord, line: usize, seen: &mut HashSet<String>) -> Result<()> {
    record.validate().map_err(|e| Error::Parse { line, message: e.to_string() })?;
    if !seen.insert(record.grasp_id.clone()) {
        return Err(Error::DuplicateId(record.grasp_id.clone()));
    }
    Ok(())
}

/// Parses and validates a dataset held in memory. Errors carry 1-based line
/// numbers (record indices for the array format).
pub fn parse_dataset(text: &str, format: DatasetFormat) -> Result<Dataset> {
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    match format {
        DatasetFormat::JsonLines => {
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let record: GraspRecord = serde_json::from_str(line)
                    .map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
                check_record(&record, i + 1, &mut seen)?;
                records.push(record);
            }
        }
        DatasetFormat::JsonArray => {
            if !text.trim().is_empty() {
                let all: Vec<GraspRecord> = serde_json::from_str(text)
                    .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
                for (i, record) in all.into_iter().enumerate() {
                    check_record(&record, i + 1, &mut seen)?;
                    records.push(record);
                }
            }
        }
    }
    Ok(Dataset::new(records))
}

pub fn load_dataset(path: impl AsRef<Path>, format: DatasetFormat) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut ds = parse_dataset(&text, format)?;
    ds.provenance = Some(path.display().to_string());
    Ok(ds)
}

pub fn to_json_lines(ds: &Dataset) -> Result<String> {
    let mut out = String::new();
    for r in &ds.records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_json_lines(ds)?)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectsFile {
    objects: Vec<ObjectRecord>,
}

/// Object models by name, as read from an objects file
/// (`{"objects": [ ... ]}`).
#[derive(Clone, Debug, Default)]
pub struct ObjectCatalog {
    records: Vec<ObjectRecord>,
    models: BTreeMap<String, Arc<ObjectModel<f64>>>,
}

impl ObjectCatalog {
    pub fn from_records(records: Vec<ObjectRecord>) -> Result<Self> {
        let mut models = BTreeMap::new();
        for r in &records {
            if models.insert(r.name.clone(), Arc::new(r.to_model()?)).is_some() {
                return Err(Error::Schema(format!("object `{}` defined twice", r.name)));
            }
        }
        Ok(Self { records, models })
    }

    pub fn get(&self, name: &str) -> Result<Arc<ObjectModel<f64>>> {
        self.models
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Schema(format!("unknown object `{name}`")))
    }

    pub fn records(&self) -> &[ObjectRecord] {
        &self.records
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ObjectsFile { objects: self.records.clone() };
        Ok(serde_json::to_string_pretty(&file)? + "\n")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ObjectsFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        Self::from_records(file.objects)
    }
}

pub fn load_objects(path: impl AsRef<Path>) -> Result<ObjectCatalog> {
    ObjectCatalog::parse(&fs::read_to_string(path)?)
}
