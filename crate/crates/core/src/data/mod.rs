//! Grasp record datasets: JSON-lines ingestion, execution labeling,
//! train/test splitting and feature extraction.

mod features;
mod io;
mod label;
mod schema;
mod split;

pub use features::{feature_matrix, FeatureMatrix, LabelEncoding, LabelScheme};
pub use io::{load_dataset, load_objects, parse_dataset, save_dataset, to_json_lines, DatasetFormat, ObjectCatalog};
pub use label::{binary_label, label_dataset, ternary_label, ternary_label_of_outcomes, LabelSummary};
pub use schema::{
    ContactRecord, Dataset, ExecutionContext, ExecutionRecord, GraspRecord, NormRecord, ObjectRecord, Outcome,
    PostureRecord, QualityMeta, TernaryLabel,
};
pub use split::{split, SplitMode, SplitOptions};
