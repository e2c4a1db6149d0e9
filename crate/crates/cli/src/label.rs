use anyhow::{Context, Result};
use graspq::data::{label_dataset, load_dataset, to_json_lines, DatasetFormat, LabelSummary, Outcome, TernaryLabel};

use crate::args::LabelArgs;
use crate::io::{require_file, require_output, write_atomic};

pub fn histogram(s: &LabelSummary) -> String {
    let b = |o: Outcome| s.binary.get(&o).copied().unwrap_or(0);
    let t = |l: TernaryLabel| s.ternary.get(&l).copied().unwrap_or(0);
    format!(
        "binary:  stable {}  unstable {}\nternary: robust {}  fragile {}  futile {}\n",
        b(Outcome::Stable),
        b(Outcome::Unstable),
        t(TernaryLabel::Robust),
        t(TernaryLabel::Fragile),
        t(TernaryLabel::Futile),
    )
}

pub fn run(args: &LabelArgs) -> Result<()> {
    require_file(&args.input)?;
    require_output(&args.output)?;
    let ds = load_dataset(&args.input, DatasetFormat::from_path(&args.input))
        .with_context(|| format!("loading {}", args.input.display()))?;
    let (labeled, summary) = label_dataset(&ds)?;
    for id in &summary.excluded {
        log::warn!("record `{id}` has no executions; excluded");
    }
    eprintln!("labeled {} record(s), {} excluded", labeled.len(), summary.excluded.len());
    eprint!("{}", histogram(&summary));
    write_atomic(&args.output, to_json_lines(&labeled)?.as_bytes())
}
