//! Binary and three-category labels from execution outcomes.

use std::collections::BTreeMap;

use crate::data::schema::{Dataset, GraspRecord, Outcome, TernaryLabel};
use crate::error::{Error, Result};

/// Majority vote over a record's executions; ties count as `Unstable`.
pub fn binary_label(record: &GraspRecord) -> Result<Outcome> {
    if record.executions.is_empty() {
        return Err(Error::InvalidInput(format!("record `{}` has no executions", record.grasp_id)));
    }
    let stable = record.outcomes().filter(|&o| o == Outcome::Stable).count();
    let unstable = record.executions.len() - stable;
    Ok(if stable > unstable { Outcome::Stable } else { Outcome::Unstable })
}

/// Robust if every outcome is stable, Futile if every outcome is unstable,
/// Fragile for any mixture.
pub fn ternary_label_of_outcomes(outcomes: impl IntoIterator<Item = Outcome>) -> Result<TernaryLabel> {
    let (mut stable, mut unstable) = (0usize, 0usize);
    for o in outcomes {
        match o {
            Outcome::Stable => stable += 1,
            Outcome::Unstable => unstable += 1,
        }
    }
    match (stable, unstable) {
        (0, 0) => Err(Error::InvalidInput("no execution outcomes".into())),
        (_, 0) => Ok(TernaryLabel::Robust),
        (0, _) => Ok(TernaryLabel::Futile),
        _ => Ok(TernaryLabel::Fragile),
    }
}

/// Label shared by every grasp of a cluster, from all of their executions.
pub fn ternary_label(cluster: &[&GraspRecord]) -> Result<TernaryLabel> {
    if cluster.is_empty() {
        return Err(Error::InvalidInput("empty cluster".into()));
    }
    if let Some(r) = cluster.iter().find(|r| r.executions.is_empty()) {
        return Err(Error::InvalidInput(format!("record `{}` has no executions", r.grasp_id)));
    }
    ternary_label_of_outcomes(cluster.iter().flat_map(|r| r.outcomes()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelSummary {
    /// Records dropped because they have no executions.
    pub excluded: Vec<String>,
    pub binary: BTreeMap<Outcome, usize>,
    pub ternary: BTreeMap<TernaryLabel, usize>,
}

/// Writes binary and ternary labels into every record with executions and
/// drops the rest. Record order is preserved.
pub fn label_dataset(ds: &Dataset) -> Result<(Dataset, LabelSummary)> {
    let mut summary = LabelSummary::default();
    let mut kept: Vec<GraspRecord> = Vec::with_capacity(ds.len());
    for r in &ds.records {
        if r.executions.is_empty() {
            summary.excluded.push(r.grasp_id.clone());
        } else {
            kept.push(r.clone());
        }
    }

    let mut clusters: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in kept.iter().enumerate() {
        clusters.entry(r.cluster_id.as_str()).or_default().push(i);
    }
    let mut ternary = vec![None; kept.len()];
    for members in clusters.values() {
        let refs: Vec<&GraspRecord> = members.iter().map(|&i| &kept[i]).collect();
        let label = ternary_label(&refs)?;
        for &i in members {
            ternary[i] = Some(label);
        }
    }
    for (r, t) in kept.iter_mut().zip(ternary) {
        let b = binary_label(r)?;
        r.binary_label = Some(b);
        r.ternary_label = t;
        *summary.binary.entry(b).or_default() += 1;
        *summary.ternary.entry(t.expect("every kept record is in a cluster")).or_default() += 1;
    }
    Ok((ds.with_records(kept), summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::schema::ExecutionRecord;
    use Outcome::{Stable as S, Unstable as U};

    fn record(id: &str, cluster: &str, outcomes: &[Outcome]) -> GraspRecord {
        GraspRecord {
            grasp_id: id.into(),
            cluster_id: cluster.into(),
            robot: "tombatossals".into(),
            object: "bottle".into(),
            contacts: vec![],
            jacobian: None,
            posture: None,
            quality: Some(Default::default()),
            quality_meta: None,
            executions: outcomes
                .iter()
                .map(|&outcome| ExecutionRecord { outcome, context: Default::default() })
                .collect(),
            binary_label: None,
            ternary_label: None,
        }
    }

    #[test]
    fn cluster_examples() {
        let r = record("a", "c", &[S, S, S]);
        assert_eq!(ternary_label(&[&r]).unwrap(), TernaryLabel::Robust);
        let r = record("a", "c", &[U, U]);
        assert_eq!(ternary_label(&[&r]).unwrap(), TernaryLabel::Futile);
        let (a, b) = (record("a", "c", &[S]), record("b", "c", &[U]));
        assert_eq!(ternary_label(&[&a, &b]).unwrap(), TernaryLabel::Fragile);
        assert!(ternary_label(&[]).is_err());
    }

    #[test]
    fn binary_majority_and_tie() {
        assert_eq!(binary_label(&record("a", "c", &[S])).unwrap(), S);
        assert_eq!(binary_label(&record("a", "c", &[U, U, S])).unwrap(), U);
        assert_eq!(binary_label(&record("a", "c", &[S, U])).unwrap(), U);
        assert!(binary_label(&record("a", "c", &[])).is_err());
    }

    #[test]
    fn binary_tie_rule_exhaustive() {
        // Every outcome sequence up to length 6: Stable iff strictly more
        // stable than unstable outcomes.
        for len in 1..=6usize {
            for mask in 0u32..(1 << len) {
                let outcomes: Vec<Outcome> = (0..len).map(|k| if mask >> k & 1 == 1 { S } else { U }).collect();
                let stable = mask.count_ones() as usize;
                let expected = if 2 * stable > len { S } else { U };
                assert_eq!(binary_label(&record("a", "c", &outcomes)).unwrap(), expected);
            }
        }
    }

    #[test]
    fn dataset_labeling_spreads_fragile_over_cluster() {
        let ds = Dataset::new(vec![
            record("a", "c1", &[S, S]),
            record("b", "c1", &[U]),
            record("c", "c2", &[S]),
            record("d", "c3", &[]),
        ]);
        let (out, summary) = label_dataset(&ds).unwrap();
        assert_eq!(summary.excluded, vec!["d".to_string()]);
        let labels: Vec<_> = out.records.iter().map(|r| (r.binary_label.unwrap(), r.ternary_label.unwrap())).collect();
        assert_eq!(
            labels,
            vec![(S, TernaryLabel::Fragile), (U, TernaryLabel::Fragile), (S, TernaryLabel::Robust)]
        );
        assert_eq!(summary.ternary[&TernaryLabel::Fragile], 2);
        assert_eq!(summary.binary[&S], 2);
    }
}
