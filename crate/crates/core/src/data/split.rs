use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::features::LabelScheme;
use crate::data::schema::Dataset;
use crate::error::{Error, Result};

/// Unit of assignment when splitting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    /// Records are assigned independently.
    Record,
    /// All records sharing a `cluster_id` go to the same side.
    #[default]
    Cluster,
}

impl fmt::Display for SplitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitMode::Record => "record",
            SplitMode::Cluster => "cluster",
        })
    }
}

impl FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "record" => Ok(SplitMode::Record),
            "cluster" => Ok(SplitMode::Cluster),
            _ => Err(Error::InvalidInput(format!("unknown split mode `{s}` (record|cluster)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitOptions {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
    pub mode: SplitMode,
    /// Labels used for stratification.
    pub scheme: LabelScheme,
}

impl Default for SplitOptions {
    fn default() -> Self {
        Self { test_fraction: 0.25, seed: 0, stratified: true, mode: SplitMode::Cluster, scheme: LabelScheme::Ternary }
    }
}

/// Splits `ds` into (train, test), each keeping the original record order.
///
/// Units (records or clusters) are shuffled with a seeded ChaCha8 stream.
/// In stratified mode each class gets its share of test units by largest
/// remainder, so every class lands within one unit of its exact proportion
/// and on both sides. A cluster's class is its majority label, ties going to
/// the smaller class code.
pub fn split(ds: &Dataset, opts: &SplitOptions) -> Result<(Dataset, Dataset)> {
    let f = opts.test_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::InvalidInput(format!("test fraction {f} is not in (0, 1)")));
    }

    // Units in first-appearance order.
    let mut units: Vec<Vec<usize>> = Vec::new();
    match opts.mode {
        SplitMode::Record => units.extend((0..ds.len()).map(|i| vec![i])),
        SplitMode::Cluster => {
            let mut index: BTreeMap<&str, usize> = BTreeMap::new();
            for (i, r) in ds.records.iter().enumerate() {
                let u = *index.entry(r.cluster_id.as_str()).or_insert_with(|| {
                    units.push(Vec::new());
                    units.len() - 1
                });
                units[u].push(i);
            }
        }
    }
    if units.len() < 2 {
        return Err(Error::InvalidInput(format!("cannot split {} unit(s) into two non-empty sets", units.len())));
    }

    let groups: Vec<Vec<usize>> = if opts.stratified {
        let n_classes = opts.scheme.n_classes();
        let mut by_class = vec![Vec::new(); n_classes];
        for (u, members) in units.iter().enumerate() {
            let mut votes = vec![0usize; n_classes];
            for &i in members {
                let code = opts.scheme.code(&ds.records[i])?.ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "record `{}` is not covered by the {} scheme",
                        ds.records[i].grasp_id, opts.scheme
                    ))
                })?;
                votes[code] += 1;
            }
            let class = (0..n_classes).rev().max_by_key(|&c| votes[c]).expect("at least one class");
            by_class[class].push(u);
        }
        by_class.into_iter().filter(|g| !g.is_empty()).collect()
    } else {
        vec![(0..units.len()).collect()]
    };

    let counts: Vec<usize> = groups.iter().map(Vec::len).collect();
    let quotas = test_counts(&counts, f, opts.stratified)?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut in_test = vec![false; ds.len()];
    for (group, quota) in groups.into_iter().zip(quotas) {
        let mut group = group;
        group.shuffle(&mut rng);
        for &u in &group[..quota] {
            for &i in &units[u] {
                in_test[i] = true;
            }
        }
    }

    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (r, &t) in ds.records.iter().zip(&in_test) {
        if t { test.push(r.clone()) } else { train.push(r.clone()) }
    }
    Ok((ds.with_records(train), ds.with_records(test)))
}

/// Number of test units per group. Largest-remainder rounding of `f * count`
/// with the total fixed at `round(f * total)`, then each group clamped to
/// `[1, count - 1]`.
fn test_counts(counts: &[usize], f: f64, stratified: bool) -> Result<Vec<usize>> {
    if stratified {
        if let Some(c) = counts.iter().position(|&c| c < 2) {
            return Err(Error::Stratification(format!(
                "class group {c} has {} unit(s); at least 2 are needed to place one on each side",
                counts[c]
            )));
        }
    }
    let total: usize = counts.iter().sum();
    let target = (f * total as f64).round() as usize;
    let exact: Vec<f64> = counts.iter().map(|&c| f * c as f64).collect();
    let mut quotas: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    // Stable sort keeps group order among equal remainders.
    order.sort_by(|&a, &b| {
        let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        rb.partial_cmp(&ra).expect("finite remainders")
    });
    for &g in order.iter().take(target.saturating_sub(assigned)) {
        quotas[g] += 1;
    }
    for (q, &c) in quotas.iter_mut().zip(counts) {
        *q = (*q).clamp(1, c - 1);
    }
    Ok(quotas)
}
