//! Threshold normalization for metrics without a natural upper bound.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::scalar::Scalar;

/// `(raw - lo) / (hi - lo)` clamped to [0, 1].
pub fn normalize<T: Scalar>(raw: T, lo: T, hi: T) -> Result<T> {
    if !(hi > lo) {
        return Err(Error::InvalidThresholds { lo: lo.as_f64(), hi: hi.as_f64() });
    }
    Ok(((raw - lo) / (hi - lo)).max(T::zero()).min(T::one()))
}

/// Normalizes a raw smallest-singular-value score.
pub fn normalize_q_a1<T: Scalar>(raw: T, lo: T, hi: T) -> Result<T> {
    normalize(raw, lo, hi)
}

/// Per-metric `(lo, hi)` normalization bounds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Thresholds<T> {
    bounds: BTreeMap<Metric, (T, T)>,
}

impl<T: Scalar> Thresholds<T> {
    pub fn new() -> Self {
        Self { bounds: BTreeMap::new() }
    }

    pub fn set(&mut self, metric: Metric, lo: T, hi: T) -> Result<()> {
        if !(hi > lo) {
            return Err(Error::InvalidThresholds { lo: lo.as_f64(), hi: hi.as_f64() });
        }
        self.bounds.insert(metric, (lo, hi));
        Ok(())
    }

    pub fn get(&self, metric: Metric) -> Option<(T, T)> {
        self.bounds.get(&metric).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, T, T)> + '_ {
        self.bounds.iter().map(|(&m, &(lo, hi))| (m, lo, hi))
    }

    /// Applies the bounds for `metric`, or returns `None` if it has none.
    pub fn apply(&self, metric: Metric, raw: T) -> Option<Result<T>> {
        self.get(metric).map(|(lo, hi)| normalize(raw, lo, hi))
    }

    /// Dataset min/max bounds. A metric whose observed values are all equal
    /// gets `hi = lo + 1` so it normalizes to 0 instead of failing.
    pub fn calibrate(metric: Metric, values: &[T], into: &mut Self) {
        let finite = values.iter().copied().filter(|v| v.is_finite());
        let (lo, hi) = finite.fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo > hi {
            return;
        }
        let hi = if hi > lo {
            hi
        } else {
            log::warn!("{}: constant calibration value {lo}; using a unit range", metric.name());
            lo + T::one()
        };
        into.bounds.insert(metric, (lo, hi));
    }

    /// Parses `metric_name lo hi` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected `metric lo hi`, got {} fields", fields.len())));
            }
            let metric: Metric = fields[0].parse().map_err(|e: Error| err(e.to_string()))?;
            let num = |s: &str| -> Result<T> {
                let v: f64 = s.parse().map_err(|_| err(format!("`{s}` is not a number")))?;
                Ok(T::of(v))
            };
            let (lo, hi) = (num(fields[1])?, num(fields[2])?);
            out.set(metric, lo, hi).map_err(|e| err(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn to_text(&self, header: &[String]) -> String {
        let mut s = String::new();
        for line in header {
            let _ = writeln!(s, "# {line}");
        }
        for (m, lo, hi) in self.iter() {
            let _ = writeln!(s, "{} {} {}", m.name(), lo, hi);
        }
        s
    }
}
