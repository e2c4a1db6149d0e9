use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{check_query, check_training, majority};
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` grows until leaves are pure or cannot be split.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: None, min_samples_leaf: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node<T> {
    /// Rows with `x[feature] <= threshold` go to `left`.
    Split { feature: usize, threshold: T, left: usize, right: usize },
    Leaf { class: usize, counts: Vec<usize> },
}

/// Binary classification tree stored as a node arena; the root is node 0
/// and children always have larger indices than their parent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeModel<T> {
    pub params: TreeParams,
    pub n_features: usize,
    pub n_classes: usize,
    pub nodes: Vec<Node<T>>,
}

struct Builder<'a, T> {
    x: &'a [Vec<T>],
    y: &'a [usize],
    params: TreeParams,
    n_classes: usize,
    nodes: Vec<Node<T>>,
}

/// Sum of squared class counts over the node size, as an exact fraction.
/// Maximizing `sq_l / n_l + sq_r / n_r` minimizes weighted Gini impurity.
#[derive(Clone, Copy)]
struct Purity {
    num: u128,
    den: u128,
}

impl Purity {
    fn of(sq_l: u128, n_l: u128, sq_r: u128, n_r: u128) -> Self {
        Purity { num: sq_l * n_r + sq_r * n_l, den: n_l * n_r }
    }

    fn cmp(&self, other: &Purity) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

fn sum_sq(counts: &[usize]) -> u128 {
    counts.iter().map(|&c| (c as u128) * (c as u128)).sum()
}

/// Threshold strictly between `a < b` that keeps `a` left and `b` right.
fn midpoint<T: Scalar>(a: T, b: T) -> T {
    let m = (a + b) / T::of(2.0);
    if m >= b || m < a {
        a
    } else {
        m
    }
}

impl<'a, T: Scalar> Builder<'a, T> {
    fn counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut c = vec![0usize; self.n_classes];
        for &i in rows {
            c[self.y[i]] += 1;
        }
        c
    }

    /// Best (feature, threshold) over every feature and every midpoint
    /// between consecutive distinct values, respecting `min_samples_leaf`.
    /// Earlier features and smaller thresholds win exact ties.
    fn best_split(&self, rows: &[usize]) -> Option<(usize, T)> {
        let total = self.counts(rows);
        let n = rows.len();
        let min_leaf = self.params.min_samples_leaf.max(1);
        let mut best: Option<(Purity, usize, T)> = None;
        let mut sorted = rows.to_vec();
        for f in 0..self.x[0].len() {
            sorted.sort_by(|&a, &b| self.x[a][f].partial_cmp(&self.x[b][f]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
            let mut left = vec![0usize; self.n_classes];
            for pos in 0..n - 1 {
                left[self.y[sorted[pos]]] += 1;
                let (a, b) = (self.x[sorted[pos]][f], self.x[sorted[pos + 1]][f]);
                let n_l = pos + 1;
                if a == b || n_l < min_leaf || n - n_l < min_leaf {
                    continue;
                }
                let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
                let p = Purity::of(sum_sq(&left), n_l as u128, sum_sq(&right), (n - n_l) as u128);
                if best.as_ref().is_none_or(|(q, _, _)| p.cmp(q) == Ordering::Greater) {
                    best = Some((p, f, midpoint(a, b)));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let counts = self.counts(&rows);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { class: majority(&counts), counts: counts.clone() });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_ok = self.params.max_depth.is_none_or(|d| depth < d);
        if pure || !depth_ok {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows.into_iter().partition(|&i| self.x[i][feature] <= threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }
}

/// Greedy CART with Gini impurity.
///
/// A node becomes a leaf when it is pure, sits at `max_depth`, or has no
/// threshold leaving `min_samples_leaf` rows on both sides. Otherwise it is
/// split even if no candidate lowers impurity. Leaves predict their majority
/// class, ties going to the smallest code.
pub fn tree_fit<T: Scalar>(features: &[Vec<T>], labels: &[usize], params: TreeParams) -> Result<TreeModel<T>> {
    let n_features = check_training(features, labels)?;
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut b = Builder { x: features, y: labels, params, n_classes, nodes: Vec::new() };
    b.grow((0..features.len()).collect(), 0);
    Ok(TreeModel { params, n_features, n_classes, nodes: b.nodes })
}

pub fn tree_predict<T: Scalar>(model: &TreeModel<T>, x: &[T]) -> Result<usize> {
    model.predict(x)
}

impl<T: Scalar> TreeModel<T> {
    pub fn predict(&self, x: &[T]) -> Result<usize> {
        check_query(x, self.n_features)?;
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf { class, .. } => return Ok(*class),
                Node::Split { feature, threshold, left, right } => {
                    id = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn root_split(&self) -> Option<(usize, T)> {
        match self.nodes.first()? {
            Node::Split { feature, threshold, .. } => Some((*feature, *threshold)),
            Node::Leaf { .. } => None,
        }
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn go<T>(nodes: &[Node<T>], id: usize) -> usize {
            match &nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        if self.nodes.is_empty() {
            0
        } else {
            go(&self.nodes, 0)
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }
}
