//! CART regression trees and the weighted decision stump used by discrete
//! AdaBoost.
//!
//! Candidate thresholds are midpoints between consecutive distinct sorted
//! feature values, samples with `x[feature] <= threshold` go left, and ties
//! in split quality are broken by lowest feature index, then smallest
//! threshold.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Relative tolerance under which two split scores are treated as tied.
pub(crate) const SCORE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Node impurity is the target variance; leaves predict the mean.
    #[default]
    SquaredError,
    /// Node impurity is the mean absolute deviation from the median; leaves
    /// predict the median.
    AbsoluteError,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub criterion: Criterion,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            criterion: Criterion::SquaredError,
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
        }
    }
}

impl TreeParams {
    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_samples_split < 2 {
            return Err(Error::invalid("min_samples_split must be >= 2"));
        }
        if self.min_samples_leaf < 1 {
            return Err(Error::invalid("min_samples_leaf must be >= 1"));
        }
        if self.max_depth == Some(0) {
            return Err(Error::invalid("max_depth must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        value: f64,
        count: usize,
        impurity: f64,
    },
    Internal {
        feature: usize,
        threshold: f64,
        value: f64,
        count: usize,
        impurity: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn count(&self) -> usize {
        match self {
            TreeNode::Leaf { count, .. } | TreeNode::Internal { count, .. } => *count,
        }
    }

    pub fn impurity(&self) -> f64 {
        match self {
            TreeNode::Leaf { impurity, .. } | TreeNode::Internal { impurity, .. } => *impurity,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            TreeNode::Leaf { value, .. } | TreeNode::Internal { value, .. } => *value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    root: TreeNode,
    n_features: usize,
    n_samples: usize,
}

/// A chosen split of a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// `impurity(node) - n_L/n * impurity(L) - n_R/n * impurity(R)`.
    pub impurity_decrease: f64,
}

/// Total order on f64 for the median heaps.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Running median and sum of absolute deviations from it.
#[derive(Default)]
struct MedianTracker {
    low: BinaryHeap<Key>,
    high: BinaryHeap<Reverse<Key>>,
    sum_low: f64,
    sum_high: f64,
}

impl MedianTracker {
    fn push(&mut self, y: f64) {
        if self.low.peek().is_none_or(|m| y <= m.0) {
            self.low.push(Key(y));
            self.sum_low += y;
        } else {
            self.high.push(Reverse(Key(y)));
            self.sum_high += y;
        }
        if self.low.len() > self.high.len() + 1 {
            let Key(v) = self.low.pop().unwrap();
            self.sum_low -= v;
            self.high.push(Reverse(Key(v)));
            self.sum_high += v;
        } else if self.high.len() > self.low.len() {
            let Reverse(Key(v)) = self.high.pop().unwrap();
            self.sum_high -= v;
            self.low.push(Key(v));
            self.sum_low += v;
        }
    }

    /// Sum of |y - median| over the pushed values.
    fn abs_dev_sum(&self) -> f64 {
        let Some(&Key(m)) = self.low.peek() else {
            return 0.0;
        };
        let dev = (self.sum_high - m * self.high.len() as f64) + (m * self.low.len() as f64 - self.sum_low);
        dev.max(0.0)
    }
}

pub(crate) fn mean(ys: &[f64]) -> f64 {
    ys.iter().sum::<f64>() / ys.len() as f64
}

pub(crate) fn median(ys: &[f64]) -> f64 {
    let mut v = ys.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub(crate) fn variance(ys: &[f64]) -> f64 {
    let m = mean(ys);
    ys.iter().map(|y| (y - m) * (y - m)).sum::<f64>() / ys.len() as f64
}

fn mean_abs_dev(ys: &[f64]) -> f64 {
    let m = median(ys);
    ys.iter().map(|y| (y - m).abs()).sum::<f64>() / ys.len() as f64
}

impl Criterion {
    pub fn impurity(self, ys: &[f64]) -> f64 {
        match self {
            Criterion::SquaredError => variance(ys),
            Criterion::AbsoluteError => mean_abs_dev(ys),
        }
    }

    pub fn leaf_value(self, ys: &[f64]) -> f64 {
        match self {
            Criterion::SquaredError => mean(ys),
            Criterion::AbsoluteError => median(ys),
        }
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let t = lo + (hi - lo) / 2.0;
    // adjacent floats can round the midpoint up onto `hi`
    if t >= hi {
        lo
    } else {
        t
    }
}

/// Per-prefix impurity *sums* (n * impurity) for the first k sorted targets,
/// k = 0..=n.
fn prefix_impurity_sums(criterion: Criterion, ys: &[f64], center: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(ys.len() + 1);
    out.push(0.0);
    match criterion {
        Criterion::SquaredError => {
            let (mut s, mut ss) = (0.0, 0.0);
            for (k, &y) in ys.iter().enumerate() {
                let c = y - center;
                s += c;
                ss += c * c;
                out.push((ss - s * s / (k + 1) as f64).max(0.0));
            }
        }
        Criterion::AbsoluteError => {
            let mut t = MedianTracker::default();
            for &y in ys {
                t.push(y);
                out.push(t.abs_dev_sum());
            }
        }
    }
    out
}

/// Exhaustive CART split search over the rows in `indices`.
///
/// Returns `None` when targets are constant or no candidate leaves at least
/// `min_samples_leaf` rows on each side with a positive impurity decrease.
pub fn best_split(data: &Dataset, indices: &[usize], params: &TreeParams) -> Option<Split> {
    let n = indices.len();
    if n < 2 * params.min_samples_leaf || n < 2 {
        return None;
    }
    let ys: Vec<f64> = indices.iter().map(|&i| data.targets()[i]).collect();
    if ys.iter().all(|&y| y == ys[0]) {
        return None;
    }
    let parent = params.criterion.impurity(&ys);
    let center = mean(&ys);
    let nf = n as f64;
    let tol = SCORE_TOL * parent;
    let min_leaf = params.min_samples_leaf;

    let mut best: Option<Split> = None;
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n);
    for feature in 0..data.n_features() {
        pairs.clear();
        pairs.extend(indices.iter().map(|&i| (data.value(i, feature), data.targets()[i])));
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs[0].0 == pairs[n - 1].0 {
            continue;
        }
        let sorted_y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let left = prefix_impurity_sums(params.criterion, &sorted_y, center);
        let rev: Vec<f64> = sorted_y.iter().rev().copied().collect();
        let right = prefix_impurity_sums(params.criterion, &rev, center);
        for k in min_leaf..=(n - min_leaf) {
            if pairs[k - 1].0 == pairs[k].0 {
                continue;
            }
            let decrease = parent - (left[k] + right[n - k]) / nf;
            let better = match best {
                None => decrease > tol,
                Some(b) => decrease > b.impurity_decrease + tol,
            };
            if better {
                best = Some(Split {
                    feature,
                    threshold: midpoint(pairs[k - 1].0, pairs[k].0),
                    impurity_decrease: decrease,
                });
            }
        }
    }
    best
}

/// Extremely randomized split: one uniform threshold per non-constant
/// feature drawn from the open interval `(min, max)` of its node values; the
/// legal candidate with the largest impurity decrease wins.
pub(crate) fn random_split(
    data: &Dataset,
    indices: &[usize],
    params: &TreeParams,
    rng: &mut Rng,
) -> Option<Split> {
    let n = indices.len();
    if n < 2 * params.min_samples_leaf || n < 2 {
        return None;
    }
    let ys: Vec<f64> = indices.iter().map(|&i| data.targets()[i]).collect();
    if ys.iter().all(|&y| y == ys[0]) {
        return None;
    }
    let parent = params.criterion.impurity(&ys);
    let tol = SCORE_TOL * parent;
    let mut best: Option<Split> = None;
    let mut left_y = Vec::with_capacity(n);
    let mut right_y = Vec::with_capacity(n);
    for feature in 0..data.n_features() {
        let (lo, hi) = indices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            let v = data.value(i, feature);
            (lo.min(v), hi.max(v))
        });
        if lo >= hi {
            continue;
        }
        let mut threshold = rng.random_range(lo..hi);
        while threshold <= lo {
            threshold = rng.random_range(lo..hi);
        }
        left_y.clear();
        right_y.clear();
        for (&i, &y) in indices.iter().zip(&ys) {
            if data.value(i, feature) <= threshold {
                left_y.push(y);
            } else {
                right_y.push(y);
            }
        }
        if left_y.len() < params.min_samples_leaf || right_y.len() < params.min_samples_leaf {
            continue;
        }
        let decrease = parent
            - (left_y.len() as f64 * params.criterion.impurity(&left_y)
                + right_y.len() as f64 * params.criterion.impurity(&right_y))
                / n as f64;
        if best.is_none_or(|b| decrease > b.impurity_decrease + tol) {
            best = Some(Split {
                feature,
                threshold,
                impurity_decrease: decrease,
            });
        }
    }
    best
}

/// How internal nodes choose their split.
pub(crate) enum Splitter<'a> {
    Best,
    Random(&'a mut Rng),
}

pub(crate) fn grow(
    data: &Dataset,
    indices: &mut [usize],
    params: &TreeParams,
    splitter: &mut Splitter<'_>,
) -> RegressionTree {
    let root = grow_node(data, indices, 0, params, splitter);
    RegressionTree {
        root,
        n_features: data.n_features(),
        n_samples: indices.len(),
    }
}

fn grow_node(
    data: &Dataset,
    indices: &mut [usize],
    depth: usize,
    params: &TreeParams,
    splitter: &mut Splitter<'_>,
) -> TreeNode {
    let ys: Vec<f64> = indices.iter().map(|&i| data.targets()[i]).collect();
    let value = params.criterion.leaf_value(&ys);
    let impurity = params.criterion.impurity(&ys);
    let count = indices.len();
    let leaf = TreeNode::Leaf {
        value,
        count,
        impurity,
    };
    if count < params.min_samples_split || params.max_depth.is_some_and(|d| depth >= d) {
        return leaf;
    }
    let split = match splitter {
        Splitter::Best => best_split(data, indices, params),
        Splitter::Random(rng) => random_split(data, indices, params, rng),
    };
    let Some(split) = split else {
        return leaf;
    };
    let mut k = 0;
    for i in 0..indices.len() {
        if data.value(indices[i], split.feature) <= split.threshold {
            indices.swap(i, k);
            k += 1;
        }
    }
    let (l, r) = indices.split_at_mut(k);
    let left = grow_node(data, l, depth + 1, params, splitter);
    let right = grow_node(data, r, depth + 1, params, splitter);
    TreeNode::Internal {
        feature: split.feature,
        threshold: split.threshold,
        value,
        count,
        impurity,
        left: Box::new(left),
        right: Box::new(right),
    }
}

/// Fits a deterministic CART tree on the whole dataset.
pub fn fit_tree(train: &Dataset, params: &TreeParams) -> Result<RegressionTree> {
    params.validate()?;
    if train.n_samples() == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut idx: Vec<usize> = (0..train.n_samples()).collect();
    Ok(grow(train, &mut idx, params, &mut Splitter::Best))
}

impl RegressionTree {
    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Number of (possibly repeated) training rows at the root.
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { value, .. } => return *value,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn predict_row(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }

    pub fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.check_row(&vec![0.0; self.n_features])?;
        Ok(data.rows().map(|x| self.predict_unchecked(x)).collect())
    }

    /// Leaf nodes in left-to-right order.
    pub fn leaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            match node {
                TreeNode::Leaf { .. } => out.push(node),
                TreeNode::Internal { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        out
    }

    /// Every node in pre-order.
    pub fn nodes(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            out.push(node);
            if let TreeNode::Internal { left, right, .. } = node {
                stack.push(right);
                stack.push(left);
            }
        }
        out
    }

    pub fn depth(&self) -> usize {
        fn go(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Internal { left, right, .. } => 1 + go(left).max(go(right)),
            }
        }
        go(&self.root)
    }

    /// Indented text rendering for debugging.
    pub fn dump(&self, feature_names: &[String]) -> String {
        fn go(n: &TreeNode, names: &[String], indent: usize, out: &mut String) {
            let pad = "  ".repeat(indent);
            match n {
                TreeNode::Leaf { value, count, .. } => {
                    let _ = writeln!(out, "{pad}leaf value={value:.6} count={count}");
                }
                TreeNode::Internal {
                    feature,
                    threshold,
                    count,
                    left,
                    right,
                    ..
                } => {
                    let name = names.get(*feature).cloned().unwrap_or_else(|| format!("x{feature}"));
                    let _ = writeln!(out, "{pad}{name} <= {threshold:.6} (count={count})");
                    go(left, names, indent + 1, out);
                    go(right, names, indent + 1, out);
                }
            }
        }
        let mut out = String::new();
        go(&self.root, feature_names, 0, &mut out);
        out
    }
}

/// Depth-one classifier: predicts `polarity` when `x[feature] <= threshold`
/// and `-polarity` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedStump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: i8,
}

impl WeightedStump {
    pub fn predict_row(&self, x: &[f64]) -> i8 {
        if x[self.feature] <= self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}

/// Reads ±1 labels out of a dataset's targets.
pub fn labels_of(data: &Dataset) -> Result<Vec<i8>> {
    data.targets()
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            if y == 1.0 {
                Ok(1)
            } else if y == -1.0 {
                Ok(-1)
            } else {
                Err(Error::Validation {
                    row: i + 1,
                    message: format!("label {y} is not +1 or -1"),
                })
            }
        })
        .collect()
}

/// Weighted 0-1 error of `stump` on `data`.
pub fn stump_error(stump: &WeightedStump, data: &Dataset, labels: &[i8], weights: &[f64]) -> f64 {
    data.rows()
        .zip(labels)
        .zip(weights)
        .filter(|((x, &y), _)| stump.predict_row(x) != y)
        .map(|(_, w)| w)
        .sum()
}

/// Exhaustive weighted stump search.
///
/// Candidate thresholds per feature are the midpoints between consecutive
/// distinct values plus the feature maximum (a constant stump sending every
/// row left). Ties go to the lowest feature, then smallest threshold, then
/// polarity +1.
pub fn fit_stump(data: &Dataset, weights: &[f64]) -> Result<(WeightedStump, f64)> {
    let labels = labels_of(data)?;
    if weights.len() != data.n_samples() {
        return Err(Error::DimensionMismatch {
            expected: data.n_samples(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|&w| !(w >= 0.0)) {
        return Err(Error::invalid("stump weights must be non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("stump weights sum to {total}, expected 1")));
    }
    let n = data.n_samples();
    let mut best: Option<(WeightedStump, f64)> = None;
    let mut order: Vec<usize> = (0..n).collect();
    for feature in 0..data.n_features() {
        order.sort_by(|&a, &b| data.value(a, feature).total_cmp(&data.value(b, feature)));
        // weight of positives/negatives routed left so far
        let (mut left_pos, mut left_neg) = (0.0, 0.0);
        let total_pos: f64 = order.iter().filter(|&&i| labels[i] == 1).map(|&i| weights[i]).sum();
        let total_neg = total - total_pos;
        for k in 1..=n {
            let i = order[k - 1];
            if labels[i] == 1 {
                left_pos += weights[i];
            } else {
                left_neg += weights[i];
            }
            let threshold = if k == n {
                data.value(order[n - 1], feature)
            } else {
                let (a, b) = (data.value(i, feature), data.value(order[k], feature));
                if a == b {
                    continue;
                }
                midpoint(a, b)
            };
            // polarity +1: left predicts +1, right predicts -1
            let err_pos = left_neg + (total_pos - left_pos);
            let err_neg = left_pos + (total_neg - left_neg);
            for (polarity, err) in [(1i8, err_pos), (-1i8, err_neg)] {
                let err = err.max(0.0);
                if best.is_none_or(|(_, e)| err < e - SCORE_TOL) {
                    best = Some((
                        WeightedStump {
                            feature,
                            threshold,
                            polarity,
                        },
                        err,
                    ));
                }
            }
        }
    }
    best.ok_or(Error::EmptyDataset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_d(xs: &[f64], ys: &[f64]) -> Dataset {
        Dataset::from_rows(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec()).unwrap()
    }

    #[test]
    fn two_point_split() {
        let ds = one_d(&[0.0, 1.0], &[0.0, 1.0]);
        let s = best_split(&ds, &[0, 1], &TreeParams::default()).unwrap();
        assert_eq!(s.feature, 0);
        assert_eq!(s.threshold, 0.5);
        assert!((s.impurity_decrease - 0.25).abs() < 1e-15);
        let tree = fit_tree(&ds, &TreeParams::default()).unwrap();
        assert_eq!(tree.predict_row(&[0.2]).unwrap(), 0.0);
        assert_eq!(tree.predict_row(&[0.7]).unwrap(), 1.0);
        assert!(tree.predict_row(&[0.2, 1.0]).is_err());
    }

    #[test]
    fn constant_targets() {
        let ds = one_d(&[0.0, 1.0, 2.0], &[5.0, 5.0, 5.0]);
        assert!(best_split(&ds, &[0, 1, 2], &TreeParams::default()).is_none());
        let ds = one_d(&[0.0, 1.0, 2.0, 7.0], &[3.0; 4]);
        let t = fit_tree(&ds, &TreeParams::default()).unwrap();
        assert_eq!(t.leaves().len(), 1);
        assert_eq!(t.predict_row(&[100.0]).unwrap(), 3.0);
    }

    #[test]
    fn deep_tree_interpolates_distinct_points() {
        let ds = one_d(&[0.0, 1.0, 2.0, 3.0], &[4.0, -1.0, 2.5, 0.0]);
        let t = fit_tree(&ds, &TreeParams::default()).unwrap();
        assert_eq!(t.predict(&ds).unwrap(), ds.targets());
    }

    #[test]
    fn min_samples_leaf_is_respected() {
        let xs: Vec<f64> = (0..20).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x * 0.7).sin()).collect();
        let ds = one_d(&xs, &ys);
        let params = TreeParams {
            min_samples_leaf: 3,
            min_samples_split: 7,
            ..Default::default()
        };
        let t = fit_tree(&ds, &params).unwrap();
        assert!(t.leaves().iter().all(|l| l.count() >= 3));
        for n in t.nodes() {
            if matches!(n, TreeNode::Internal { .. }) {
                assert!(n.count() >= 7);
            }
        }
    }

    #[test]
    fn invalid_params() {
        let ds = one_d(&[0.0], &[1.0]);
        let bad = TreeParams {
            min_samples_split: 1,
            ..Default::default()
        };
        assert!(fit_tree(&ds, &bad).is_err());
        let bad = TreeParams {
            min_samples_leaf: 0,
            ..Default::default()
        };
        assert!(fit_tree(&ds, &bad).is_err());
    }

    #[test]
    fn absolute_error_uses_medians() {
        let ds = one_d(&[0.0, 1.0, 2.0, 10.0, 11.0, 12.0], &[1.0, 2.0, 30.0, 7.0, 8.0, 9.0]);
        let params = TreeParams {
            criterion: Criterion::AbsoluteError,
            max_depth: Some(1),
            ..Default::default()
        };
        let t = fit_tree(&ds, &params).unwrap();
        let TreeNode::Internal { threshold, left, right, .. } = t.root() else {
            panic!("expected a split");
        };
        // brute force over the five midpoints
        let idx: Vec<usize> = (0..6).collect();
        let mut best = (f64::NEG_INFINITY, 0.0);
        let xs = ds.column(0);
        for k in 1..6 {
            let thr = (xs[k - 1] + xs[k]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| xs[i] <= thr);
            let ly: Vec<f64> = l.iter().map(|&i| ds.targets()[i]).collect();
            let ry: Vec<f64> = r.iter().map(|&i| ds.targets()[i]).collect();
            let dec = mean_abs_dev(ds.targets())
                - (ly.len() as f64 * mean_abs_dev(&ly) + ry.len() as f64 * mean_abs_dev(&ry)) / 6.0;
            if dec > best.0 + 1e-12 {
                best = (dec, thr);
            }
        }
        assert_eq!(*threshold, best.1);
        assert_eq!(*threshold, 1.5);
        assert_eq!(left.value(), 1.5);
        assert_eq!(right.value(), median(&[30.0, 7.0, 8.0, 9.0]));
    }

    #[test]
    fn median_tracker_matches_direct() {
        let ys = [3.0, -1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let mut t = MedianTracker::default();
        for k in 0..ys.len() {
            t.push(ys[k]);
            let direct = mean_abs_dev(&ys[..=k]) * (k + 1) as f64;
            assert!((t.abs_dev_sum() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn stump_separable_and_degenerate() {
        let ds = one_d(&[0.0, 1.0, 2.0, 3.0], &[1.0, 1.0, -1.0, -1.0]);
        let (s, e) = fit_stump(&ds, &[0.25; 4]).unwrap();
        assert_eq!((s.feature, s.threshold, s.polarity), (0, 1.5, 1));
        assert_eq!(e, 0.0);

        let ds = Dataset::from_rows(
            vec![vec![2.0, 0.0], vec![0.0, 1.0], vec![1.0, 5.0]],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let (s, e) = fit_stump(&ds, &[1.0 / 3.0; 3]).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!((s.feature, s.threshold, s.polarity), (0, 2.0, 1));
        for x in ds.rows() {
            assert_eq!(s.predict_row(x), 1);
        }
    }

    #[test]
    fn stump_rejects_bad_input() {
        let ds = one_d(&[0.0, 1.0], &[1.0, 0.5]);
        assert!(fit_stump(&ds, &[0.5, 0.5]).is_err());
        let ds = one_d(&[0.0, 1.0], &[1.0, -1.0]);
        assert!(fit_stump(&ds, &[0.7, 0.7]).is_err());
        assert!(fit_stump(&ds, &[1.5, -0.5]).is_err());
    }

    #[test]
    fn dump_mentions_feature_names() {
        let ds = one_d(&[0.0, 1.0], &[0.0, 1.0]);
        let t = fit_tree(&ds, &TreeParams::default()).unwrap();
        let text = t.dump(&["air".to_string()]);
        assert!(text.starts_with("air <= 0.500000"));
        assert_eq!(text.lines().count(), 3);
    }
}
