//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use grainfusion::tree::TreeNode;
use grainfusion::Dataset;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Two-pass sum of squared deviations.
pub fn sse(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|y| (y - m) * (y - m)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSplit {
    pub feature: usize,
    pub threshold: f64,
    /// Reduction in mean squared error of the node.
    pub decrease: f64,
}

/// Every midpoint of every feature, scored by recomputing both children.
pub fn oracle_split(data: &Dataset, rows: &[usize], min_leaf: usize) -> Option<OracleSplit> {
    let n = rows.len();
    if n < 2 {
        return None;
    }
    let ys: Vec<f64> = rows.iter().map(|&i| data.targets()[i]).collect();
    if ys.iter().all(|&y| y == ys[0]) {
        return None;
    }
    let parent = sse(&ys);
    let tol = 1e-9 * parent / n as f64;
    let mut best: Option<OracleSplit> = None;
    for f in 0..data.n_features() {
        let mut vals: Vec<f64> = rows.iter().map(|&i| data.value(i, f)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| data.value(i, f) <= t);
            if l.len() < min_leaf || r.len() < min_leaf {
                continue;
            }
            let ly: Vec<f64> = l.iter().map(|&i| data.targets()[i]).collect();
            let ry: Vec<f64> = r.iter().map(|&i| data.targets()[i]).collect();
            let decrease = (parent - sse(&ly) - sse(&ry)) / n as f64;
            let floor = best.map_or(0.0, |b| b.decrease);
            if decrease > floor + tol {
                best = Some(OracleSplit {
                    feature: f,
                    threshold: t,
                    decrease,
                });
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleTree {
    Leaf(f64),
    Node {
        feature: usize,
        threshold: f64,
        left: Box<OracleTree>,
        right: Box<OracleTree>,
    },
}

pub fn oracle_tree(data: &Dataset, rows: &[usize], depth: usize, max_depth: usize, min_leaf: usize) -> OracleTree {
    let ys: Vec<f64> = rows.iter().map(|&i| data.targets()[i]).collect();
    let leaf = OracleTree::Leaf(mean(&ys));
    if depth >= max_depth || rows.len() < 2 {
        return leaf;
    }
    match oracle_split(data, rows, min_leaf) {
        None => leaf,
        Some(s) => {
            let (l, r): (Vec<usize>, Vec<usize>) =
                rows.iter().partition(|&&i| data.value(i, s.feature) <= s.threshold);
            OracleTree::Node {
                feature: s.feature,
                threshold: s.threshold,
                left: Box::new(oracle_tree(data, &l, depth + 1, max_depth, min_leaf)),
                right: Box::new(oracle_tree(data, &r, depth + 1, max_depth, min_leaf)),
            }
        }
    }
}

impl OracleTree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            OracleTree::Leaf(v) => *v,
            OracleTree::Node {
                feature,
                threshold,
                left,
                right,
            } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }
}

/// Same shape, same features, same thresholds.
pub fn same_structure(node: &TreeNode, oracle: &OracleTree) -> bool {
    match (node, oracle) {
        (TreeNode::Leaf { .. }, OracleTree::Leaf(_)) => true,
        (
            TreeNode::Internal {
                feature,
                threshold,
                left,
                right,
                ..
            },
            OracleTree::Node {
                feature: of,
                threshold: ot,
                left: ol,
                right: or,
            },
        ) => feature == of && threshold == ot && same_structure(left, ol) && same_structure(right, or),
        _ => false,
    }
}

/// Small dataset on a half-integer grid, so midpoints are exact and
/// duplicate feature values are common.
pub fn small_dataset(rng: &mut StdRng, max_n: usize, max_d: usize) -> Dataset {
    let n = rng.random_range(2..=max_n);
    let d = rng.random_range(1..=max_d);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| f64::from(rng.random_range(0..8u8)) * 0.5).collect())
        .collect();
    let ys: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
    Dataset::from_rows(rows, ys).unwrap()
}

/// Continuous features and targets.
pub fn noisy_dataset(seed: u64, n: usize, d: usize) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|x| x.iter().enumerate().map(|(j, v)| (j + 1) as f64 * v.sin()).sum::<f64>() + rng.random_range(-0.5..0.5))
        .collect();
    Dataset::from_rows(rows, ys).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Population variance, two-pass.
pub fn variance(v: &[f64]) -> f64 {
    sse(v) / v.len() as f64
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
