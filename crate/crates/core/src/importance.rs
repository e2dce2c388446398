//! Mean-decrease-impurity feature importance.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ensemble::Forest;
use crate::error::{Error, Result};
use crate::tree::{RegressionTree, TreeNode};

/// Per-feature sum of sample-weighted impurity decreases over the tree's
/// splits, weights relative to the root sample count.
pub fn tree_importance(tree: &RegressionTree) -> Vec<f64> {
    let mut out = vec![0.0; tree.n_features()];
    let total = tree.root().count() as f64;
    for node in tree.nodes() {
        if let TreeNode::Internal {
            feature,
            count,
            impurity,
            left,
            right,
            ..
        } = node
        {
            let decrease = (*count as f64 * impurity
                - left.count() as f64 * left.impurity()
                - right.count() as f64 * right.impurity())
                / total;
            out[*feature] += decrease;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub feature_names: Vec<String>,
    /// Normalized to sum to one.
    pub importances: Vec<f64>,
    /// Feature indices by descending importance, ties by index.
    pub ranking: Vec<usize>,
}

/// Averages raw tree importances over the forest and normalizes them.
pub fn forest_importance(forest: &Forest, feature_names: &[String]) -> Result<ImportanceReport> {
    let d = forest.n_features();
    if feature_names.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: feature_names.len(),
        });
    }
    let mut avg = vec![0.0; d];
    for tree in &forest.trees {
        for (a, v) in avg.iter_mut().zip(tree_importance(tree)) {
            *a += v;
        }
    }
    for a in &mut avg {
        // tiny negative round-off from impurity differences
        *a = (*a / forest.trees.len() as f64).max(0.0);
    }
    let total: f64 = avg.iter().sum();
    if total <= 0.0 {
        return Err(Error::NoSplits);
    }
    let importances: Vec<f64> = avg.iter().map(|v| v / total).collect();
    let mut ranking: Vec<usize> = (0..d).collect();
    ranking.sort_by(|&a, &b| importances[b].total_cmp(&importances[a]).then(a.cmp(&b)));
    Ok(ImportanceReport {
        feature_names: feature_names.to_vec(),
        importances,
        ranking,
    })
}

impl ImportanceReport {
    pub fn ranked_names(&self) -> Vec<&str> {
        self.ranking.iter().map(|&j| self.feature_names[j].as_str()).collect()
    }

    /// Horizontal bars in ranking order, `width` characters for the top feature.
    pub fn bar_chart(&self, width: usize) -> String {
        let name_w = self.feature_names.iter().map(String::len).max().unwrap_or(0);
        let top = self.ranking.first().map_or(1.0, |&j| self.importances[j]).max(f64::MIN_POSITIVE);
        let mut out = String::new();
        for &j in &self.ranking {
            let v = self.importances[j];
            let bar = "#".repeat(((v / top) * width as f64).round() as usize);
            let _ = writeln!(out, "{:<name_w$}  {:.4}  {}", self.feature_names[j], v, bar);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Entry<'a> {
            feature: &'a str,
            importance: f64,
        }
        let entries: Vec<Entry<'_>> = self
            .ranking
            .iter()
            .map(|&j| Entry {
                feature: &self.feature_names[j],
                importance: self.importances[j],
            })
            .collect();
        Ok(serde_json::to_string_pretty(&entries)? + "\n")
    }
}
