use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{child_rng, derive_seed, Rng};
use crate::tree::{grow, RegressionTree, Splitter, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub bootstrap: bool,
    pub tree_params: TreeParams,
    pub seed: u64,
}

impl ForestParams {
    /// Bagged forest defaults: bootstrap on, fully grown trees.
    pub fn random_forest(n_estimators: usize, seed: u64) -> Self {
        ForestParams {
            n_estimators,
            bootstrap: true,
            tree_params: TreeParams::default(),
            seed,
        }
    }

    /// Extra-trees defaults: every tree sees the whole sample.
    pub fn extra_trees(n_estimators: usize, seed: u64) -> Self {
        ForestParams {
            bootstrap: false,
            ..Self::random_forest(n_estimators, seed)
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_estimators < 1 {
            return Err(Error::invalid("n_estimators must be >= 1"));
        }
        self.tree_params.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForestKind {
    RandomForest,
    ExtraTrees,
}

/// Whether member trees are trained on the rayon pool or one after another.
/// Both produce bit-identical forests.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub kind: ForestKind,
    pub params: ForestParams,
    pub trees: Vec<RegressionTree>,
    /// Seed of each member's random stream, `derive_seed(params.seed, b)`.
    pub tree_seeds: Vec<u64>,
}

/// `n` uniform draws from `0..n` with replacement.
pub fn bootstrap_sample(n: usize, rng: &mut Rng) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

fn fit_member(train: &Dataset, params: &ForestParams, kind: ForestKind, b: usize) -> RegressionTree {
    let mut rng = child_rng(params.seed, b as u64);
    let n = train.n_samples();
    let mut idx = if params.bootstrap {
        bootstrap_sample(n, &mut rng)
    } else {
        (0..n).collect()
    };
    match kind {
        ForestKind::RandomForest => grow(train, &mut idx, &params.tree_params, &mut Splitter::Best),
        ForestKind::ExtraTrees => grow(
            train,
            &mut idx,
            &params.tree_params,
            &mut Splitter::Random(&mut rng),
        ),
    }
}

fn fit_forest(train: &Dataset, params: &ForestParams, kind: ForestKind, exec: Execution) -> Result<Forest> {
    params.validate()?;
    if train.n_samples() == 0 {
        return Err(Error::EmptyDataset);
    }
    let trees = match exec {
        Execution::Parallel => (0..params.n_estimators)
            .into_par_iter()
            .map(|b| fit_member(train, params, kind, b))
            .collect(),
        Execution::Sequential => (0..params.n_estimators)
            .map(|b| fit_member(train, params, kind, b))
            .collect(),
    };
    Ok(Forest {
        kind,
        params: *params,
        trees,
        tree_seeds: (0..params.n_estimators)
            .map(|b| derive_seed(params.seed, b as u64))
            .collect(),
    })
}

/// Bagging: tree `b` is a CART tree grown on a bootstrap resample drawn from
/// stream `(seed, b)` (or on the full data when `bootstrap` is off).
pub fn fit_random_forest(train: &Dataset, params: &ForestParams) -> Result<Forest> {
    fit_random_forest_with(train, params, Execution::Parallel)
}

pub fn fit_random_forest_with(train: &Dataset, params: &ForestParams, exec: Execution) -> Result<Forest> {
    fit_forest(train, params, ForestKind::RandomForest, exec)
}

/// Extremely randomized trees: each node draws one threshold per feature
/// uniformly inside that feature's node range and keeps the best of them.
/// `params.bootstrap` is honored, though the usual setting is off.
pub fn fit_extra_trees(train: &Dataset, params: &ForestParams) -> Result<Forest> {
    fit_extra_trees_with(train, params, Execution::Parallel)
}

pub fn fit_extra_trees_with(train: &Dataset, params: &ForestParams, exec: Execution) -> Result<Forest> {
    fit_forest(train, params, ForestKind::ExtraTrees, exec)
}

impl Forest {
    pub fn n_features(&self) -> usize {
        self.trees[0].n_features()
    }

    pub fn predict_row(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }

    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_unchecked(x)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.check_row(&vec![0.0; self.n_features()])?;
        Ok(data.rows().map(|x| self.predict_unchecked(x)).collect())
    }

    /// Forest made of the first `k` members. Member `b` only depends on
    /// `(seed, b)`, so this equals a forest trained with `n_estimators = k`.
    pub fn truncated(&self, k: usize) -> Result<Forest> {
        if k < 1 || k > self.trees.len() {
            return Err(Error::invalid(format!(
                "cannot truncate a {}-tree forest to {k}",
                self.trees.len()
            )));
        }
        Ok(Forest {
            kind: self.kind,
            params: ForestParams {
                n_estimators: k,
                ..self.params
            },
            trees: self.trees[..k].to_vec(),
            tree_seeds: self.tree_seeds[..k].to_vec(),
        })
    }

    /// `out[k-1][i]` is the prediction on row `i` of the forest truncated to
    /// `k` members, for every `k` in `sizes`.
    pub fn staged_predict(&self, data: &Dataset, sizes: &[usize]) -> Result<Vec<Vec<f64>>> {
        data.check_row(&vec![0.0; self.n_features()])?;
        let mut sums = vec![0.0; data.n_samples()];
        let mut done = 0;
        let mut sorted: Vec<(usize, usize)> = sizes.iter().copied().enumerate().map(|(i, k)| (k, i)).collect();
        sorted.sort_unstable();
        let mut staged = vec![Vec::new(); sizes.len()];
        for (k, slot) in sorted {
            if k < 1 || k > self.trees.len() {
                return Err(Error::invalid(format!("stage {k} outside 1..={}", self.trees.len())));
            }
            for tree in &self.trees[done..k] {
                for (s, x) in sums.iter_mut().zip(data.rows()) {
                    *s += tree.predict_unchecked(x);
                }
            }
            done = k;
            staged[slot] = sums.iter().map(|s| s / k as f64).collect();
        }
        Ok(staged)
    }
}
