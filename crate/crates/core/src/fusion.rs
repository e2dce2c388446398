//! Stacking fusion: base-model predictions become the features of a
//! random-forest meta-learner. Also enumerates the fifteen compared models and
//! tunes ensemble sizes.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::ensemble::{
    fit_adaboost_r2, fit_extra_trees_with, fit_random_forest_with, BoostParams, Execution, Forest, ForestKind,
    ForestParams,
};
use crate::error::{Error, Result};
use crate::metrics::mse;
use crate::model::{Model, Predictor};
use crate::rng::child_rng;
use crate::tree::{fit_tree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseModelKind {
    Adaboost,
    DecisionTree,
    ExtraTrees,
    RandomForest,
}

impl BaseModelKind {
    pub const ALL: [BaseModelKind; 4] = [
        BaseModelKind::Adaboost,
        BaseModelKind::DecisionTree,
        BaseModelKind::ExtraTrees,
        BaseModelKind::RandomForest,
    ];

    /// Identifier used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            BaseModelKind::Adaboost => "adaboost",
            BaseModelKind::DecisionTree => "decision_tree",
            BaseModelKind::ExtraTrees => "extra_trees",
            BaseModelKind::RandomForest => "random_forest",
        }
    }

    /// Lower-case display name used in report rows.
    pub fn label(self) -> &'static str {
        match self {
            BaseModelKind::Adaboost => "adaboost",
            BaseModelKind::DecisionTree => "decision tree",
            BaseModelKind::ExtraTrees => "extra trees",
            BaseModelKind::RandomForest => "random forest",
        }
    }
}

impl fmt::Display for BaseModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for BaseModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaseModelKind::ALL
            .into_iter()
            .find(|k| k.key() == s.trim())
            .ok_or_else(|| Error::invalid(format!("unknown model `{s}`")))
    }
}

/// A single model or a fusion, identified by its sorted member set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub members: Vec<BaseModelKind>,
}

impl ModelDescriptor {
    pub fn new(mut members: Vec<BaseModelKind>) -> Result<Self> {
        members.sort();
        members.dedup();
        if members.is_empty() || members.len() > 4 {
            return Err(Error::invalid("a model has 1 to 4 distinct members"));
        }
        Ok(ModelDescriptor { members })
    }

    pub fn single(kind: BaseModelKind) -> Self {
        ModelDescriptor { members: vec![kind] }
    }

    pub fn is_fusion(&self) -> bool {
        self.members.len() > 1
    }

    /// Report name, e.g. `Adaboost-extra trees-random forest`.
    pub fn name(&self) -> String {
        let joined = self.members.iter().map(|k| k.label()).collect::<Vec<_>>().join("-");
        let mut chars = joined.chars();
        match chars.next() {
            Some(c) => c.to_uppercase().chain(chars).collect(),
            None => joined,
        }
    }

    /// Command-line form, e.g. `adaboost+random_forest`.
    pub fn key(&self) -> String {
        self.members.iter().map(|k| k.key()).collect::<Vec<_>>().join("+")
    }
}

impl FromStr for ModelDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let members = s.split('+').map(str::parse).collect::<Result<Vec<_>>>()?;
        let n = members.len();
        let d = ModelDescriptor::new(members)?;
        if d.members.len() != n {
            return Err(Error::invalid(format!("duplicate member in `{s}`")));
        }
        Ok(d)
    }
}

/// The four single models followed by the eleven fusions: pairs, then
/// triples, then the quadruple, each group in lexicographic member order.
pub fn enumerate_models() -> Vec<ModelDescriptor> {
    let kinds = BaseModelKind::ALL;
    let mut by_size: Vec<Vec<ModelDescriptor>> = vec![Vec::new(); 5];
    for mask in 1u32..16 {
        let members: Vec<BaseModelKind> = (0..4).filter(|b| mask & (1 << b) != 0).map(|b| kinds[b]).collect();
        by_size[members.len()].push(ModelDescriptor { members });
    }
    by_size
        .into_iter()
        .flat_map(|mut group| {
            group.sort_by(|a, b| a.members.cmp(&b.members));
            group
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageMode {
    /// Bases predict the rows they were trained on.
    #[default]
    InSample,
    /// Meta-train features come from k-fold out-of-fold predictions.
    OutOfFold,
}

impl FromStr for LeakageMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in-sample" | "in_sample" => Ok(LeakageMode::InSample),
            "oof" | "out-of-fold" | "out_of_fold" => Ok(LeakageMode::OutOfFold),
            _ => Err(Error::invalid(format!("unknown leakage mode `{s}`"))),
        }
    }
}

pub const OOF_FOLDS: usize = 5;
const FOLD_STREAM: u64 = 0xF01D;

/// Hyper-parameters of each base model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseSettings {
    pub adaboost: BoostParams,
    pub decision_tree: TreeParams,
    pub extra_trees: ForestParams,
    pub random_forest: ForestParams,
}

impl BaseSettings {
    /// 50 boosting rounds, 84 extra trees, 225 bagged trees.
    pub fn tuned_defaults(seed: u64) -> Self {
        BaseSettings {
            adaboost: BoostParams::new(50, seed),
            decision_tree: TreeParams::default(),
            extra_trees: ForestParams::extra_trees(84, seed),
            random_forest: ForestParams::random_forest(225, seed),
        }
    }

    pub fn n_estimators(&self, kind: BaseModelKind) -> Option<usize> {
        match kind {
            BaseModelKind::Adaboost => Some(self.adaboost.n_estimators),
            BaseModelKind::DecisionTree => None,
            BaseModelKind::ExtraTrees => Some(self.extra_trees.n_estimators),
            BaseModelKind::RandomForest => Some(self.random_forest.n_estimators),
        }
    }
}

pub fn fit_base(kind: BaseModelKind, train: &Dataset, settings: &BaseSettings, exec: Execution) -> Result<Model> {
    Ok(match kind {
        BaseModelKind::Adaboost => Model::Adaboost(fit_adaboost_r2(train, &settings.adaboost)?),
        BaseModelKind::DecisionTree => Model::DecisionTree(fit_tree(train, &settings.decision_tree)?),
        BaseModelKind::ExtraTrees => Model::ExtraTrees(fit_extra_trees_with(train, &settings.extra_trees, exec)?),
        BaseModelKind::RandomForest => {
            Model::RandomForest(fit_random_forest_with(train, &settings.random_forest, exec)?)
        }
    })
}

/// Column `j` of the result is member `j`'s predictions on `data`; targets
/// are copied through and the original features are dropped.
pub fn stack_features<P: Predictor>(members: &[(&str, &P)], data: &Dataset) -> Result<Dataset> {
    if members.is_empty() {
        return Err(Error::invalid("nothing to stack"));
    }
    let columns = members
        .iter()
        .map(|(_, m)| m.predict(data))
        .collect::<Result<Vec<_>>>()?;
    stack_columns(
        members.iter().map(|(n, _)| n.to_string()).collect(),
        &columns,
        data.targets(),
    )
}

pub(crate) fn stack_columns(names: Vec<String>, columns: &[Vec<f64>], targets: &[f64]) -> Result<Dataset> {
    let rows = (0..targets.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    Dataset::new(rows, targets.to_vec(), names)
}

/// Fold assignment for out-of-fold stacking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub n_folds: usize,
    pub fold_of_row: Vec<usize>,
}

impl FoldPlan {
    /// Shuffles rows with stream `(seed, FOLD_STREAM)` and deals them
    /// round-robin into `min(k, n)` folds.
    pub fn new(n: usize, k: usize, seed: u64) -> Result<Self> {
        if n < 2 || k < 2 {
            return Err(Error::invalid("out-of-fold stacking needs at least 2 rows and 2 folds"));
        }
        let k = k.min(n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut child_rng(seed, FOLD_STREAM));
        let mut fold_of_row = vec![0; n];
        for (pos, &i) in order.iter().enumerate() {
            fold_of_row[i] = pos % k;
        }
        Ok(FoldPlan { n_folds: k, fold_of_row })
    }

    pub fn train_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_row.len()).filter(|&i| self.fold_of_row[i] != fold).collect()
    }

    pub fn held_out_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_row.len()).filter(|&i| self.fold_of_row[i] == fold).collect()
    }
}

/// Predictions of base `kind` on every training row, each produced by a model
/// fitted on the other folds.
pub fn out_of_fold_predictions(
    kind: BaseModelKind,
    train: &Dataset,
    settings: &BaseSettings,
    plan: &FoldPlan,
    exec: Execution,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; train.n_samples()];
    for fold in 0..plan.n_folds {
        let model = fit_base(kind, &train.subset(&plan.train_rows(fold)), settings, exec)?;
        let held = plan.held_out_rows(fold);
        let preds = model.predict(&train.subset(&held))?;
        for (i, p) in held.into_iter().zip(preds) {
            out[i] = p;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionSpec {
    pub members: Vec<BaseModelKind>,
    pub meta_n_estimators: usize,
    pub meta_seed: u64,
    pub leakage: LeakageMode,
    /// Bootstrap the meta forest's training rows.
    pub meta_bootstrap: bool,
}

impl FusionSpec {
    pub fn new(members: Vec<BaseModelKind>, meta_n_estimators: usize, meta_seed: u64) -> Self {
        FusionSpec {
            members,
            meta_n_estimators,
            meta_seed,
            leakage: LeakageMode::InSample,
            meta_bootstrap: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut m = self.members.clone();
        m.sort();
        m.dedup();
        if m.len() != self.members.len() || !(2..=4).contains(&m.len()) {
            return Err(Error::invalid("a fusion has 2 to 4 distinct members"));
        }
        if self.meta_n_estimators < 1 {
            return Err(Error::invalid("meta_n_estimators must be >= 1"));
        }
        Ok(())
    }

    pub fn meta_params(&self) -> ForestParams {
        ForestParams {
            bootstrap: self.meta_bootstrap,
            ..ForestParams::random_forest(self.meta_n_estimators, self.meta_seed)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionModel {
    pub members: Vec<BaseModelKind>,
    pub bases: Vec<Model>,
    pub meta: Forest,
    pub leakage: LeakageMode,
    pub fold_plan: Option<FoldPlan>,
}

impl FusionModel {
    pub fn stack(&self, data: &Dataset) -> Result<Dataset> {
        let members: Vec<(&str, &Model)> = self.members.iter().map(|k| k.key()).zip(self.bases.iter()).collect();
        stack_features(&members, data)
    }
}

impl Predictor for FusionModel {
    fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        self.meta.predict(&self.stack(data)?)
    }
}

/// Meta-train features for `members`: in-sample predictions of the fitted
/// bases, or out-of-fold predictions.
fn meta_train_features(
    members: &[BaseModelKind],
    bases: &[Model],
    train: &Dataset,
    settings: &BaseSettings,
    leakage: LeakageMode,
    plan: Option<&FoldPlan>,
    exec: Execution,
) -> Result<Dataset> {
    let columns = match (leakage, plan) {
        (LeakageMode::OutOfFold, Some(plan)) => members
            .iter()
            .map(|&k| out_of_fold_predictions(k, train, settings, plan, exec))
            .collect::<Result<Vec<_>>>()?,
        _ => bases.iter().map(|b| b.predict(train)).collect::<Result<Vec<_>>>()?,
    };
    stack_columns(
        members.iter().map(|k| k.key().to_string()).collect(),
        &columns,
        train.targets(),
    )
}

/// Fits the members on `train`, builds meta-train features according to the
/// leakage mode, and fits the meta forest on them.
pub fn fit_fusion(train: &Dataset, settings: &BaseSettings, spec: &FusionSpec, exec: Execution) -> Result<FusionModel> {
    spec.validate()?;
    let bases = spec
        .members
        .iter()
        .map(|&k| fit_base(k, train, settings, exec))
        .collect::<Result<Vec<_>>>()?;
    let plan = match spec.leakage {
        LeakageMode::OutOfFold => Some(FoldPlan::new(train.n_samples(), OOF_FOLDS, spec.meta_seed)?),
        LeakageMode::InSample => None,
    };
    let meta_train = meta_train_features(&spec.members, &bases, train, settings, spec.leakage, plan.as_ref(), exec)?;
    let meta = fit_random_forest_with(&meta_train, &spec.meta_params(), exec)?;
    Ok(FusionModel {
        members: spec.members.clone(),
        bases,
        meta,
        leakage: spec.leakage,
        fold_plan: plan,
    })
}

/// Scores of every candidate and the first minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub grid: Vec<usize>,
    pub chosen: usize,
    pub scores: Vec<f64>,
}

fn argmin_first(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s < scores[best] {
            best = i;
        }
    }
    best
}

impl TuneResult {
    fn from_scores(grid: &[usize], scores: Vec<f64>) -> Self {
        let best = argmin_first(&scores);
        TuneResult {
            grid: grid.to_vec(),
            chosen: grid[best],
            scores,
        }
    }

    pub fn best_score(&self) -> f64 {
        self.scores[argmin_first(&self.scores)]
    }
}

/// Trains one model per grid value and keeps the one with the lowest MSE on
/// `eval` (first on ties).
pub fn tune_n_estimators<M, F>(family: F, grid: &[usize], train: &Dataset, eval: &Dataset) -> Result<TuneResult>
where
    M: Predictor,
    F: Fn(&Dataset, usize) -> Result<M>,
{
    if grid.is_empty() {
        return Err(Error::invalid("empty tuning grid"));
    }
    let scores = grid
        .iter()
        .map(|&n| mse(eval.targets(), &family(train, n)?.predict(eval)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(TuneResult::from_scores(grid, scores))
}

/// Same result as [`tune_n_estimators`] for a forest family, from a single
/// forest of the largest grid size: member `b` does not depend on the forest
/// size, so smaller forests are prefixes.
pub fn tune_forest_size(
    kind: ForestKind,
    params: &ForestParams,
    grid: &[usize],
    train: &Dataset,
    eval: &Dataset,
    exec: Execution,
) -> Result<(TuneResult, Forest)> {
    let max = *grid.iter().max().ok_or_else(|| Error::invalid("empty tuning grid"))?;
    let full_params = ForestParams {
        n_estimators: max,
        ..*params
    };
    let full = match kind {
        ForestKind::RandomForest => fit_random_forest_with(train, &full_params, exec)?,
        ForestKind::ExtraTrees => fit_extra_trees_with(train, &full_params, exec)?,
    };
    let staged = full.staged_predict(eval, grid)?;
    let scores = staged
        .iter()
        .map(|p| mse(eval.targets(), p))
        .collect::<Result<Vec<_>>>()?;
    let result = TuneResult::from_scores(grid, scores);
    let chosen = full.truncated(result.chosen)?;
    Ok((result, chosen))
}

/// Boosting counterpart of [`tune_forest_size`]: a run of `k` rounds is the
/// prefix of a longer run.
pub fn tune_boost_size(
    params: &BoostParams,
    grid: &[usize],
    train: &Dataset,
    eval: &Dataset,
) -> Result<(TuneResult, crate::ensemble::BoostedRegressor)> {
    let max = *grid.iter().max().ok_or_else(|| Error::invalid("empty tuning grid"))?;
    let full = fit_adaboost_r2(
        train,
        &BoostParams {
            n_estimators: max,
            ..*params
        },
    )?;
    let scores = grid
        .iter()
        .map(|&k| mse(eval.targets(), &full.truncated(k)?.predict(eval)?))
        .collect::<Result<Vec<_>>>()?;
    let result = TuneResult::from_scores(grid, scores);
    let chosen = full.truncated(result.chosen)?;
    Ok((result, chosen))
}

/// Picks the tree parameters with the lowest MSE on `eval` (first on ties).
pub fn tune_tree_params(
    candidates: &[TreeParams],
    train: &Dataset,
    eval: &Dataset,
) -> Result<(TreeParams, Vec<f64>)> {
    if candidates.is_empty() {
        return Err(Error::invalid("empty tree parameter grid"));
    }
    let scores = candidates
        .iter()
        .map(|p| mse(eval.targets(), &fit_tree(train, p)?.predict(eval)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((candidates[argmin_first(&scores)], scores))
}

/// Criterion × min_samples_split × min_samples_leaf grid for the single tree.
pub fn default_tree_grid() -> Vec<TreeParams> {
    let mut out = Vec::new();
    for criterion in [crate::tree::Criterion::SquaredError, crate::tree::Criterion::AbsoluteError] {
        for min_samples_split in [2, 5, 10, 20] {
            for min_samples_leaf in [1, 2, 4, 8] {
                out.push(TreeParams {
                    criterion,
                    max_depth: None,
                    min_samples_split,
                    min_samples_leaf,
                });
            }
        }
    }
    out
}

/// `{1..30} ∪ {35, 40, ..., 300}`.
pub fn default_grid() -> Vec<usize> {
    (1..=30).chain((35..=300).step_by(5)).collect()
}

/// Parses `1..30,35..300:5,400` style grids (ranges inclusive, optional step).
pub fn parse_grid(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::invalid(format!("bad grid `{s}`"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (range, step) = match part.split_once(':') {
            Some((r, st)) => (r, st.parse::<usize>().map_err(|_| bad())?),
            None => (part, 1),
        };
        if step == 0 {
            return Err(bad());
        }
        match range.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.parse().map_err(|_| bad())?;
                let b: usize = b.parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend((a..=b).step_by(step));
            }
            None => out.push(range.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    Ok(out)
}
