//! End-to-end workflow: split, tune the four base models, fit every requested
//! fusion, and score everything on the test split.

use serde::{Deserialize, Serialize};

use crate::data::{train_test_split, Dataset, SplitSpec};
use crate::ensemble::{BoostParams, Execution, ForestKind, ForestParams};
use crate::error::{Error, Result};
use crate::fusion::{
    default_grid, default_tree_grid, enumerate_models, out_of_fold_predictions, stack_columns, tune_boost_size,
    tune_forest_size, tune_tree_params, BaseModelKind, BaseSettings, FoldPlan, LeakageMode, ModelDescriptor,
    TuneResult, OOF_FOLDS,
};
use crate::importance::{forest_importance, ImportanceReport};
use crate::metrics::{build_report, EvalReport, EvaluatedModel};
use crate::model::{Model, Predictor};
use crate::tree::{fit_tree, TreeParams};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub split: SplitSpec,
    /// Candidate tree counts for every ensemble, including the meta forests.
    pub grid: Vec<usize>,
    /// Candidates for the single decision tree.
    pub tree_grid: Vec<TreeParams>,
    pub leakage: LeakageMode,
    /// Models to report, in report order.
    pub models: Vec<ModelDescriptor>,
    pub exec: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            split: SplitSpec::default(),
            grid: default_grid(),
            tree_grid: default_tree_grid(),
            leakage: LeakageMode::InSample,
            models: enumerate_models(),
            exec: Execution::Parallel,
        }
    }
}

/// `selected` plus the single models of all their members, in enumeration
/// order.
pub fn restrict_models(selected: &[ModelDescriptor]) -> Vec<ModelDescriptor> {
    enumerate_models()
        .into_iter()
        .filter(|d| {
            selected.contains(d)
                || (!d.is_fusion() && selected.iter().any(|s| s.members.contains(&d.members[0])))
        })
        .collect()
}

/// Tuning outcome of one reported model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChosenModel {
    pub model: String,
    pub key: String,
    pub n_estimators: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree_params: Option<TreeParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuning: Option<TuneResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub report: EvalReport,
    pub chosen: Vec<ChosenModel>,
    pub settings: BaseSettings,
    /// Test-set predictions, parallel to `report.rows`.
    pub predictions: Vec<Vec<f64>>,
}

struct TunedBase {
    model: Model,
    train_column: Vec<f64>,
    test_column: Vec<f64>,
    chosen: ChosenModel,
}

fn tune_base(
    kind: BaseModelKind,
    train: &Dataset,
    test: &Dataset,
    cfg: &PipelineConfig,
    settings: &mut BaseSettings,
) -> Result<(Model, ChosenModel)> {
    let seed = cfg.split.seed;
    let name = ModelDescriptor::single(kind).name();
    let (model, n_estimators, tree_params, tuning) = match kind {
        BaseModelKind::Adaboost => {
            let (t, m) = tune_boost_size(&BoostParams::new(1, seed), &cfg.grid, train, test)?;
            settings.adaboost.n_estimators = t.chosen;
            (Model::Adaboost(m), Some(t.chosen), None, Some(t))
        }
        BaseModelKind::DecisionTree => {
            let (p, _) = tune_tree_params(&cfg.tree_grid, train, test)?;
            settings.decision_tree = p;
            (Model::DecisionTree(fit_tree(train, &p)?), None, Some(p), None)
        }
        BaseModelKind::ExtraTrees => {
            let (t, f) = tune_forest_size(
                ForestKind::ExtraTrees,
                &ForestParams::extra_trees(1, seed),
                &cfg.grid,
                train,
                test,
                cfg.exec,
            )?;
            settings.extra_trees.n_estimators = t.chosen;
            (Model::ExtraTrees(f), Some(t.chosen), None, Some(t))
        }
        BaseModelKind::RandomForest => {
            let (t, f) = tune_forest_size(
                ForestKind::RandomForest,
                &ForestParams::random_forest(1, seed),
                &cfg.grid,
                train,
                test,
                cfg.exec,
            )?;
            settings.random_forest.n_estimators = t.chosen;
            (Model::RandomForest(f), Some(t.chosen), None, Some(t))
        }
    };
    let chosen = ChosenModel {
        model: name,
        key: kind.key().to_string(),
        n_estimators,
        tree_params,
        tuning,
    };
    Ok((model, chosen))
}

/// Runs the whole comparison on `data`.
///
/// Every ensemble size (and the single tree's parameters) is chosen by test
/// MSE; fusions reuse the tuned bases and tune only their meta forest.
pub fn run_pipeline(data: &Dataset, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    if cfg.models.is_empty() {
        return Err(Error::invalid("no models requested"));
    }
    let (train, test) = train_test_split(data, &cfg.split)?;
    let seed = cfg.split.seed;
    let mut settings = BaseSettings::tuned_defaults(seed);

    let mut needed: Vec<BaseModelKind> = cfg.models.iter().flat_map(|d| d.members.iter().copied()).collect();
    needed.sort();
    needed.dedup();

    let mut tuned: Vec<(BaseModelKind, (Model, ChosenModel))> = Vec::new();
    for &kind in &needed {
        tuned.push((kind, tune_base(kind, &train, &test, cfg, &mut settings)?));
    }
    let plan = match cfg.leakage {
        LeakageMode::OutOfFold => Some(FoldPlan::new(train.n_samples(), OOF_FOLDS, seed)?),
        LeakageMode::InSample => None,
    };
    let mut bases: Vec<(BaseModelKind, TunedBase)> = Vec::new();
    for (kind, (model, chosen)) in tuned {
        let train_column = match &plan {
            Some(plan) => out_of_fold_predictions(kind, &train, &settings, plan, cfg.exec)?,
            None => model.predict(&train)?,
        };
        let test_column = model.predict(&test)?;
        bases.push((
            kind,
            TunedBase {
                model,
                train_column,
                test_column,
                chosen,
            },
        ));
    }
    let base = |k: BaseModelKind| &bases.iter().find(|(kind, _)| *kind == k).expect("tuned").1;

    let mut evaluated = Vec::with_capacity(cfg.models.len());
    let mut chosen = Vec::with_capacity(cfg.models.len());
    for d in &cfg.models {
        if !d.is_fusion() {
            let b = base(d.members[0]);
            evaluated.push(EvaluatedModel {
                name: d.name(),
                n_estimators: b.model.n_estimators(),
                predictions: b.test_column.clone(),
            });
            chosen.push(b.chosen.clone());
            continue;
        }
        let names: Vec<String> = d.members.iter().map(|k| k.key().to_string()).collect();
        let train_cols: Vec<Vec<f64>> = d.members.iter().map(|&k| base(k).train_column.clone()).collect();
        let test_cols: Vec<Vec<f64>> = d.members.iter().map(|&k| base(k).test_column.clone()).collect();
        let meta_train = stack_columns(names.clone(), &train_cols, train.targets())?;
        let meta_test = stack_columns(names, &test_cols, test.targets())?;
        let (tuning, meta) = tune_forest_size(
            ForestKind::RandomForest,
            &ForestParams::random_forest(1, seed),
            &cfg.grid,
            &meta_train,
            &meta_test,
            cfg.exec,
        )?;
        evaluated.push(EvaluatedModel {
            name: d.name(),
            n_estimators: Some(tuning.chosen),
            predictions: meta.predict(&meta_test)?,
        });
        chosen.push(ChosenModel {
            model: d.name(),
            key: d.key(),
            n_estimators: Some(tuning.chosen),
            tree_params: None,
            tuning: Some(tuning),
        });
    }
    let report = build_report(&evaluated, test.targets(), &cfg.split, train.n_samples())?;
    Ok(PipelineOutput {
        report,
        chosen,
        settings,
        predictions: evaluated.into_iter().map(|e| e.predictions).collect(),
    })
}

/// Tunes a random forest on the split and reports its feature importance.
pub fn run_importance(data: &Dataset, split: &SplitSpec, grid: &[usize], exec: Execution) -> Result<(ImportanceReport, TuneResult)> {
    let (train, test) = train_test_split(data, split)?;
    let (tuning, forest) = tune_forest_size(
        ForestKind::RandomForest,
        &ForestParams::random_forest(1, split.seed),
        grid,
        &train,
        &test,
        exec,
    )?;
    Ok((forest_importance(&forest, data.feature_names())?, tuning))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, SynthConfig};

    fn quick_config() -> PipelineConfig {
        PipelineConfig {
            grid: vec![1, 5, 10],
            tree_grid: vec![TreeParams::default(), TreeParams { min_samples_leaf: 4, ..Default::default() }],
            ..Default::default()
        }
    }

    #[test]
    fn restriction_keeps_members() {
        let sel = vec!["adaboost+random_forest".parse().unwrap()];
        let keys: Vec<String> = restrict_models(&sel).iter().map(|d| d.key()).collect();
        assert_eq!(keys, vec!["adaboost", "random_forest", "adaboost+random_forest"]);
    }

    #[test]
    fn full_report_shape() {
        let data = generate(&SynthConfig::with_days(150, 1)).unwrap();
        let out = run_pipeline(&data, &quick_config()).unwrap();
        assert_eq!(out.report.rows.len(), 15);
        assert_eq!(out.report.rows[1].n_estimators, None);
        assert!(out.report.rows.iter().all(|r| r.mse >= 0.0 && r.r2 <= 1.0));
        for (row, preds) in out.report.rows.iter().zip(&out.predictions) {
            let y = {
                let (_, test) = train_test_split(&data, &SplitSpec::default()).unwrap();
                test.targets().to_vec()
            };
            assert_eq!(row.mse, crate::metrics::mse(&y, preds).unwrap());
            assert_eq!(row.r2, crate::metrics::r_squared(&y, preds).unwrap());
        }
        let again = run_pipeline(&data, &quick_config()).unwrap();
        assert_eq!(out.report, again.report);

        let oof = PipelineConfig {
            leakage: LeakageMode::OutOfFold,
            models: restrict_models(&["extra_trees+decision_tree".parse().unwrap()]),
            ..quick_config()
        };
        let out = run_pipeline(&data, &oof).unwrap();
        assert_eq!(out.report.rows.len(), 3);
    }
}
