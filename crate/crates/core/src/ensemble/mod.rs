//! Tree ensembles: bagged random forests, extremely randomized trees,
//! discrete AdaBoost over stumps, and AdaBoost.R2 regression.

mod boost;
mod forest;

pub use boost::{
    adaboost_alpha, adaboost_normalizer, fit_adaboost_classifier, fit_adaboost_r2, weighted_median,
    BoostLoss, BoostParams, BoostState, BoostedClassifier, BoostedRegressor, ALPHA_EPSILON,
};
pub use forest::{
    bootstrap_sample, fit_extra_trees, fit_extra_trees_with, fit_random_forest, fit_random_forest_with, Execution,
    Forest, ForestKind, ForestParams,
};
