//! A trained regressor of any kind, and its versioned on-disk form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::ensemble::{BoostedRegressor, Forest};
use crate::error::{Error, Result};
use crate::fusion::FusionModel;
use crate::tree::RegressionTree;

/// Anything that maps a dataset's rows to predictions.
pub trait Predictor {
    fn predict(&self, data: &Dataset) -> Result<Vec<f64>>;
}

impl Predictor for RegressionTree {
    fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        RegressionTree::predict(self, data)
    }
}

impl Predictor for Forest {
    fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        Forest::predict(self, data)
    }
}

impl Predictor for BoostedRegressor {
    fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        BoostedRegressor::predict(self, data)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Model {
    Adaboost(BoostedRegressor),
    DecisionTree(RegressionTree),
    ExtraTrees(Forest),
    RandomForest(Forest),
    Fusion(FusionModel),
}

impl Model {
    /// Tree count shown in reports; absent for a single tree.
    pub fn n_estimators(&self) -> Option<usize> {
        match self {
            Model::Adaboost(m) => Some(m.params.n_estimators),
            Model::DecisionTree(_) => None,
            Model::ExtraTrees(f) | Model::RandomForest(f) => Some(f.trees.len()),
            Model::Fusion(f) => Some(f.meta.trees.len()),
        }
    }
}

impl Predictor for Model {
    fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        match self {
            Model::Adaboost(m) => m.predict(data),
            Model::DecisionTree(t) => t.predict(data),
            Model::ExtraTrees(f) | Model::RandomForest(f) => f.predict(data),
            Model::Fusion(f) => f.predict(data),
        }
    }
}

pub const MODEL_FORMAT: &str = "grainfusion-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// JSON envelope written by `save` and read by `load`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub format: String,
    pub version: u32,
    pub feature_names: Vec<String>,
    pub model: Model,
}

impl SavedModel {
    pub fn new(model: Model, feature_names: Vec<String>) -> Self {
        SavedModel {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_FORMAT_VERSION,
            feature_names,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Header {
            format: String,
            version: u32,
        }
        let header: Header = serde_json::from_str(s)?;
        if header.format != MODEL_FORMAT {
            return Err(Error::Schema(format!("not a model file (format `{}`)", header.format)));
        }
        if header.version != MODEL_FORMAT_VERSION {
            return Err(Error::FormatVersion(header.version));
        }
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}
