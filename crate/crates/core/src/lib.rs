//! Tree-ensemble regression with stacking fusion, built for predicting the
//! average temperature of stored grain from warehouse and weather readings.
//!
//! The pieces:
//!
//! - [`data`]: grain CSV schema, sensor-grid aggregation, seeded 7:3 split.
//! - [`tree`]: CART regression trees and weighted decision stumps.
//! - [`ensemble`]: random forest, extra trees, discrete AdaBoost, AdaBoost.R2.
//! - [`fusion`]: stacking of base-model predictions into a random-forest
//!   meta-learner, the fifteen-model enumeration, and size tuning.
//! - [`metrics`], [`importance`]: scoring, reports, and impurity importance.
//! - [`synth`]: a synthetic depot telemetry generator.
//! - [`pipeline`]: the end-to-end comparison used by the `grainfusion` binary.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example <name>`.

pub mod cli;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod fusion;
pub mod importance;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod synth;
pub mod tree;

pub use data::{load_csv, Dataset, GrainRecord, SensorGrid, SplitSpec};
pub use error::{Error, Result};
pub use model::{Model, Predictor, SavedModel};
