use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::child_rng;
use crate::tree::{fit_stump, grow, labels_of, stump_error, RegressionTree, Splitter, TreeParams, WeightedStump};

/// Error used in place of a zero weighted error when computing α.
pub const ALPHA_EPSILON: f64 = 1e-10;

/// Learner weight `½ ln((1 - e) / e)`.
pub fn adaboost_alpha(error: f64) -> f64 {
    0.5 * ((1.0 - error) / error).ln()
}

/// Closed-form distribution normalizer `2 √(e (1 - e))`.
pub fn adaboost_normalizer(error: f64) -> f64 {
    2.0 * (error * (1.0 - error)).sqrt()
}

/// Full trace of a discrete AdaBoost run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostState {
    /// Current distribution over training samples.
    pub weights: Vec<f64>,
    pub learners: Vec<WeightedStump>,
    pub alphas: Vec<f64>,
    pub normalizers: Vec<f64>,
    /// Weighted error of each kept learner under the distribution it was fit on.
    pub errors: Vec<f64>,
    /// Distributions D_1, D_2, ... ; `history[t]` is the one learner `t` saw.
    pub history: Vec<Vec<f64>>,
    pub rounds_completed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedClassifier {
    pub state: BoostState,
}

/// Discrete AdaBoost with weighted stumps as weak learners.
///
/// Each round fits the stump of least weighted error `e`, weights it by
/// `α = ½ ln((1-e)/e)` and reweights samples by `exp(-α y h(x)) / Z` with
/// `Z = 2√(e(1-e))`. A perfect stump (`e = 0`) is kept with `α` computed at
/// [`ALPHA_EPSILON`] and ends training; a stump with `e >= 0.5` is dropped
/// and ends training.
pub fn fit_adaboost_classifier(train: &Dataset, rounds: usize) -> Result<BoostedClassifier> {
    if rounds < 1 {
        return Err(Error::invalid("AdaBoost needs at least one round"));
    }
    let labels = labels_of(train)?;
    let n = train.n_samples();
    let mut weights = vec![1.0 / n as f64; n];
    let mut state = BoostState {
        weights: weights.clone(),
        learners: Vec::new(),
        alphas: Vec::new(),
        normalizers: Vec::new(),
        errors: Vec::new(),
        history: vec![weights.clone()],
        rounds_completed: 0,
    };
    for _ in 0..rounds {
        let (stump, _) = fit_stump(train, &weights)?;
        let error = stump_error(&stump, train, &labels, &weights);
        if error >= 0.5 {
            break;
        }
        let perfect = error <= 0.0;
        let alpha = adaboost_alpha(if perfect { ALPHA_EPSILON } else { error });
        let factors: Vec<f64> = train
            .rows()
            .zip(&labels)
            .map(|(x, &y)| (-alpha * f64::from(y) * f64::from(stump.predict_row(x))).exp())
            .collect();
        // with a capped α the closed form no longer applies; use the actual sum
        let z = if perfect {
            weights.iter().zip(&factors).map(|(w, f)| w * f).sum()
        } else {
            adaboost_normalizer(error)
        };
        for (w, f) in weights.iter_mut().zip(&factors) {
            *w *= f / z;
        }
        state.learners.push(stump);
        state.alphas.push(alpha);
        state.normalizers.push(z);
        state.errors.push(error);
        state.history.push(weights.clone());
        state.rounds_completed += 1;
        if perfect {
            break;
        }
    }
    state.weights = weights;
    Ok(BoostedClassifier { state })
}

impl BoostedClassifier {
    /// `f(x) = Σ α_t h_t(x)`.
    pub fn decision_function(&self, x: &[f64]) -> f64 {
        self.state
            .learners
            .iter()
            .zip(&self.state.alphas)
            .map(|(h, a)| a * f64::from(h.predict_row(x)))
            .sum()
    }

    /// `sign(f(x))`, with `sign(0) = +1`.
    pub fn predict_row(&self, x: &[f64]) -> i8 {
        if self.decision_function(x) >= 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn training_error(&self, data: &Dataset) -> Result<f64> {
        let labels = labels_of(data)?;
        let wrong = data
            .rows()
            .zip(&labels)
            .filter(|(x, &y)| self.predict_row(x) != y)
            .count();
        Ok(wrong as f64 / data.n_samples() as f64)
    }

    /// `Π Z_t`, the bound on the training 0-1 error.
    pub fn error_bound(&self) -> f64 {
        self.state.normalizers.iter().product()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoostLoss {
    #[default]
    Linear,
    Square,
    Exponential,
}

impl BoostLoss {
    fn apply(self, relative: f64) -> f64 {
        match self {
            BoostLoss::Linear => relative,
            BoostLoss::Square => relative * relative,
            BoostLoss::Exponential => 1.0 - (-relative).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostParams {
    pub n_estimators: usize,
    pub tree_params: TreeParams,
    pub loss: BoostLoss,
    pub seed: u64,
}

impl BoostParams {
    /// Depth-3 regression trees with linear loss.
    pub fn new(n_estimators: usize, seed: u64) -> Self {
        BoostParams {
            n_estimators,
            tree_params: TreeParams::default().with_max_depth(3),
            loss: BoostLoss::Linear,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedRegressor {
    pub params: BoostParams,
    pub learners: Vec<RegressionTree>,
    /// `ln(1/β_t)` per learner.
    pub learner_weights: Vec<f64>,
    /// Weighted average loss `L̄_t` of each learner.
    pub average_losses: Vec<f64>,
}

/// Weighted median: the smallest value whose cumulative weight (values
/// sorted ascending) reaches half the total.
pub fn weighted_median(values: &[f64], weights: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let total: f64 = weights.iter().sum();
    let mut cum = 0.0;
    for &i in &order {
        cum += weights[i];
        if cum >= 0.5 * total {
            return values[i];
        }
    }
    values[*order.last().expect("weighted_median of nothing")]
}

/// AdaBoost.R2.
///
/// Round `t` draws a weighted bootstrap from stream `(seed, t)`, fits a CART
/// tree, scores per-sample losses relative to the largest absolute error,
/// and reweights with `β = L̄ / (1 - L̄)`. Training stops early when a tree
/// fits perfectly (kept with weight 1) or when `L̄ >= 0.5` (dropped unless it
/// is the first tree, which is kept with weight 1).
pub fn fit_adaboost_r2(train: &Dataset, params: &BoostParams) -> Result<BoostedRegressor> {
    if params.n_estimators < 1 {
        return Err(Error::invalid("n_estimators must be >= 1"));
    }
    params.tree_params.validate()?;
    let n = train.n_samples();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut weights = vec![1.0 / n as f64; n];
    let mut model = BoostedRegressor {
        params: *params,
        learners: Vec::new(),
        learner_weights: Vec::new(),
        average_losses: Vec::new(),
    };
    let ys = train.targets();
    for t in 0..params.n_estimators {
        let mut rng = child_rng(params.seed, t as u64);
        let sampler = WeightedIndex::new(&weights).map_err(|e| Error::invalid(e.to_string()))?;
        let mut idx: Vec<usize> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let tree = grow(train, &mut idx, &params.tree_params, &mut Splitter::Best);
        let errs: Vec<f64> = train
            .rows()
            .zip(ys)
            .map(|(x, y)| (tree.predict_unchecked(x) - y).abs())
            .collect();
        let max_err = errs.iter().copied().fold(0.0, f64::max);
        if max_err <= 0.0 {
            model.learners.push(tree);
            model.learner_weights.push(1.0);
            model.average_losses.push(0.0);
            break;
        }
        let losses: Vec<f64> = errs.iter().map(|e| params.loss.apply(e / max_err)).collect();
        let avg: f64 = weights.iter().zip(&losses).map(|(w, l)| w * l).sum();
        if avg <= 0.0 {
            model.learners.push(tree);
            model.learner_weights.push(1.0);
            model.average_losses.push(0.0);
            break;
        }
        if avg >= 0.5 {
            if model.learners.is_empty() {
                model.learners.push(tree);
                model.learner_weights.push(1.0);
                model.average_losses.push(avg);
            }
            break;
        }
        let beta = avg / (1.0 - avg);
        for (w, l) in weights.iter_mut().zip(&losses) {
            *w *= beta.powf(1.0 - l);
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        model.learners.push(tree);
        model.learner_weights.push((1.0 / beta).ln());
        model.average_losses.push(avg);
    }
    Ok(model)
}

impl BoostedRegressor {
    pub fn n_features(&self) -> usize {
        self.learners[0].n_features()
    }

    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let preds: Vec<f64> = self.learners.iter().map(|t| t.predict_unchecked(x)).collect();
        weighted_median(&preds, &self.learner_weights)
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

    pub fn predict(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.check_row(&vec![0.0; self.n_features()])?;
        Ok(data.rows().map(|x| self.predict_unchecked(x)).collect())
    }

    /// The model after its first `k` rounds (fewer if training stopped
    /// early). Round `t` depends only on earlier rounds and stream
    /// `(seed, t)`, so this equals training with `n_estimators = k`.
    pub fn truncated(&self, k: usize) -> Result<BoostedRegressor> {
        if k < 1 {
            return Err(Error::invalid("cannot truncate to zero rounds"));
        }
        let k_eff = k.min(self.learners.len());
        Ok(BoostedRegressor {
            params: BoostParams {
                n_estimators: k,
                ..self.params
            },
            learners: self.learners[..k_eff].to_vec(),
            learner_weights: self.learner_weights[..k_eff].to_vec(),
            average_losses: self.average_losses[..k_eff].to_vec(),
        })
    }
}
