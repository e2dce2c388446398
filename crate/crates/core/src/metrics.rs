//! MSE / R² scoring and the model comparison report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::data::SplitSpec;
use crate::error::{Error, Result};

fn check_lengths(y_true: &[f64], y_pred: &[f64], min: usize) -> Result<()> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            got: y_pred.len(),
        });
    }
    if y_true.len() < min {
        return Err(Error::Undefined(format!("need at least {min} values, got {}", y_true.len())));
    }
    Ok(())
}

pub fn mse(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true, y_pred, 1)?;
    let sse: f64 = y_true.iter().zip(y_pred).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sse / y_true.len() as f64)
}

/// Coefficient of determination, with the mean of `y_true` as baseline.
/// Constant `y_true` is an error.
pub fn r_squared(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true, y_pred, 2)?;
    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let sst: f64 = y_true.iter().map(|y| (y - mean) * (y - mean)).sum();
    if sst == 0.0 {
        return Err(Error::Undefined("R² of a constant target".into()));
    }
    let sse: f64 = y_true.iter().zip(y_pred).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(1.0 - sse / sst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    #[serde(rename = "model")]
    pub model_name: String,
    pub n_estimators: Option<usize>,
    pub mse: f64,
    pub r2: f64,
}

/// Test-set predictions of one trained model.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedModel {
    pub name: String,
    pub n_estimators: Option<usize>,
    pub predictions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDescriptor {
    pub train_fraction: f64,
    pub n_train: usize,
    pub n_test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub split: SplitDescriptor,
    pub seed: u64,
}

/// Scores every model on the test targets.
pub fn build_report(
    models: &[EvaluatedModel],
    test_targets: &[f64],
    split: &SplitSpec,
    n_train: usize,
) -> Result<EvalReport> {
    let mut rows = Vec::with_capacity(models.len());
    for m in models {
        if rows.iter().any(|r: &EvalRow| r.model_name == m.name) {
            return Err(Error::invalid(format!("duplicate report row `{}`", m.name)));
        }
        rows.push(EvalRow {
            model_name: m.name.clone(),
            n_estimators: m.n_estimators,
            mse: mse(test_targets, &m.predictions)?,
            r2: r_squared(test_targets, &m.predictions)?,
        });
    }
    Ok(EvalReport {
        rows,
        split: SplitDescriptor {
            train_fraction: split.train_fraction,
            n_train,
            n_test: test_targets.len(),
        },
        seed: split.seed,
    })
}

impl EvalReport {
    /// Rows ordered by descending MSE (best model last), stable on ties.
    pub fn sorted_by_mse(&self) -> EvalReport {
        let mut out = self.clone();
        out.rows.sort_by(|a, b| b.mse.total_cmp(&a.mse));
        out
    }

    pub fn row(&self, name: &str) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.model_name == name)
    }

    /// Aligned table `Model  n_estimators  MSE  R²`, 4 decimals, `-` for an
    /// absent tree count.
    pub fn to_text(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.model_name.chars().count())
            .max()
            .unwrap_or(0)
            .max("Model".len());
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:>12}  {:>8}  {:>8}", "Model", "n_estimators", "MSE", "R²");
        for r in &self.rows {
            let n = r.n_estimators.map_or_else(|| "-".to_string(), |n| n.to_string());
            let _ = writeln!(
                out,
                "{:<width$}  {:>12}  {:>8.4}  {:>8.4}",
                r.model_name, n, r.mse, r.r2
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(mse(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert!((mse(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(mse(&[], &[]).is_err());
        assert!(mse(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn r2_examples() {
        let y = [1.0, 4.0, 2.0, 8.0];
        assert_eq!(r_squared(&y, &y).unwrap(), 1.0);
        assert_eq!(r_squared(&y, &[3.75; 4]).unwrap(), 0.0);
        assert_eq!(r_squared(&[0.0, 1.0], &[1.0, 0.0]).unwrap(), -3.0);
        assert!(matches!(r_squared(&[2.0, 2.0], &[2.0, 2.0]), Err(Error::Undefined(_))));
        assert!(r_squared(&[1.0, 2.0], &[1.0]).is_err());
    }

    fn sample_report() -> EvalReport {
        let y = [1.0, 2.0, 3.0, 4.0];
        let models = vec![
            EvaluatedModel { name: "Adaboost".into(), n_estimators: Some(50), predictions: vec![1.1, 2.0, 2.9, 4.2] },
            EvaluatedModel { name: "Decision tree".into(), n_estimators: None, predictions: vec![1.0, 2.5, 3.0, 4.0] },
        ];
        build_report(&models, &y, &SplitSpec::default(), 9).unwrap()
    }

    #[test]
    fn report_rows_and_text() {
        let r = sample_report();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.row("Decision tree").unwrap().n_estimators, None);
        assert!((r.rows[0].mse - mse(&[1.0, 2.0, 3.0, 4.0], &[1.1, 2.0, 2.9, 4.2]).unwrap()).abs() == 0.0);
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("Model"));
        assert!(lines[2].contains(" - ") || lines[2].contains("  -  "));
        assert!(lines[1].contains("0.0150"), "{}", lines[1]);
        assert_eq!(r.sorted_by_mse().rows[0].model_name, "Decision tree");
    }

    #[test]
    fn duplicate_rows_rejected() {
        let m = EvaluatedModel { name: "A".into(), n_estimators: None, predictions: vec![1.0, 2.0] };
        assert!(build_report(&[m.clone(), m], &[1.0, 3.0], &SplitSpec::default(), 3).is_err());
    }

    #[test]
    fn report_json_roundtrip() {
        let r = sample_report();
        let json = r.to_json().unwrap();
        assert!(json.contains("\"model\": \"Adaboost\""));
        assert_eq!(EvalReport::from_json(&json).unwrap(), r);
    }

    proptest! {
        #[test]
        fn r2_mse_identity(pairs in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 2..50)) {
            let (y, p): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let m = y.iter().sum::<f64>() / y.len() as f64;
            let var = y.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / y.len() as f64;
            prop_assume!(var > 1e-6);
            let r2 = r_squared(&y, &p).unwrap();
            let lhs = 1.0 - mse(&y, &p).unwrap() / var;
            prop_assert!((r2 - lhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn mse_symmetric_and_shift_invariant(pairs in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 1..50), c in -10.0f64..10.0) {
            let (y, p): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let a = mse(&y, &p).unwrap();
            prop_assert_eq!(a, mse(&p, &y).unwrap());
            let ys: Vec<f64> = y.iter().map(|v| v + c).collect();
            let ps: Vec<f64> = p.iter().map(|v| v + c).collect();
            prop_assert!((a - mse(&ys, &ps).unwrap()).abs() <= 1e-9 * (1.0 + a));
        }
    }
}
