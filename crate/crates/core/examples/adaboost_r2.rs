// AdaBoost.R2 regression with each loss shape.

use grainfusion::data::{train_test_split, SplitSpec};
use grainfusion::ensemble::{fit_adaboost_r2, BoostLoss, BoostParams};
use grainfusion::metrics::mse;
use grainfusion::synth::{generate, SynthConfig};

pub fn run_example() -> grainfusion::Result<()> {
    let data = generate(&SynthConfig::default())?;
    let (train, test) = train_test_split(&data, &SplitSpec::default())?;

    for loss in [BoostLoss::Linear, BoostLoss::Square, BoostLoss::Exponential] {
        let params = BoostParams {
            loss,
            ..BoostParams::new(50, 0)
        };
        let model = fit_adaboost_r2(&train, &params)?;
        let first: Vec<String> = model.learner_weights.iter().take(4).map(|w| format!("{w:.3}")).collect();
        println!(
            "{loss:?}: {} learners, test MSE {:.4}, first weights [{}]",
            model.learners.len(),
            mse(test.targets(), &model.predict(&test)?)?,
            first.join(", ")
        );
    }

    let model = fit_adaboost_r2(&train, &BoostParams::new(50, 0))?;
    for k in [1, 10, 50] {
        let part = model.truncated(k)?;
        println!("first {k:>2} rounds: test MSE {:.4}", mse(test.targets(), &part.predict(&test)?)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
