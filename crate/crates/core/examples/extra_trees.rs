// Extremely randomized trees against a bagged forest of the same size.

use std::time::Instant;

use grainfusion::data::{train_test_split, SplitSpec};
use grainfusion::ensemble::{fit_extra_trees, fit_random_forest, ForestParams};
use grainfusion::metrics::mse;
use grainfusion::synth::{generate, SynthConfig};

pub fn run_example() -> grainfusion::Result<()> {
    let data = generate(&SynthConfig::with_days(1000, 7))?;
    let (train, test) = train_test_split(&data, &SplitSpec { seed: 7, ..Default::default() })?;

    let t = Instant::now();
    let et = fit_extra_trees(&train, &ForestParams::extra_trees(80, 7))?;
    let et_time = t.elapsed();
    let t = Instant::now();
    let rf = fit_random_forest(&train, &ForestParams::random_forest(80, 7))?;
    let rf_time = t.elapsed();

    for (name, model, time) in [("extra trees", &et, et_time), ("random forest", &rf, rf_time)] {
        let nodes: usize = model.trees.iter().map(|t| t.nodes().len()).sum();
        println!(
            "{name:<14} test MSE {:.4}  {nodes:>6} nodes  fit {time:.1?}",
            mse(test.targets(), &model.predict(&test)?)?
        );
    }
    // no bootstrap: every extra tree sees all training rows
    assert!(et.trees.iter().all(|t| t.n_samples() == train.n_samples()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
