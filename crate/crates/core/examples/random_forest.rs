// Bagged CART forest on synthetic depot data, with test error as trees are
// added.

use grainfusion::data::{train_test_split, SplitSpec};
use grainfusion::ensemble::{fit_random_forest, ForestParams};
use grainfusion::metrics::{mse, r_squared};
use grainfusion::synth::{generate, SynthConfig};
use grainfusion::tree::fit_tree;

pub fn run_example() -> grainfusion::Result<()> {
    let data = generate(&SynthConfig::default())?;
    let (train, test) = train_test_split(&data, &SplitSpec::default())?;

    let single = fit_tree(&train, &Default::default())?;
    println!("single tree     test MSE {:.4}", mse(test.targets(), &single.predict(&test)?)?);

    let forest = fit_random_forest(&train, &ForestParams::random_forest(100, 0))?;
    let sizes = [1, 5, 10, 25, 50, 100];
    for (k, pred) in sizes.iter().zip(forest.staged_predict(&test, &sizes)?) {
        println!(
            "{k:>3} trees       test MSE {:.4}  R² {:.4}",
            mse(test.targets(), &pred)?,
            r_squared(test.targets(), &pred)?
        );
    }
    let depths: Vec<usize> = forest.trees.iter().map(|t| t.depth()).collect();
    println!(
        "tree depths {}..{}",
        depths.iter().min().unwrap(),
        depths.iter().max().unwrap()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
