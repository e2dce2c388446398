// Choosing n_estimators and tree parameters on a held-out split.

use grainfusion::data::{train_test_split, SplitSpec};
use grainfusion::ensemble::{fit_random_forest_with, Execution, ForestKind, ForestParams};
use grainfusion::fusion::{default_tree_grid, parse_grid, tune_forest_size, tune_n_estimators, tune_tree_params};
use grainfusion::synth::{generate, SynthConfig};

pub fn run_example() -> grainfusion::Result<()> {
    let data = generate(&SynthConfig::default())?;
    let (train, test) = train_test_split(&data, &SplitSpec::default())?;
    let grid = parse_grid("1..5,10..50:10")?;

    // one forest of the largest size, scored by prefix
    let (fast, _) = tune_forest_size(
        ForestKind::RandomForest,
        &ForestParams::random_forest(1, 0),
        &grid,
        &train,
        &test,
        Execution::Parallel,
    )?;
    // a fresh forest per grid value
    let slow = tune_n_estimators(
        |d, n| fit_random_forest_with(d, &ForestParams::random_forest(n, 0), Execution::Parallel),
        &grid,
        &train,
        &test,
    )?;
    for ((n, a), b) in grid.iter().zip(&fast.scores).zip(&slow.scores) {
        println!("{n:>3} trees  {a:.6}  {b:.6}");
    }
    println!("chosen {} (retrained: {})", fast.chosen, slow.chosen);

    let candidates = default_tree_grid();
    let (best, scores) = tune_tree_params(&candidates, &train, &test)?;
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("\n{} tree settings, MSE {lo:.4} .. {hi:.4}; best {best:?}", candidates.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
