// Fit a CART regression tree and inspect its splits.

use grainfusion::metrics::mse;
use grainfusion::tree::{best_split, fit_tree, Criterion, TreeParams};
use grainfusion::Dataset;

pub fn run_example() -> grainfusion::Result<()> {
    // y = step at x0 = 3 plus a smaller step on x1
    let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![f64::from(i % 6), f64::from(i / 6)]).collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|x| if x[0] < 3.0 { 1.0 } else { 5.0 } + 0.5 * x[1])
        .collect();
    let data = Dataset::new(rows, ys, vec!["x0".into(), "x1".into()])?;

    let all: Vec<usize> = (0..data.n_samples()).collect();
    let root = best_split(&data, &all, &TreeParams::default()).expect("targets vary");
    println!(
        "root split: {} <= {} (impurity decrease {:.4})",
        data.feature_names()[root.feature],
        root.threshold,
        root.impurity_decrease
    );

    for depth in [1, 2] {
        let tree = fit_tree(&data, &TreeParams::default().with_max_depth(depth))?;
        let err = mse(data.targets(), &tree.predict(&data)?)?;
        println!("\ndepth {depth}: {} leaves, train MSE {err:.4}", tree.leaves().len());
        print!("{}", tree.dump(data.feature_names()));
    }

    let robust = TreeParams {
        criterion: Criterion::AbsoluteError,
        min_samples_leaf: 2,
        ..TreeParams::default()
    };
    let tree = fit_tree(&data, &robust)?;
    println!("\nabsolute-error tree, min 2 per leaf:");
    print!("{}", tree.dump(data.feature_names()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
