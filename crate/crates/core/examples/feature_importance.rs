// Impurity-based importance of the four environmental features.

use grainfusion::data::SplitSpec;
use grainfusion::ensemble::Execution;
use grainfusion::fusion::parse_grid;
use grainfusion::pipeline::run_importance;
use grainfusion::synth::{generate, SynthConfig, DEFAULT_COEFFICIENTS};

pub fn run_example() -> grainfusion::Result<()> {
    let data = generate(&SynthConfig::default())?;
    let grid = parse_grid("10,25,50,100")?;
    let (report, tuning) = run_importance(&data, &SplitSpec::default(), &grid, Execution::Parallel)?;
    println!("forest of {} trees", tuning.chosen);
    print!("{}", report.bar_chart(40));
    println!("planted weights (wh temp, air temp, wh humidity, air humidity): {DEFAULT_COEFFICIENTS:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
