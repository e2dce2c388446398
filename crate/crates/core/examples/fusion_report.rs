// The fifteen-model comparison: four tuned base models and every stacked
// fusion of two or more of them.

use grainfusion::data::SplitSpec;
use grainfusion::fusion::{parse_grid, LeakageMode};
use grainfusion::pipeline::{run_pipeline, PipelineConfig};
use grainfusion::synth::{generate, SynthConfig};

pub fn run_example() -> grainfusion::Result<()> {
    let data = generate(&SynthConfig::with_days(800, 1))?;
    for leakage in [LeakageMode::InSample, LeakageMode::OutOfFold] {
        let cfg = PipelineConfig {
            split: SplitSpec { seed: 1, ..Default::default() },
            grid: parse_grid("5,10,25,50")?,
            leakage,
            ..Default::default()
        };
        let out = run_pipeline(&data, &cfg)?;
        println!("meta features: {leakage:?}");
        print!("{}", out.report.to_text());
        let best = out.report.sorted_by_mse();
        println!("best: {}\n", best.rows.last().unwrap().model_name);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
