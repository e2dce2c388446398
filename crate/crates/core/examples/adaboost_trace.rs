// Round-by-round trace of discrete AdaBoost with weighted stumps.

use grainfusion::ensemble::fit_adaboost_classifier;
use grainfusion::Dataset;

pub fn run_example() -> grainfusion::Result<()> {
    let xs = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let ys = [1.0, 1.0, -1.0, 1.0, -1.0, -1.0];
    let data = Dataset::from_rows(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec())?;
    let model = fit_adaboost_classifier(&data, 3)?;
    let s = &model.state;

    println!("round  stump            e        alpha    Z");
    for t in 0..s.rounds_completed {
        let h = s.learners[t];
        let side = if h.polarity > 0 { "+1 left" } else { "-1 left" };
        println!(
            "{:>5}  x <= {:<4} {side}  {:.4}  {:.4}  {:.4}",
            t + 1,
            h.threshold,
            s.errors[t],
            s.alphas[t],
            s.normalizers[t]
        );
        let w: Vec<String> = s.history[t + 1].iter().map(|w| format!("{w:.3}")).collect();
        println!("       next weights [{}]", w.join(", "));
    }
    println!(
        "training error {} <= bound {:.4}",
        model.training_error(&data)?,
        model.error_bound()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
