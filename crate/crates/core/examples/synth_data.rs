// Generate a synthetic depot series, write it as CSV, and look at one
// day's sensor grid.

use grainfusion::data::{aggregate_sensor_grid, load_csv, write_csv, GRID_Z};
use grainfusion::synth::{generate_records, generate_sensor_day, SynthConfig};

pub fn run_example() -> grainfusion::Result<()> {
    let config = SynthConfig::default();
    let records = generate_records(&config)?;
    let first = &records[0];
    let last = &records[records.len() - 1];
    println!(
        "{} days, {} to {}",
        records.len(),
        first.timestamp.unwrap(),
        last.timestamp.unwrap()
    );

    let dir = std::env::temp_dir().join("grainfusion-synth-example");
    std::fs::create_dir_all(&dir).map_err(|e| grainfusion::Error::Io { path: dir.clone(), source: e })?;
    let path = dir.join("grain.csv");
    write_csv(&path, &records)?;
    let data = load_csv(&path)?;
    println!("reloaded {} rows x {} features from {}", data.n_samples(), data.n_features(), path.display());

    for (j, name) in data.feature_names().iter().enumerate() {
        let col = data.column(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("  {name:<20} {lo:>7.2} .. {hi:>7.2}");
    }

    let day = 200;
    let grid = generate_sensor_day(&config, day)?;
    println!("day {day}: grain temperature {:.3}", data.targets()[day]);
    for z in 0..GRID_Z {
        println!("  layer {z} mean {:.3}", grid.layer_mean(z));
    }
    println!("  140-sensor mean {:.3}", aggregate_sensor_grid(&grid));
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
