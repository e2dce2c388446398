// Train a fusion, save it to JSON, reload it, and predict new days.

use grainfusion::ensemble::{Execution, ForestParams};
use grainfusion::fusion::{fit_fusion, BaseModelKind, BaseSettings, FusionSpec};
use grainfusion::synth::{generate, SynthConfig};
use grainfusion::{Model, Predictor, SavedModel};

pub fn run_example() -> grainfusion::Result<()> {
    // the last ten days are held back as "new" data
    let series = generate(&SynthConfig::with_days(410, 3))?;
    let train = series.subset(&(0..400).collect::<Vec<_>>());
    let fresh = series.subset(&(400..410).collect::<Vec<_>>());

    let settings = BaseSettings {
        extra_trees: ForestParams::extra_trees(40, 3),
        random_forest: ForestParams::random_forest(40, 3),
        ..BaseSettings::tuned_defaults(3)
    };
    let spec = FusionSpec::new(vec![BaseModelKind::ExtraTrees, BaseModelKind::RandomForest], 8, 3);
    let fusion = fit_fusion(&train, &settings, &spec, Execution::Parallel)?;
    let saved = SavedModel::new(Model::Fusion(fusion), train.feature_names().to_vec());

    let path = std::env::temp_dir().join("grainfusion-example-model.json");
    saved.save(&path)?;
    let size = std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
    let loaded = SavedModel::load(&path)?;
    println!("saved {} ({} KiB)", path.display(), size / 1024);

    let before = saved.model.predict(&fresh)?;
    let after = loaded.model.predict(&fresh)?;
    assert_eq!(before, after);
    println!("day  predicted  actual");
    for (i, (p, y)) in after.iter().zip(fresh.targets()).enumerate() {
        println!("{:>3}  {p:>9.3}  {y:>6.3}", 400 + i);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grainfusion::Result<()> {
    run_example()
}
