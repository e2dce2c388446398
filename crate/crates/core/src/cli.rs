//! The `grainfusion` command line.
//!
//! Every subcommand accepts `--config FILE`, a TOML file whose keys mirror
//! the long flag names with underscores (`input`, `out`, `seed`,
//! `train_fraction`, `grid`, `models`, `leakage`, `days`). Flags given on the
//! command line win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::data::{load_csv, write_csv, SplitSpec};
use crate::ensemble::Execution;
use crate::error::{Error, Result};
use crate::fusion::{
    default_grid, fit_base, fit_fusion, parse_grid, BaseSettings, FusionSpec, LeakageMode, ModelDescriptor,
};
use crate::model::{Model, Predictor, SavedModel};
use crate::pipeline::{restrict_models, run_importance, run_pipeline, PipelineConfig};
use crate::synth::{generate_records, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "grainfusion", version, about = "Stacked tree ensembles for grain temperature prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic grain CSV.
    Synth(SynthArgs),
    /// Tune the four base models, fit the fusions, write the comparison table.
    Report(ReportArgs),
    /// Tune a random forest and write its feature importances.
    Importance(ImportanceArgs),
    /// Fit one model (single or fusion) on a CSV and save it.
    Train(TrainArgs),
    /// Predict with a saved model.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub days: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Tree-count grid, e.g. `1..30,35..300:5`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Comma-separated fusions such as `adaboost+random_forest`.
    #[arg(long)]
    pub models: Option<String>,
    /// `in-sample` or `oof`.
    #[arg(long)]
    pub leakage: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImportanceArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub train_fraction: Option<f64>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Model file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `random_forest`, `adaboost+extra_trees`, ...
    #[arg(long)]
    pub model: String,
    /// Tree count of a single ensemble, or of the meta forest of a fusion.
    #[arg(long)]
    pub n_estimators: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub leakage: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Saved model file.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Predictions CSV to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub train_fraction: Option<f64>,
    pub grid: Option<String>,
    pub models: Option<String>,
    pub leakage: Option<String>,
    pub days: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T> {
    flag.or(file).ok_or_else(|| Error::invalid(format!("--{name} is required")))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn parse_models(s: &str) -> Result<Vec<ModelDescriptor>> {
    let selected = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<ModelDescriptor>>>()?;
    if selected.is_empty() {
        return Err(Error::invalid("--models lists no model"));
    }
    Ok(restrict_models(&selected))
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let days = required(args.days, file.days, "days")?;
    if days == 0 {
        return Err(Error::invalid("--days must be >= 1"));
    }
    let out = required(args.out.clone(), file.out, "out")?;
    let config = SynthConfig::with_days(days as usize, args.seed.or(file.seed).unwrap_or(0));
    let records = generate_records(&config)?;
    write_csv(&out, &records)?;
    println!("{} rows written to {}", records.len(), out.display());
    Ok(())
}

pub fn cmd_report(args: &ReportArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let input = required(args.input.clone(), file.input, "input")?;
    let out = required(args.out.clone(), file.out, "out")?;
    let mut cfg = PipelineConfig {
        split: SplitSpec {
            train_fraction: args.train_fraction.or(file.train_fraction).unwrap_or(0.7),
            seed: args.seed.or(file.seed).unwrap_or(0),
        },
        ..Default::default()
    };
    if let Some(g) = args.grid.as_ref().or(file.grid.as_ref()) {
        cfg.grid = parse_grid(g)?;
    }
    if let Some(m) = args.models.as_ref().or(file.models.as_ref()) {
        cfg.models = parse_models(m)?;
    }
    if let Some(l) = args.leakage.as_ref().or(file.leakage.as_ref()) {
        cfg.leakage = l.parse()?;
    }
    let data = load_csv(&input)?;
    eprintln!(
        "loaded {} rows from {}; fitting {} models",
        data.n_samples(),
        input.display(),
        cfg.models.len()
    );
    let output = run_pipeline(&data, &cfg)?;
    ensure_dir(&out)?;
    let text = output.report.to_text();
    write_file(&out.join("report.txt"), &text)?;
    write_file(&out.join("report.json"), &output.report.to_json()?)?;
    write_file(
        &out.join("chosen_params.json"),
        &(serde_json::to_string_pretty(&output.chosen)? + "\n"),
    )?;
    print!("{text}");
    eprintln!("report written to {}", out.display());
    Ok(())
}

pub fn cmd_importance(args: &ImportanceArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let input = required(args.input.clone(), file.input, "input")?;
    let out = required(args.out.clone(), file.out, "out")?;
    let split = SplitSpec {
        train_fraction: args.train_fraction.or(file.train_fraction).unwrap_or(0.7),
        seed: args.seed.or(file.seed).unwrap_or(0),
    };
    let grid = match args.grid.as_ref().or(file.grid.as_ref()) {
        Some(g) => parse_grid(g)?,
        None => default_grid(),
    };
    let data = load_csv(&input)?;
    let (report, tuning) = run_importance(&data, &split, &grid, Execution::Parallel)?;
    eprintln!("random forest with {} trees", tuning.chosen);
    ensure_dir(&out)?;
    let chart = report.bar_chart(40);
    write_file(&out.join("importance.json"), &report.to_json()?)?;
    write_file(&out.join("importance.txt"), &chart)?;
    print!("{chart}");
    Ok(())
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let input = required(args.input.clone(), file.input, "input")?;
    let out = required(args.out.clone(), file.out, "out")?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let descriptor: ModelDescriptor = args.model.parse()?;
    let data = load_csv(&input)?;
    let mut settings = BaseSettings::tuned_defaults(seed);
    let model = if descriptor.is_fusion() {
        let mut spec = FusionSpec::new(descriptor.members.clone(), args.n_estimators.unwrap_or(8), seed);
        if let Some(l) = args.leakage.as_ref().or(file.leakage.as_ref()) {
            spec.leakage = l.parse::<LeakageMode>()?;
        }
        Model::Fusion(fit_fusion(&data, &settings, &spec, Execution::Parallel)?)
    } else {
        if let Some(n) = args.n_estimators {
            settings.adaboost.n_estimators = n;
            settings.extra_trees.n_estimators = n;
            settings.random_forest.n_estimators = n;
        }
        fit_base(descriptor.members[0], &data, &settings, Execution::Parallel)?
    };
    SavedModel::new(model, data.feature_names().to_vec()).save(&out)?;
    eprintln!("{} trained on {} rows, saved to {}", descriptor.name(), data.n_samples(), out.display());
    Ok(())
}

pub fn cmd_predict(args: &PredictArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let input = required(args.input.clone(), file.input, "input")?;
    let out = required(args.out.clone(), file.out, "out")?;
    let saved = SavedModel::load(&args.model)?;
    let data = load_csv(&input)?;
    let preds = saved.model.predict(&data)?;
    let mut text = String::from("row,prediction,grain_temp\n");
    for (i, (p, y)) in preds.iter().zip(data.targets()).enumerate() {
        text.push_str(&format!("{},{},{}\n", i + 1, p, y));
    }
    write_file(&out, &text)?;
    eprintln!("{} predictions written to {}", preds.len(), out.display());
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Report(a) => cmd_report(a),
        Command::Importance(a) => cmd_importance(a),
        Command::Train(a) => cmd_train(a),
        Command::Predict(a) => cmd_predict(a),
    }
}
