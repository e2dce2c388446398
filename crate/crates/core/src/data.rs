//! Dataset schema, CSV ingestion, sensor-grid aggregation and the seeded
//! train/test split.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Feature columns, in the fixed order used by every grain dataset.
pub const FEATURE_NAMES: [&str; 4] = [
    "warehouse_temp",
    "warehouse_humidity",
    "air_temp",
    "air_humidity",
];
pub const TARGET_NAME: &str = "grain_temp";
pub const TIMESTAMP_NAME: &str = "timestamp";

/// One daily observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrainRecord {
    pub timestamp: Option<NaiveDate>,
    pub warehouse_temp: f64,
    pub warehouse_humidity: f64,
    pub air_temp: f64,
    pub air_humidity: f64,
    pub avg_grain_temp: f64,
}

impl GrainRecord {
    pub fn features(&self) -> [f64; 4] {
        [
            self.warehouse_temp,
            self.warehouse_humidity,
            self.air_temp,
            self.air_humidity,
        ]
    }

    /// Checks finiteness and humidity bounds. `row` is only used for the message.
    pub fn validate(&self, row: usize) -> Result<()> {
        let values = [
            ("warehouse_temp", self.warehouse_temp),
            ("warehouse_humidity", self.warehouse_humidity),
            ("air_temp", self.air_temp),
            ("air_humidity", self.air_humidity),
            (TARGET_NAME, self.avg_grain_temp),
        ];
        for (name, v) in values {
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: name.to_string(),
                    message: format!("non-finite value {v}"),
                });
            }
        }
        for (name, v) in [
            ("warehouse_humidity", self.warehouse_humidity),
            ("air_humidity", self.air_humidity),
        ] {
            if !(0.0..=100.0).contains(&v) {
                return Err(Error::Validation {
                    row,
                    message: format!("{name} = {v} outside [0, 100]"),
                });
            }
        }
        Ok(())
    }
}

/// Row-major feature matrix with a target vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Vec<f64>,
    n_features: usize,
    targets: Vec<f64>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, targets: Vec<f64>, feature_names: Vec<String>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let d = feature_names.len();
        if targets.len() != rows.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: targets.len(),
            });
        }
        let mut features = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    row: i + 1,
                    column: feature_names[j].clone(),
                    message: "non-finite value".into(),
                });
            }
            features.extend_from_slice(row);
        }
        if let Some(i) = targets.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse {
                row: i + 1,
                column: "target".into(),
                message: "non-finite value".into(),
            });
        }
        Ok(Dataset {
            features,
            n_features: d,
            targets,
            feature_names,
        })
    }

    /// Builds a dataset with generic names `x0, x1, ...`.
    pub fn from_rows(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        let names = (0..d).map(|j| format!("x{j}")).collect();
        Self::new(rows, targets, names)
    }

    pub fn from_records(records: &[GrainRecord]) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            r.validate(i + 1)?;
        }
        let rows = records.iter().map(|r| r.features().to_vec()).collect();
        let targets = records.iter().map(|r| r.avg_grain_temp).collect();
        Self::new(
            rows,
            targets,
            FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn n_samples(&self) -> usize {
        self.targets.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features.max(1)).take(self.n_samples())
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.features[i * self.n_features + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_samples()).map(|i| self.value(i, j)).collect()
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Copy of the dataset restricted to `indices` (repeats allowed).
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Dataset {
            features,
            n_features: self.n_features,
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Same features, new targets.
    pub fn with_targets(&self, targets: Vec<f64>) -> Result<Dataset> {
        if targets.len() != self.n_samples() {
            return Err(Error::DimensionMismatch {
                expected: self.n_samples(),
                got: targets.len(),
            });
        }
        Ok(Dataset {
            targets,
            ..self.clone()
        })
    }

    pub(crate) fn check_row(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        Ok(())
    }
}

fn column_index(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::File {
            path: path.to_path_buf(),
            message: format!("schema error: missing column `{name}`"),
        })
}

/// Reads grain records from a CSV file with header
/// `timestamp,warehouse_temp,warehouse_humidity,air_temp,air_humidity,grain_temp`.
/// The timestamp column is optional; row order is preserved.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<GrainRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?
        .clone();
    let ts_col = headers.iter().position(|h| h == TIMESTAMP_NAME);
    let mut cols = [0usize; 5];
    for (slot, name) in cols
        .iter_mut()
        .zip(FEATURE_NAMES.iter().copied().chain([TARGET_NAME]))
    {
        *slot = column_index(&headers, name, path)?;
    }

    let mut records = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: format!("row {row}: {e}"),
        })?;
        let cell = |c: usize, name: &str| -> Result<f64> {
            let raw = rec.get(c).unwrap_or("");
            raw.parse::<f64>().map_err(|_| Error::Parse {
                row,
                column: name.to_string(),
                message: format!("cannot parse `{raw}` as a number"),
            })
        };
        let timestamp = match ts_col.and_then(|c| rec.get(c)) {
            Some(raw) if !raw.is_empty() => Some(raw.parse::<NaiveDate>().map_err(|_| Error::Parse {
                row,
                column: TIMESTAMP_NAME.into(),
                message: format!("`{raw}` is not an ISO-8601 date"),
            })?),
            _ => None,
        };
        let record = GrainRecord {
            timestamp,
            warehouse_temp: cell(cols[0], FEATURE_NAMES[0])?,
            warehouse_humidity: cell(cols[1], FEATURE_NAMES[1])?,
            air_temp: cell(cols[2], FEATURE_NAMES[2])?,
            air_humidity: cell(cols[3], FEATURE_NAMES[3])?,
            avg_grain_temp: cell(cols[4], TARGET_NAME)?,
        };
        record.validate(row)?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(records)
}

/// Loads a grain CSV as a 4-feature dataset.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    Dataset::from_records(&read_records(path)?)
}

pub fn write_csv(path: impl AsRef<Path>, records: &[GrainRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str(TIMESTAMP_NAME);
    for name in FEATURE_NAMES {
        out.push(',');
        out.push_str(name);
    }
    out.push(',');
    out.push_str(TARGET_NAME);
    out.push('\n');
    for r in records {
        if let Some(ts) = r.timestamp {
            out.push_str(&ts.format("%Y-%m-%d").to_string());
        }
        for v in r.features().into_iter().chain([r.avg_grain_temp]) {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

pub const GRID_X: usize = 7;
pub const GRID_Y: usize = 5;
pub const GRID_Z: usize = 4;
pub const GRID_SENSORS: usize = GRID_X * GRID_Y * GRID_Z;

/// Temperature readings of the 7 x 5 x 4 in-pile sensor array.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorGrid {
    readings: Vec<f64>,
}

impl SensorGrid {
    /// `readings` indexed as `[(x * GRID_Y + y) * GRID_Z + z]`.
    pub fn new(readings: Vec<f64>) -> Result<Self> {
        if readings.len() != GRID_SENSORS {
            return Err(Error::DimensionMismatch {
                expected: GRID_SENSORS,
                got: readings.len(),
            });
        }
        if readings.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sensor readings must be finite"));
        }
        Ok(SensorGrid { readings })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut readings = Vec::with_capacity(GRID_SENSORS);
        for x in 0..GRID_X {
            for y in 0..GRID_Y {
                for z in 0..GRID_Z {
                    readings.push(f(x, y, z));
                }
            }
        }
        Self::new(readings)
    }

    pub fn extents(&self) -> (usize, usize, usize) {
        (GRID_X, GRID_Y, GRID_Z)
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.readings[(x * GRID_Y + y) * GRID_Z + z]
    }

    pub fn readings(&self) -> &[f64] {
        &self.readings
    }

    pub fn layer_mean(&self, z: usize) -> f64 {
        let mut sum = 0.0;
        for x in 0..GRID_X {
            for y in 0..GRID_Y {
                sum += self.get(x, y, z);
            }
        }
        sum / (GRID_X * GRID_Y) as f64
    }
}

/// Whole-pile average temperature. Every layer holds 35 sensors, so the
/// global mean equals the mean of the four layer means.
pub fn aggregate_sensor_grid(grid: &SensorGrid) -> f64 {
    grid.readings.iter().sum::<f64>() / GRID_SENSORS as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.7,
            seed: 0,
        }
    }
}

/// Shuffled `(train, test)` index partitions of `0..n`.
///
/// Indices are shuffled with Fisher-Yates driven by the crate RNG seeded
/// from `spec.seed`; the first `floor(train_fraction * n)` go to train.
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction {} not in (0, 1)",
            spec.train_fraction
        )));
    }
    if n < 2 {
        return Err(Error::invalid("need at least 2 rows to split"));
    }
    let n_train = (spec.train_fraction * n as f64).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::invalid(format!(
            "train fraction {} leaves an empty partition for n = {n}",
            spec.train_fraction
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng_from_seed(spec.seed));
    let test = idx.split_off(n_train);
    Ok((idx, test))
}

pub fn train_test_split(data: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(data.n_samples(), spec)?;
    Ok((data.subset(&train), data.subset(&test)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HEADER: &str = "timestamp,warehouse_temp,warehouse_humidity,air_temp,air_humidity,grain_temp\n";

    fn write_tmp(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_well_formed_file() {
        let f = write_tmp(&format!(
            "{HEADER}2020-01-01,10.5,60,8.0,70,12.1\n2020-01-02,11,61.5,9,72,12.3\n"
        ));
        let ds = load_csv(f.path()).unwrap();
        assert_eq!(ds.n_samples(), 2);
        assert_eq!(ds.n_features(), 4);
        assert_eq!(ds.row(1), &[11.0, 61.5, 9.0, 72.0]);
        assert_eq!(ds.targets(), &[12.1, 12.3]);
    }

    #[test]
    fn timestamp_column_is_optional_and_columns_can_be_reordered() {
        let f = write_tmp("grain_temp,air_humidity,air_temp,warehouse_humidity,warehouse_temp\n1,2,3,4,5\n");
        let ds = load_csv(f.path()).unwrap();
        assert_eq!(ds.row(0), &[5.0, 4.0, 3.0, 2.0]);
        assert_eq!(ds.targets(), &[1.0]);
    }

    #[test]
    fn header_only_is_empty() {
        let f = write_tmp(HEADER);
        assert!(matches!(load_csv(f.path()), Err(Error::EmptyDataset)));
        assert_eq!(Error::EmptyDataset.to_string(), "empty dataset");
    }

    #[test]
    fn humidity_out_of_range_cites_row() {
        let f = write_tmp(&format!(
            "{HEADER}2020-01-01,10,60,8,70,12\n2020-01-02,10,60,8,70,12\n2020-01-03,10,150,8,70,12\n"
        ));
        match load_csv(f.path()) {
            Err(Error::Validation { row, .. }) => assert_eq!(row, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column_and_bad_cells() {
        let f = write_tmp("timestamp,warehouse_temp,air_temp,air_humidity,grain_temp\n2020-01-01,1,2,3,4\n");
        let err = load_csv(f.path()).unwrap_err().to_string();
        assert!(err.contains("missing column `warehouse_humidity`"), "{err}");

        let f = write_tmp(&format!("{HEADER}2020-01-01,abc,60,8,70,12\n"));
        match load_csv(f.path()) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 1);
                assert_eq!(column, "warehouse_temp");
            }
            other => panic!("unexpected {other:?}"),
        }

        let f = write_tmp(&format!("{HEADER}2020-01-01,1,60,NaN,70,12\n"));
        assert!(matches!(load_csv(f.path()), Err(Error::Parse { .. })));
    }

    #[test]
    fn csv_roundtrip() {
        let records = vec![GrainRecord {
            timestamp: NaiveDate::from_ymd_opt(2020, 1, 1),
            warehouse_temp: 0.1 + 0.2,
            warehouse_humidity: 55.5,
            air_temp: -3.25,
            air_humidity: 100.0,
            avg_grain_temp: 14.000000000000002,
        }];
        let f = tempfile::NamedTempFile::new().unwrap();
        write_csv(f.path(), &records).unwrap();
        assert_eq!(read_records(f.path()).unwrap(), records);
    }

    #[test]
    fn aggregate_examples() {
        let g = SensorGrid::from_fn(|_, _, _| 20.0).unwrap();
        assert_eq!(aggregate_sensor_grid(&g), 20.0);
        let g = SensorGrid::from_fn(|_, _, z| 10.0 * (z + 1) as f64).unwrap();
        assert_eq!(aggregate_sensor_grid(&g), 25.0);
        let layer_means: f64 = (0..GRID_Z).map(|z| g.layer_mean(z)).sum::<f64>() / GRID_Z as f64;
        assert_eq!(layer_means, 25.0);
        assert!(SensorGrid::new(vec![0.0; 139]).is_err());
    }

    /// Neumaier-compensated mean.
    fn compensated_mean(xs: &[f64]) -> f64 {
        let (mut sum, mut c) = (0.0f64, 0.0f64);
        for &x in xs {
            let t = sum + x;
            if sum.abs() >= x.abs() {
                c += (sum - t) + x;
            } else {
                c += (x - t) + sum;
            }
            sum = t;
        }
        (sum + c) / xs.len() as f64
    }

    #[test]
    fn split_examples() {
        let ds = Dataset::from_rows((0..10).map(|i| vec![i as f64]).collect(), vec![0.0; 10]).unwrap();
        let spec = SplitSpec::default();
        let (tr, te) = train_test_split(&ds, &spec).unwrap();
        assert_eq!((tr.n_samples(), te.n_samples()), (7, 3));
        assert_eq!(split_indices(10, &spec).unwrap(), split_indices(10, &spec).unwrap());
        let other = split_indices(10, &SplitSpec { seed: 1, ..spec }).unwrap();
        assert_ne!(split_indices(10, &spec).unwrap(), other);
        assert!(split_indices(1, &spec).is_err());
        assert!(split_indices(10, &SplitSpec { train_fraction: 1.0, seed: 0 }).is_err());
    }

    proptest! {
        #[test]
        fn split_partitions(n in 2usize..=200, seed in any::<u64>(), frac in 0.05f64..0.95) {
            let spec = SplitSpec { train_fraction: frac, seed };
            if let Ok((tr, te)) = split_indices(n, &spec) {
                prop_assert_eq!(tr.len(), (frac * n as f64).floor() as usize);
                let mut all: Vec<usize> = tr.iter().chain(te.iter()).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            }
        }

        #[test]
        fn aggregate_matches_compensated_mean(vals in proptest::collection::vec(-50.0f64..80.0, GRID_SENSORS)) {
            let g = SensorGrid::new(vals.clone()).unwrap();
            prop_assert!((aggregate_sensor_grid(&g) - compensated_mean(&vals)).abs() <= 1e-12);
        }
    }
}
