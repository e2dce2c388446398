//! Synthetic grain-depot telemetry.
//!
//! Daily series: air temperature is a seasonal sinusoid plus weather noise;
//! the warehouse temperature follows it through a lag and exponential
//! smoothing; humidities are noisy seasonal series clipped to [0, 100]. The
//! grain temperature is `base + scale * (Σ c_k z_k + ε)`, where `z_k` are the
//! standardized features and `ε ~ N(0, noise_sd²)`.

use std::f64::consts::TAU;

use chrono::{Days, NaiveDate};
use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, GrainRecord, SensorGrid, GRID_X, GRID_Y, GRID_Z};
use crate::error::{Error, Result};
use crate::rng::{child_rng, rng_from_seed};

/// Importance weights in the order warehouse temperature, air temperature,
/// warehouse humidity, air humidity.
pub const DEFAULT_COEFFICIENTS: [f64; 4] = [0.55, 0.25, 0.15, 0.05];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_days: usize,
    pub seed: u64,
    /// `[warehouse_temp, air_temp, warehouse_humidity, air_humidity]`.
    pub coefficients: [f64; 4],
    /// Standard deviation of the target noise, in standardized units.
    pub noise_sd: f64,
    pub start_date: NaiveDate,
    pub period_days: f64,
    pub air_temp_mean: f64,
    pub air_temp_amplitude: f64,
    pub air_temp_noise_sd: f64,
    /// Days between an air temperature and its effect inside the warehouse.
    pub warehouse_lag_days: usize,
    /// Exponential smoothing rate of the warehouse temperature, in (0, 1].
    pub warehouse_smoothing: f64,
    pub warehouse_temp_noise_sd: f64,
    pub warehouse_humidity_mean: f64,
    pub warehouse_humidity_amplitude: f64,
    pub warehouse_humidity_noise_sd: f64,
    pub air_humidity_mean: f64,
    pub air_humidity_amplitude: f64,
    pub air_humidity_noise_sd: f64,
    pub grain_base: f64,
    pub grain_scale: f64,
    /// Layer-to-layer temperature step in the sensor grid, °C.
    pub vertical_gradient: f64,
    /// Within-layer spread of sensor readings, °C.
    pub horizontal_spread: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_days: 524,
            seed: 0,
            coefficients: DEFAULT_COEFFICIENTS,
            noise_sd: 0.1,
            start_date: NaiveDate::from_ymd_opt(2020, 1, 1).expect("valid date"),
            period_days: 365.25,
            air_temp_mean: 17.0,
            air_temp_amplitude: 11.0,
            air_temp_noise_sd: 5.0,
            warehouse_lag_days: 3,
            warehouse_smoothing: 0.1,
            warehouse_temp_noise_sd: 1.5,
            warehouse_humidity_mean: 62.0,
            warehouse_humidity_amplitude: 4.0,
            warehouse_humidity_noise_sd: 5.0,
            air_humidity_mean: 75.0,
            air_humidity_amplitude: 8.0,
            air_humidity_noise_sd: 10.0,
            grain_base: 16.0,
            grain_scale: 4.0,
            vertical_gradient: 0.6,
            horizontal_spread: 0.4,
        }
    }
}

impl SynthConfig {
    pub fn with_days(n_days: usize, seed: u64) -> Self {
        SynthConfig {
            n_days,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_days < 1 {
            return Err(Error::invalid("n_days must be >= 1"));
        }
        if self.coefficients.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite and non-negative"));
        }
        let sds = [
            self.noise_sd,
            self.air_temp_noise_sd,
            self.warehouse_temp_noise_sd,
            self.warehouse_humidity_noise_sd,
            self.air_humidity_noise_sd,
            self.horizontal_spread,
        ];
        if sds.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
            return Err(Error::invalid("noise levels must be finite and non-negative"));
        }
        if !(self.period_days > 0.0) {
            return Err(Error::invalid("period_days must be positive"));
        }
        if !(self.warehouse_smoothing > 0.0 && self.warehouse_smoothing <= 1.0) {
            return Err(Error::invalid("warehouse_smoothing must be in (0, 1]"));
        }
        if !self.grain_scale.is_finite() || !self.grain_base.is_finite() || !self.vertical_gradient.is_finite() {
            return Err(Error::invalid("grain parameters must be finite"));
        }
        Ok(())
    }
}

fn normal(sd: f64) -> Normal<f64> {
    Normal::new(0.0, sd).expect("validated sd")
}

fn standardize(xs: &[f64]) -> Vec<f64> {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let sd = (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n).sqrt();
    if sd > 0.0 {
        xs.iter().map(|x| (x - m) / sd).collect()
    } else {
        vec![0.0; xs.len()]
    }
}

/// Generates `n_days` daily records, deterministic per seed.
pub fn generate_records(config: &SynthConfig) -> Result<Vec<GrainRecord>> {
    config.validate()?;
    let n = config.n_days;
    let lag = config.warehouse_lag_days;
    let mut rng = rng_from_seed(config.seed);
    let season = |d: isize| (TAU * d as f64 / config.period_days).sin();
    // humidity seasons run a quarter period out of phase with temperature
    let humid_season = |d: usize| (TAU * d as f64 / config.period_days).cos();

    // warm-up so the warehouse series starts in equilibrium
    let warm = lag + (10.0 / config.warehouse_smoothing).ceil() as usize;
    let total = n + warm;
    let air_noise = normal(config.air_temp_noise_sd);
    let air: Vec<f64> = (0..total)
        .map(|k| {
            let d = k as isize - warm as isize;
            config.air_temp_mean + config.air_temp_amplitude * season(d) + air_noise.sample(&mut rng)
        })
        .collect();
    let wh_noise = normal(config.warehouse_temp_noise_sd);
    let mut smooth = config.air_temp_mean;
    let mut warehouse = Vec::with_capacity(total);
    for k in 0..total {
        let driver = air[k.saturating_sub(lag)];
        smooth += config.warehouse_smoothing * (driver - smooth);
        warehouse.push(smooth + wh_noise.sample(&mut rng));
    }
    let air = &air[warm..];
    let warehouse = &warehouse[warm..];

    let clip = |h: f64| h.clamp(0.0, 100.0);
    let wh_h_noise = normal(config.warehouse_humidity_noise_sd);
    let air_h_noise = normal(config.air_humidity_noise_sd);
    let mut wh_hum = Vec::with_capacity(n);
    let mut air_hum = Vec::with_capacity(n);
    for d in 0..n {
        wh_hum.push(clip(
            config.warehouse_humidity_mean
                + config.warehouse_humidity_amplitude * humid_season(d)
                + wh_h_noise.sample(&mut rng),
        ));
        air_hum.push(clip(
            config.air_humidity_mean + config.air_humidity_amplitude * humid_season(d) + air_h_noise.sample(&mut rng),
        ));
    }

    let z = [
        standardize(warehouse),
        standardize(air),
        standardize(&wh_hum),
        standardize(&air_hum),
    ];
    let target_noise = normal(config.noise_sd);
    let mut records = Vec::with_capacity(n);
    for d in 0..n {
        let signal: f64 = (0..4).map(|k| config.coefficients[k] * z[k][d]).sum();
        let eps = target_noise.sample(&mut rng);
        records.push(GrainRecord {
            timestamp: config.start_date.checked_add_days(Days::new(d as u64)),
            warehouse_temp: warehouse[d],
            warehouse_humidity: wh_hum[d],
            air_temp: air[d],
            air_humidity: air_hum[d],
            avg_grain_temp: config.grain_base + config.grain_scale * (signal + eps),
        });
    }
    Ok(records)
}

pub fn generate(config: &SynthConfig) -> Result<Dataset> {
    Dataset::from_records(&generate_records(config)?)
}

/// Sensor readings for one day whose whole-pile average equals that day's
/// grain temperature. Layer `z` sits `vertical_gradient * (z - 1.5)` from the
/// day's value; within each layer the spread sums to zero.
pub fn generate_sensor_day(config: &SynthConfig, day: usize) -> Result<SensorGrid> {
    if day >= config.n_days {
        return Err(Error::invalid(format!("day {day} outside 0..{}", config.n_days)));
    }
    let records = generate_records(config)?;
    let grain = records[day].avg_grain_temp;
    let mut rng = child_rng(config.seed, 0x5E45_0000 + day as u64);
    let per_layer = GRID_X * GRID_Y;
    let mut offsets = vec![0.0; GRID_X * GRID_Y * GRID_Z];
    for z in 0..GRID_Z {
        let raw: Vec<f64> = (0..per_layer)
            .map(|_| config.horizontal_spread * (2.0 * rng.random::<f64>() - 1.0))
            .collect();
        let m = raw.iter().sum::<f64>() / per_layer as f64;
        for (k, v) in raw.iter().enumerate() {
            let (x, y) = (k / GRID_Y, k % GRID_Y);
            offsets[(x * GRID_Y + y) * GRID_Z + z] = v - m;
        }
    }
    let center = (GRID_Z as f64 - 1.0) / 2.0;
    SensorGrid::from_fn(|x, y, z| {
        grain + config.vertical_gradient * (z as f64 - center) + offsets[(x * GRID_Y + y) * GRID_Z + z]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::aggregate_sensor_grid;

    #[test]
    fn default_span_row_count() {
        let recs = generate_records(&SynthConfig::default()).unwrap();
        assert_eq!(recs.len(), 524);
        assert_eq!(recs[0].timestamp, NaiveDate::from_ymd_opt(2020, 1, 1));
        assert_eq!(recs[523].timestamp, NaiveDate::from_ymd_opt(2021, 6, 7));
    }

    #[test]
    fn zero_signal_gives_constant_target() {
        let cfg = SynthConfig {
            noise_sd: 0.0,
            coefficients: [0.0; 4],
            ..SynthConfig::with_days(50, 3)
        };
        let ds = generate(&cfg).unwrap();
        assert!(ds.targets().iter().all(|&y| y == cfg.grain_base));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_records(&SynthConfig::with_days(100, 1)).unwrap();
        let b = generate_records(&SynthConfig::with_days(100, 1)).unwrap();
        let c = generate_records(&SynthConfig::with_days(100, 2)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn humidities_stay_bounded() {
        let cfg = SynthConfig {
            air_humidity_noise_sd: 60.0,
            warehouse_humidity_noise_sd: 60.0,
            ..SynthConfig::with_days(400, 5)
        };
        for r in generate_records(&cfg).unwrap() {
            assert!((0.0..=100.0).contains(&r.air_humidity));
            assert!((0.0..=100.0).contains(&r.warehouse_humidity));
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(generate(&SynthConfig::with_days(0, 0)).is_err());
        let cfg = SynthConfig {
            coefficients: [0.5, -0.1, 0.0, 0.0],
            ..Default::default()
        };
        assert!(generate(&cfg).is_err());
        let cfg = SynthConfig {
            noise_sd: f64::NAN,
            ..Default::default()
        };
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn sensor_grid_matches_day() {
        let cfg = SynthConfig::with_days(30, 4);
        let recs = generate_records(&cfg).unwrap();
        for day in [0, 7, 29] {
            let g = generate_sensor_day(&cfg, day).unwrap();
            assert_eq!(g.extents(), (7, 5, 4));
            assert!((aggregate_sensor_grid(&g) - recs[day].avg_grain_temp).abs() < 1e-9);
        }
        let flat = SynthConfig {
            vertical_gradient: 0.0,
            horizontal_spread: 0.0,
            ..cfg.clone()
        };
        let g = generate_sensor_day(&flat, 3).unwrap();
        assert!(g.readings().iter().all(|&v| v == recs[3].avg_grain_temp));
        assert!(generate_sensor_day(&cfg, 30).is_err());
    }
}
