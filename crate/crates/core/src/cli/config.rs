//! Run configuration: a flat TOML file plus `key=value` overrides.
//!
//! Every key is optional; missing keys take the defaults below.
//!
//! ```toml
//! users = 8                  # K
//! radius = 5.0               # D, meters
//! path_loss_exponent = 2.0   # eta
//! snr_db = 30.0              # operating point when SNR is not swept
//! rate_multicast = [0.5, 1.2]
//! sigma2 = 0.01
//! csi_modes = ["imperfect", "sos"]
//! schemes = ["noma", "oma"]
//! metrics = ["outage", "secrecy", "secrecy_surrogate"]
//! quad_c = 50
//! quad_m = 5
//! quad_n = 10
//! quad_l = 100
//! quad_q = 10
//! composition_cap = 10000000
//! trials = 100000
//! seed = 20190417
//! snr_grid_db = [0, 5, 10, 15, 20, 25, 30, 35, 40]
//! sigma2_grid = [0.0, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03]
//! users_grid = [2, 3, 4, 5, 6, 7, 8]
//! ```
//!
//! List-valued keys also accept a single scalar.

use std::path::Path;

use serde::Deserialize;

use crate::channel::{CsiMode, QuadOrders, SystemConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{MetricKind, Scheme};

pub const DEFAULT_SEED: u64 = 20_190_417;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    users: Option<usize>,
    radius: Option<f64>,
    path_loss_exponent: Option<f64>,
    snr_db: Option<f64>,
    rate_multicast: Option<OneOrMany<f64>>,
    sigma2: Option<f64>,
    csi_modes: Option<OneOrMany<String>>,
    schemes: Option<OneOrMany<String>>,
    metrics: Option<OneOrMany<String>>,
    quad_c: Option<usize>,
    quad_m: Option<usize>,
    quad_n: Option<usize>,
    quad_l: Option<usize>,
    quad_q: Option<usize>,
    composition_cap: Option<u64>,
    trials: Option<u64>,
    seed: Option<u64>,
    snr_grid_db: Option<OneOrMany<f64>>,
    sigma2_grid: Option<OneOrMany<f64>>,
    users_grid: Option<OneOrMany<usize>>,
    workers: Option<usize>,
}

/// Everything a sweep or verification run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Operating point; `rho` and `rate_multicast` are overwritten per row.
    pub system: SystemConfig,
    pub snr_db: f64,
    pub rates: Vec<f64>,
    pub csi_modes: Vec<CsiMode>,
    pub schemes: Vec<Scheme>,
    pub metrics: Vec<MetricKind>,
    pub trials: u64,
    pub seed: u64,
    pub snr_grid_db: Vec<f64>,
    pub sigma2_grid: Vec<f64>,
    pub users_grid: Vec<usize>,
    pub workers: Option<usize>,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn parse_scheme(s: &str) -> Result<Scheme> {
    match s.to_ascii_lowercase().as_str() {
        "noma" => Ok(Scheme::Noma),
        "oma" => Ok(Scheme::Oma),
        _ => Err(Error::InvalidConfig(format!("unknown scheme {s:?}"))),
    }
}

fn parse_metric(s: &str) -> Result<MetricKind> {
    match s.to_ascii_lowercase().as_str() {
        "outage" => Ok(MetricKind::OutageProb),
        "secrecy" => Ok(MetricKind::SecrecyThroughput),
        "secrecy_surrogate" => Ok(MetricKind::SecrecyThroughputSurrogate),
        _ => Err(Error::InvalidConfig(format!("unknown metric {s:?}"))),
    }
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::InvalidConfig(format!("override {item:?} is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    table.insert(key.to_string(), value);
    Ok(())
}

impl RunConfig {
    /// Parses `text` (TOML) and applies `overrides` in order.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e| Error::InvalidConfig(format!("cannot parse config: {e}")))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let file: FileConfig = table
            .try_into()
            .map_err(|e| Error::InvalidConfig(format!("{e}")))?;
        Self::from_file_config(file)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml_str(&text, overrides)
    }

    fn from_file_config(f: FileConfig) -> Result<Self> {
        let defaults = SystemConfig::default();
        let dq = defaults.quad;
        let snr_db = f.snr_db.unwrap_or(30.0);
        let rates = f.rate_multicast.map_or(vec![0.5, 1.2], OneOrMany::into_vec);
        let system = SystemConfig {
            users: f.users.unwrap_or(defaults.users),
            radius: f.radius.unwrap_or(defaults.radius),
            path_loss_exponent: f.path_loss_exponent.unwrap_or(defaults.path_loss_exponent),
            rho: db_to_linear(snr_db),
            rate_multicast: rates.first().copied().unwrap_or(defaults.rate_multicast),
            sigma2: f.sigma2.unwrap_or(defaults.sigma2),
            csi_mode: CsiMode::Imperfect,
            quad: QuadOrders {
                c: f.quad_c.unwrap_or(dq.c),
                m: f.quad_m.unwrap_or(dq.m),
                n: f.quad_n.unwrap_or(dq.n),
                l: f.quad_l.unwrap_or(dq.l),
                q: f.quad_q.unwrap_or(dq.q),
            },
            composition_cap: f
                .composition_cap
                .map_or(defaults.composition_cap, u128::from),
        };
        let csi_modes = f
            .csi_modes
            .map_or(vec!["imperfect".into(), "sos".into()], OneOrMany::into_vec)
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<CsiMode>>>()?;
        let schemes = f
            .schemes
            .map_or(vec!["noma".into(), "oma".into()], OneOrMany::into_vec)
            .iter()
            .map(|s| parse_scheme(s))
            .collect::<Result<Vec<_>>>()?;
        let metrics = f
            .metrics
            .map_or(
                vec![
                    "outage".into(),
                    "secrecy".into(),
                    "secrecy_surrogate".into(),
                ],
                OneOrMany::into_vec,
            )
            .iter()
            .map(|s| parse_metric(s))
            .collect::<Result<Vec<_>>>()?;
        let cfg = RunConfig {
            system,
            snr_db,
            rates,
            csi_modes,
            schemes,
            metrics,
            trials: f.trials.unwrap_or(100_000),
            seed: f.seed.unwrap_or(DEFAULT_SEED),
            snr_grid_db: f.snr_grid_db.map_or(
                (0..=8).map(|i| 5.0 * i as f64).collect(),
                OneOrMany::into_vec,
            ),
            sigma2_grid: f.sigma2_grid.map_or(
                vec![0.0, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03],
                OneOrMany::into_vec,
            ),
            users_grid: f.users_grid.map_or((2..=8).collect(), OneOrMany::into_vec),
            workers: f.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        self.system.validate()?;
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.rates.is_empty() || self.csi_modes.is_empty() || self.schemes.is_empty() {
            return bad("rate_multicast, csi_modes and schemes must not be empty".into());
        }
        for &r in &self.rates {
            SystemConfig {
                rate_multicast: r,
                ..self.system.clone()
            }
            .validate()?;
        }
        if !self.snr_db.is_finite() || self.snr_grid_db.iter().any(|v| !v.is_finite()) {
            return bad("SNR values must be finite dB numbers".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    /// Operating point with the given linear SNR, rate and CSI mode.
    pub fn point(&self, rho: f64, rate: f64, mode: CsiMode) -> SystemConfig {
        SystemConfig {
            rho,
            rate_multicast: rate,
            csi_mode: mode,
            ..self.system.clone()
        }
    }
}
