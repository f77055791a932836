use std::io::Write;

use crate::analytic;
use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::montecarlo::{simulate, MetricKind};

use super::config::{db_to_linear, RunConfig};

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SnrDb,
    Sigma2,
    UserCount,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::Sigma2 => "sigma2",
            Axis::UserCount => "users",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(Axis::SnrDb),
            "sigma2" => Ok(Axis::Sigma2),
            "k" => Ok(Axis::UserCount),
            _ => Err(Error::InvalidConfig(format!(
                "axis must be snr, sigma2 or k (got {s:?})"
            ))),
        }
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "axis_name",
    "axis_value",
    "scheme",
    "csi_mode",
    "metric",
    "analytic_value",
    "mc_value",
    "mc_halfwidth",
    "trials",
    "seed",
];

fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// One swept point: the printed axis value and the system with that value
/// applied (rate and CSI mode are filled in per row).
fn axis_points(cfg: &RunConfig, axis: Axis) -> Result<Vec<(String, SystemConfig)>> {
    let base = &cfg.system;
    let points: Vec<(String, SystemConfig)> = match axis {
        Axis::SnrDb => cfg
            .snr_grid_db
            .iter()
            .map(|&db| {
                (
                    db.to_string(),
                    SystemConfig {
                        rho: db_to_linear(db),
                        ..base.clone()
                    },
                )
            })
            .collect(),
        Axis::Sigma2 => cfg
            .sigma2_grid
            .iter()
            .map(|&s| {
                (
                    s.to_string(),
                    SystemConfig {
                        sigma2: s,
                        ..base.clone()
                    },
                )
            })
            .collect(),
        Axis::UserCount => {
            if let Some(&k) = cfg.users_grid.iter().find(|&&k| k < 2) {
                return Err(Error::InvalidConfig(format!(
                    "users_grid values must be at least 2 (got {k})"
                )));
            }
            cfg.users_grid
                .iter()
                .map(|&k| {
                    (
                        k.to_string(),
                        SystemConfig {
                            users: k,
                            ..base.clone()
                        },
                    )
                })
                .collect()
        }
    };
    if points.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "the {} grid is empty",
            axis.name()
        )));
    }
    for (_, p) in &points {
        p.validate()?;
    }
    Ok(points)
}

/// Runs the sweep and writes one CSV row per (axis value, rate, scheme, CSI
/// mode, metric). Returns the number of data rows.
///
/// The metric column carries the multicast rate as `metric@rm=<R_M>`.
pub fn run_sweep<W: Write>(cfg: &RunConfig, axis: Axis, out: W) -> Result<usize> {
    cfg.validate()?;
    let points = axis_points(cfg, axis)?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(format!("cannot write CSV: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    let mut rows = 0;
    for (label, point) in &points {
        for &rate in &cfg.rates {
            for &scheme in &cfg.schemes {
                for &mode in &cfg.csi_modes {
                    let sys = SystemConfig {
                        rate_multicast: rate,
                        csi_mode: mode,
                        ..point.clone()
                    };
                    for &kind in &cfg.metrics {
                        if kind != MetricKind::OutageProb && sys.users < 2 {
                            continue;
                        }
                        let analytic = analytic::evaluate(&sys, scheme, kind)?;
                        let mc = simulate(&sys, scheme, kind, cfg.trials, cfg.seed)?;
                        let record = [
                            axis.name().to_string(),
                            label.clone(),
                            scheme.as_str().to_string(),
                            mode.as_str().to_string(),
                            format!("{}@rm={}", kind.as_str(), rate),
                            analytic.map(num).unwrap_or_default(),
                            num(mc.value),
                            num(mc.half_width_95),
                            mc.trials.to_string(),
                            cfg.seed.to_string(),
                        ];
                        w.write_record(&record).map_err(io)?;
                        rows += 1;
                    }
                }
            }
        }
    }
    w.flush()
        .map_err(|e| Error::Io(format!("cannot write CSV: {e}")))?;
    Ok(rows)
}
