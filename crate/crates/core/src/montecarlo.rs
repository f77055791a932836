//! Monte Carlo estimates of outage and secrecy throughput.
//!
//! Trials are grouped into fixed blocks of [`BLOCK_SIZE`]. Block `b` draws
//! from `RandomStream::new(seed, b)`, and block statistics are merged in a
//! fixed pairwise tree, so the result is bit-identical for any number of
//! worker threads.

use rayon::prelude::*;

use crate::channel::{ChannelRealization, CsiMode, RandomStream, SystemConfig};
use crate::error::{Error, Result};
use crate::noma_core::{
    noma_outage, oma_outage, oma_secrecy, secrecy_surrogate_noma, secrecy_throughput_noma,
};

pub const BLOCK_SIZE: u64 = 4096;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Noma,
    Oma,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Noma => "noma",
            Scheme::Oma => "oma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    OutageProb,
    /// Throughput with the exact per-realization power split.
    SecrecyThroughput,
    /// Throughput with the high-SNR power split `θ_U = 1/(1+ε_M)`.
    SecrecyThroughputSurrogate,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::OutageProb => "outage",
            MetricKind::SecrecyThroughput => "secrecy",
            MetricKind::SecrecyThroughputSurrogate => "secrecy_surrogate",
        }
    }
}

/// A simulated metric with its 95% confidence half-width.
///
/// For outage the value is the sample proportion and the half-width is that
/// of the Wilson score interval. For throughput it is the sample mean with a
/// normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub value: f64,
    pub half_width_95: f64,
    pub trials: u64,
    pub metric_kind: MetricKind,
    pub scheme: Scheme,
    pub csi_mode: CsiMode,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let (na, nb, nf) = (a.n as f64, b.n as f64, n as f64);
        let delta = b.mean - a.mean;
        Moments {
            n,
            mean: a.mean + delta * nb / nf,
            m2: a.m2 + b.m2 + delta * delta * na * nb / nf,
        }
    }
}

fn tree_merge(parts: &[Moments]) -> Moments {
    match parts.len() {
        0 => Moments::default(),
        1 => parts[0],
        len => {
            let (l, r) = parts.split_at(len / 2);
            Moments::merge(tree_merge(l), tree_merge(r))
        }
    }
}

fn trial_value(
    r: &ChannelRealization,
    config: &SystemConfig,
    scheme: Scheme,
    kind: MetricKind,
) -> Result<f64> {
    Ok(match (kind, scheme) {
        (MetricKind::OutageProb, Scheme::Noma) => f64::from(u8::from(noma_outage(r, config))),
        (MetricKind::OutageProb, Scheme::Oma) => f64::from(u8::from(oma_outage(r, config))),
        (MetricKind::SecrecyThroughput, Scheme::Noma) => secrecy_throughput_noma(r, config)?,
        (MetricKind::SecrecyThroughputSurrogate, Scheme::Noma) => {
            secrecy_surrogate_noma(r, config)?
        }
        (_, Scheme::Oma) => oma_secrecy(r, config)?,
    })
}

fn run_block(
    config: &SystemConfig,
    scheme: Scheme,
    kind: MetricKind,
    seed: u64,
    block: u64,
    trials: u64,
) -> Result<Moments> {
    let mut rng = RandomStream::new(seed, block);
    let mut r = ChannelRealization::default();
    let mut m = Moments::default();
    for _ in 0..trials {
        r.resample(config, &mut rng);
        m.push(trial_value(&r, config, scheme, kind)?);
    }
    Ok(m)
}

fn wilson_half_width(p: f64, n: f64) -> f64 {
    let z2 = Z95 * Z95;
    Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// Estimates `kind` for `scheme` from `trials` independent realizations on
/// the current rayon pool.
pub fn simulate(
    config: &SystemConfig,
    scheme: Scheme,
    kind: MetricKind,
    trials: u64,
    seed: u64,
) -> Result<MetricEstimate> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if kind != MetricKind::OutageProb && config.users < 2 {
        return Err(Error::Unsupported(
            "secrecy throughput needs at least two users".into(),
        ));
    }
    let blocks = trials.div_ceil(BLOCK_SIZE);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK_SIZE.min(trials - b * BLOCK_SIZE);
            run_block(config, scheme, kind, seed, b, len)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = tree_merge(&parts);
    let n = m.n as f64;
    let half_width_95 = match kind {
        MetricKind::OutageProb => wilson_half_width(m.mean, n),
        _ if m.n > 1 => Z95 * (m.m2 / (n - 1.0) / n).sqrt(),
        _ => f64::INFINITY,
    };
    Ok(MetricEstimate {
        value: m.mean,
        half_width_95,
        trials,
        metric_kind: kind,
        scheme,
        csi_mode: config.csi_mode,
    })
}

/// [`simulate`] on a dedicated pool of `workers` threads.
pub fn simulate_with_workers(
    config: &SystemConfig,
    scheme: Scheme,
    kind: MetricKind,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<MetricEstimate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| simulate(config, scheme, kind, trials, seed))
}
