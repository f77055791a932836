//! Closed-form evaluators for multicast outage and average secrecy unicast
//! throughput.
//!
//! All evaluators take linear SNR, are pure, and return `Ok(1.0)` (outage)
//! or `Ok(0.0)` (throughput) at `ρ = 0`. Outage values are clamped to
//! `[0, 1]` after quadrature.

mod compositions;
mod outage;
mod secrecy;

pub use compositions::{
    check_composition_cap, composition_count, weak_compositions, WeakCompositions,
};
pub use outage::{
    outage_noma_imperfect, outage_noma_imperfect_with_order, outage_noma_perfect, outage_noma_sos,
    outage_oma_imperfect, outage_oma_imperfect_with_order, outage_oma_perfect, outage_oma_sos,
    ranked_coverage,
};
pub use secrecy::{
    secrecy_noma_imperfect, secrecy_noma_sos_k2, secrecy_oma_imperfect, secrecy_oma_sos_k2,
};

use crate::channel::{CsiMode, SystemConfig};
use crate::error::Result;
use crate::montecarlo::{MetricKind, Scheme};

/// Closed-form value matching a simulated metric, or `None` when no
/// expression exists for that combination.
///
/// The secrecy expressions approximate the high-SNR surrogate; for NOMA they
/// are reported only against [`MetricKind::SecrecyThroughputSurrogate`]. For
/// OMA the surrogate and the exact throughput coincide.
pub fn evaluate(config: &SystemConfig, scheme: Scheme, kind: MetricKind) -> Result<Option<f64>> {
    use CsiMode::*;
    use MetricKind::*;
    use Scheme::*;
    let v = match (kind, scheme, config.csi_mode) {
        (OutageProb, Noma, Imperfect) => outage_noma_imperfect(config)?,
        (OutageProb, Noma, Perfect) => outage_noma_perfect(config)?,
        (OutageProb, Noma, Sos) => outage_noma_sos(config)?,
        (OutageProb, Oma, Imperfect) => outage_oma_imperfect(config)?,
        (OutageProb, Oma, Perfect) => outage_oma_perfect(config)?,
        (OutageProb, Oma, Sos) => outage_oma_sos(config)?,
        (_, _, _) if config.users < 2 => return Ok(None),
        (SecrecyThroughput, Noma, _) => return Ok(None),
        (SecrecyThroughputSurrogate, Noma, Imperfect | Perfect) => secrecy_noma_imperfect(config)?,
        (SecrecyThroughputSurrogate, Noma, Sos) if config.users == 2 => {
            secrecy_noma_sos_k2(config)?
        }
        (_, Oma, Imperfect | Perfect) => secrecy_oma_imperfect(config)?,
        (_, Oma, Sos) if config.users == 2 => secrecy_oma_sos_k2(config)?,
        _ => return Ok(None),
    };
    Ok(Some(v))
}
