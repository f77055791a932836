//! Per-realization power split and rates.
//!
//! The base station superposes the multicast stream (power share `θ_M`) on
//! the unicast stream (`θ_U`). Users decode multicast first, cancel it, then
//! decode unicast. The split gives the weakest user exactly `R_M`.

use crate::channel::{ChannelRealization, CsiMode, SystemConfig};
use crate::error::{domain, Error, Result};

/// Optimal power shares for one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub theta_m: f64,
    pub theta_u: f64,
    /// Even `θ_M = 1` cannot deliver `R_M` to the weakest user.
    pub outage: bool,
}

/// Minimal multicast share that serves the weakest user at `R_M`; the rest
/// goes to unicast.
pub fn power_split(alpha_weakest: f64, rho: f64, rate_multicast: f64) -> Result<PowerSplit> {
    if !(rho > 0.0) {
        return Err(domain(
            "power_split",
            format!("rho must be positive, got {rho}"),
        ));
    }
    if !(alpha_weakest >= 0.0) {
        return Err(domain(
            "power_split",
            format!("gain must be non-negative, got {alpha_weakest}"),
        ));
    }
    if !(rate_multicast >= 0.0) {
        return Err(domain(
            "power_split",
            format!("rate must be non-negative, got {rate_multicast}"),
        ));
    }
    let eps = rate_multicast.exp2() - 1.0;
    let threshold = eps / rho;
    if alpha_weakest < threshold {
        return Ok(PowerSplit {
            theta_m: 1.0,
            theta_u: 0.0,
            outage: true,
        });
    }
    let theta_u = if alpha_weakest == 0.0 {
        0.0
    } else if alpha_weakest.is_infinite() {
        1.0 / (1.0 + eps)
    } else {
        ((alpha_weakest - threshold) / (alpha_weakest * (1.0 + eps))).max(0.0)
    };
    Ok(PowerSplit {
        theta_m: 1.0 - theta_u,
        theta_u,
        outage: false,
    })
}

fn check_gain(func: &'static str, alpha: f64, rho: f64) -> Result<()> {
    if !(alpha >= 0.0) || !(rho >= 0.0) {
        return Err(domain(func, format!("alpha = {alpha}, rho = {rho}")));
    }
    Ok(())
}

/// `log₂(1 + θ_M α / (θ_U α + 1/ρ))`.
pub fn multicast_rate(alpha: f64, split: &PowerSplit, rho: f64) -> Result<f64> {
    check_gain("multicast_rate", alpha, rho)?;
    if alpha == 0.0 || rho == 0.0 {
        return Ok(0.0);
    }
    Ok(
        (split.theta_m * alpha / (split.theta_u * alpha + 1.0 / rho)).ln_1p()
            / std::f64::consts::LN_2,
    )
}

/// `log₂(1 + ρ θ_U α)`.
pub fn unicast_rate(alpha: f64, theta_u: f64, rho: f64) -> Result<f64> {
    check_gain("unicast_rate", alpha, rho)?;
    if !(theta_u >= 0.0) {
        return Err(domain("unicast_rate", format!("theta_u = {theta_u}")));
    }
    Ok((rho * theta_u * alpha).ln_1p() / std::f64::consts::LN_2)
}

/// Indices of the strongest and second-strongest gain plus the weakest
/// gain. Ties go to the lower index.
fn rank(gains: &[f64]) -> (usize, usize, f64) {
    let mut first = 0;
    for (i, &g) in gains.iter().enumerate().skip(1) {
        if g > gains[first] {
            first = i;
        }
    }
    let mut second = usize::from(first == 0);
    for (i, &g) in gains.iter().enumerate() {
        if i != first && g > gains[second] {
            second = i;
        }
    }
    let weakest = gains.iter().copied().fold(f64::INFINITY, f64::min);
    (first, second, weakest)
}

fn max_excluding_first(gains: &[f64]) -> f64 {
    gains[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn need_two_users(config: &SystemConfig, realization: &ChannelRealization) -> Result<()> {
    if config.users < 2 || realization.true_gains.len() < 2 {
        return Err(Error::Unsupported(
            "secrecy throughput needs at least two users".into(),
        ));
    }
    if realization.true_gains.len() != config.users {
        return Err(Error::InvalidConfig(format!(
            "realization has {} users, configuration has {}",
            realization.true_gains.len(),
            config.users
        )));
    }
    Ok(())
}

/// The unicast target, its strongest eavesdropper and the weakest gain,
/// under the CSI mode's decision rule.
struct Roles {
    target: f64,
    eavesdropper: f64,
    weakest: f64,
    /// Gain that sets the power split.
    driving: f64,
}

/// `None` when the target is not the strongest user, which can only happen
/// when users are ranked by distance.
fn roles(realization: &ChannelRealization, config: &SystemConfig) -> Option<Roles> {
    match config.csi_mode {
        CsiMode::Imperfect | CsiMode::Perfect => {
            let gains = realization.decision_gains();
            let (first, second, weakest) = rank(gains);
            Some(Roles {
                target: gains[first],
                eavesdropper: gains[second],
                weakest,
                driving: weakest,
            })
        }
        CsiMode::Sos => {
            let gains = &realization.true_gains;
            let eavesdropper = max_excluding_first(gains);
            if gains[0] < eavesdropper {
                return None;
            }
            Some(Roles {
                target: gains[0],
                eavesdropper,
                weakest: gains.iter().copied().fold(f64::INFINITY, f64::min),
                driving: gains[gains.len() - 1],
            })
        }
    }
}

/// NOMA secrecy unicast throughput of one realization.
///
/// Imperfect/perfect CSI: the unicast stream goes to the strongest estimated
/// user and the split is set by the weakest one. Distance-ranked CSI: the
/// target is the nearest user and the split is set by the farthest user's
/// gain. Zero on multicast outage.
pub fn secrecy_throughput_noma(
    realization: &ChannelRealization,
    config: &SystemConfig,
) -> Result<f64> {
    need_two_users(config, realization)?;
    if config.rho == 0.0 {
        return Ok(0.0);
    }
    let Some(r) = roles(realization, config) else {
        return Ok(0.0);
    };
    let eps = config.eps_m();
    if r.weakest < eps / config.rho {
        return Ok(0.0);
    }
    let split = power_split(r.driving, config.rho, config.rate_multicast)?;
    if split.outage {
        return Ok(0.0);
    }
    let snr = config.rho * split.theta_u;
    Ok(((1.0 + snr * r.target) / (1.0 + snr * r.eavesdropper))
        .log2()
        .max(0.0))
}

/// High-SNR surrogate of [`secrecy_throughput_noma`]: `θ_U` replaced by its
/// limit `1/(1+ε_M)`, giving `log₂((ν+ρα₁)/(ν+ρα₂))` with `ν = 1+ε_M`.
pub fn secrecy_surrogate_noma(
    realization: &ChannelRealization,
    config: &SystemConfig,
) -> Result<f64> {
    need_two_users(config, realization)?;
    if config.rho == 0.0 {
        return Ok(0.0);
    }
    let Some(r) = roles(realization, config) else {
        return Ok(0.0);
    };
    let eps = config.eps_m();
    if r.weakest < eps / config.rho {
        return Ok(0.0);
    }
    let nu = 1.0 + eps;
    let rho = config.rho;
    Ok(((nu + rho * r.target) / (nu + rho * r.eavesdropper))
        .log2()
        .max(0.0))
}

/// Half-frame OMA counterpart of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct OmaRates {
    /// `½ log₂(1 + ρα_k)` per user, in realization order.
    pub multicast: Vec<f64>,
    /// Some user's gain is below `λ_M/ρ`.
    pub outage: bool,
    pub secrecy: f64,
}

pub fn oma_rates(realization: &ChannelRealization, config: &SystemConfig) -> Result<OmaRates> {
    need_two_users(config, realization)?;
    let rho = config.rho;
    let gains = match config.csi_mode {
        CsiMode::Sos => &realization.true_gains[..],
        _ => realization.decision_gains(),
    };
    let multicast = gains
        .iter()
        .map(|&a| 0.5 * (rho * a).ln_1p() / std::f64::consts::LN_2)
        .collect();
    Ok(OmaRates {
        multicast,
        outage: oma_outage(realization, config),
        secrecy: oma_secrecy(realization, config)?,
    })
}

/// OMA secrecy throughput alone, `½ log₂((1+ρα_{π1})/(1+ρα_{π2}))`.
pub fn oma_secrecy(realization: &ChannelRealization, config: &SystemConfig) -> Result<f64> {
    need_two_users(config, realization)?;
    let rho = config.rho;
    Ok(match roles(realization, config) {
        Some(r) => (0.5 * ((1.0 + rho * r.target) / (1.0 + rho * r.eavesdropper)).log2()).max(0.0),
        None => 0.0,
    })
}

/// NOMA multicast outage of one realization under the CSI mode's gains.
pub fn noma_outage(realization: &ChannelRealization, config: &SystemConfig) -> bool {
    outage_below(realization, config, config.eps_m())
}

/// OMA multicast outage of one realization.
pub fn oma_outage(realization: &ChannelRealization, config: &SystemConfig) -> bool {
    outage_below(realization, config, config.lambda_m())
}

fn outage_below(realization: &ChannelRealization, config: &SystemConfig, threshold: f64) -> bool {
    let gains = match config.csi_mode {
        CsiMode::Sos => &realization.true_gains[..],
        _ => realization.decision_gains(),
    };
    let weakest = gains.iter().copied().fold(f64::INFINITY, f64::min);
    config.rho == 0.0 || weakest < threshold / config.rho
}
