use crate::channel::SystemConfig;
use crate::error::{domain, Error, Result};
use crate::specfun::{chebyshev_rule, lower_gamma_scaled};

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Pr{α̂ ≥ threshold/ρ}` for one user at a uniform distance, by
/// Gauss–Chebyshev quadrature of order `order` over the radius.
pub(crate) fn coverage_quadrature(
    config: &SystemConfig,
    threshold: f64,
    sigma2: f64,
    order: usize,
) -> Result<f64> {
    let d_max = config.radius;
    let eta = config.path_loss_exponent;
    let rho = config.rho;
    let rule = chebyshev_rule(order, d_max)?;
    let mut acc = 0.0;
    for (x, w) in rule.iter() {
        let s = x.powf(-eta) - sigma2;
        if !(s > 0.0) {
            return Err(domain(
                "outage quadrature",
                format!("sigma2 = {sigma2} reaches the gain variance at node {x}"),
            ));
        }
        acc += w * x * (-threshold / (rho * s)).exp();
    }
    Ok(2.0 * acc / (d_max * d_max))
}

fn one_minus_power(coverage: f64, users: usize) -> f64 {
    (1.0 - coverage.powi(users as i32)).clamp(0.0, 1.0)
}

fn quadrature_outage(config: &SystemConfig, threshold: f64, order: usize) -> Result<f64> {
    config.validate()?;
    if config.rho == 0.0 {
        return Ok(1.0);
    }
    let cov = coverage_quadrature(config, threshold, config.effective_sigma2(), order)?;
    Ok(one_minus_power(cov, config.users))
}

fn exact_outage(config: &SystemConfig, threshold: f64) -> Result<f64> {
    config.validate()?;
    if config.effective_sigma2() != 0.0 {
        return Err(Error::Unsupported(format!(
            "the exact perfect-CSI outage needs sigma2 = 0 (got {})",
            config.sigma2
        )));
    }
    if config.rho == 0.0 {
        return Ok(1.0);
    }
    let eta = config.path_loss_exponent;
    let b = threshold / config.rho * config.radius.powf(eta);
    let cov = 2.0 / eta * lower_gamma_scaled(2.0 / eta, b)?;
    Ok(one_minus_power(cov, config.users))
}

/// `Pr{α_(k) ≥ z}` for each distance rank `k = 1..=K`.
pub fn ranked_coverage(config: &SystemConfig, threshold: f64) -> Result<Vec<f64>> {
    config.validate()?;
    let k_total = config.users;
    if config.rho == 0.0 {
        return Ok(vec![0.0; k_total]);
    }
    let eta = config.path_loss_exponent;
    let b = threshold / config.rho * config.radius.powf(eta);
    let mut scaled = Vec::with_capacity(k_total);
    for s in 1..=k_total {
        scaled.push(lower_gamma_scaled(2.0 * s as f64 / eta, b)?);
    }
    let mut out = Vec::with_capacity(k_total);
    for k in 1..=k_total {
        let mut sum = 0.0;
        for j in 0..=(k_total - k) {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binomial(k_total - k, j) * scaled[k + j - 1];
        }
        out.push(2.0 * k as f64 * binomial(k_total, k) * sum / eta);
    }
    Ok(out)
}

fn ranked_outage(config: &SystemConfig, threshold: f64) -> Result<f64> {
    let cov = ranked_coverage(config, threshold)?;
    Ok((1.0 - cov.iter().product::<f64>()).clamp(0.0, 1.0))
}

/// NOMA multicast outage with estimated gains, approximated by
/// Gauss–Chebyshev quadrature of order `c`.
///
/// Uses `σ_ζ²` in imperfect mode and zero otherwise.
pub fn outage_noma_imperfect(config: &SystemConfig) -> Result<f64> {
    quadrature_outage(config, config.eps_m(), config.quad.c)
}

/// Same as [`outage_noma_imperfect`] with an explicit quadrature order.
pub fn outage_noma_imperfect_with_order(config: &SystemConfig, order: usize) -> Result<f64> {
    quadrature_outage(config, config.eps_m(), order)
}

/// Exact NOMA multicast outage with perfect CSI,
/// `1 − [(2/η) γ(2/η, zD^η) / (zD^η)^{2/η}]^K`.
pub fn outage_noma_perfect(config: &SystemConfig) -> Result<f64> {
    exact_outage(config, config.eps_m())
}

/// NOMA multicast outage when users are ranked by distance: one minus the
/// product over ranks of the per-rank coverage.
pub fn outage_noma_sos(config: &SystemConfig) -> Result<f64> {
    ranked_outage(config, config.eps_m())
}

pub fn outage_oma_imperfect(config: &SystemConfig) -> Result<f64> {
    quadrature_outage(config, config.lambda_m(), config.quad.c)
}

pub fn outage_oma_imperfect_with_order(config: &SystemConfig, order: usize) -> Result<f64> {
    quadrature_outage(config, config.lambda_m(), order)
}

pub fn outage_oma_perfect(config: &SystemConfig) -> Result<f64> {
    exact_outage(config, config.lambda_m())
}

pub fn outage_oma_sos(config: &SystemConfig) -> Result<f64> {
    ranked_outage(config, config.lambda_m())
}
