use std::f64::consts::LN_2;

use rayon::prelude::*;

use super::compositions::{check_composition_cap, weak_compositions};
use super::outage::coverage_quadrature;
use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::specfun::{chebyshev_rule, ei_scaled, lower_gamma_scaled};

/// `e^y Ei(−y)` for `y > 0`.
fn e_ei(y: f64) -> Result<f64> {
    ei_scaled(-y)
}

fn need_users(config: &SystemConfig, pred: impl Fn(usize) -> bool, what: &str) -> Result<()> {
    if !pred(config.users) {
        return Err(Error::Unsupported(format!(
            "{what} (got K = {})",
            config.users
        )));
    }
    Ok(())
}

const TERM_CHUNK: usize = 2048;

struct Term {
    coeff: f64,
    /// `Σ_t r_t / s_t`; multiplied by `τ` this is `B`.
    b_per_tau: f64,
    empty: bool,
}

/// Multinomial expansion shared by the imperfect-CSI NOMA and OMA secrecy
/// evaluators. `nu` is `1 + ε_M` for NOMA and `1` for OMA.
fn multinomial_secrecy(config: &SystemConfig, nu: f64) -> Result<f64> {
    let k_total = config.users;
    let d_max = config.radius;
    let eta = config.path_loss_exponent;
    let rho = config.rho;
    let sigma2 = config.effective_sigma2();
    let n = config.quad.n;
    check_composition_cap(k_total - 1, n + 1, config.composition_cap)?;

    let outer = chebyshev_rule(config.quad.m, 1.0)?;
    let inner = chebyshev_rule(n, d_max)?;
    let w: Vec<f64> = inner
        .iter()
        .map(|(x, wt)| 2.0 * wt * x / (d_max * d_max))
        .collect();
    let inv_s: Vec<f64> = inner
        .nodes
        .iter()
        .map(|x| 1.0 / (x.powf(-eta) - sigma2))
        .collect();

    let mut fact = vec![1.0f64; k_total];
    for i in 1..k_total {
        fact[i] = fact[i - 1] * i as f64;
    }
    let terms: Vec<Term> = weak_compositions(k_total - 1, n + 1)
        .map(|c| {
            let r = &c[1..];
            let used: usize = r.iter().sum();
            let mut coeff = fact[k_total - 1] / fact[k_total - 1 - used];
            let mut b_per_tau = 0.0;
            for (t, &rt) in r.iter().enumerate() {
                if rt > 0 {
                    coeff *= (-w[t]).powi(rt as i32) / fact[rt];
                    b_per_tau += rt as f64 * inv_s[t];
                }
            }
            Term {
                coeff,
                b_per_tau,
                empty: used == 0,
            }
        })
        .collect();

    let term_sum = |tau: f64, chunk: &[Term]| -> Result<f64> {
        let rt = rho * tau;
        let mut acc = 0.0;
        for term in chunk {
            let b = tau * term.b_per_tau;
            let mut sum = 0.0;
            for (&wt, &is) in w.iter().zip(&inv_s) {
                let mu = (b + is) / rt;
                let g = 1.0 - b / (rt * mu) + nu * e_ei(nu * mu)? * (mu - b / rt);
                sum += wt * g;
            }
            let i2 = if term.empty { 1.0 / rt } else { 0.0 };
            acc += term.coeff * (i2 - sum / rt);
        }
        Ok(acc)
    };

    let mut total = 0.0;
    for (tau, weight) in outer.iter() {
        // fixed chunking and in-order summation keep the result independent
        // of the thread count
        let partial = terms
            .par_chunks(TERM_CHUNK)
            .map(|chunk| term_sum(tau, chunk))
            .collect::<Result<Vec<f64>>>()?;
        let acc = 1.0 / (rho * tau) - partial.iter().sum::<f64>();
        total += weight * acc;
    }
    Ok(k_total as f64 * rho / LN_2 * total)
}

/// Average NOMA secrecy unicast throughput with estimated gains (high-SNR
/// power split), via the multinomial expansion over `n` radial nodes and an
/// `m`-node outer rule.
///
/// Fails with [`Error::CompositionCap`] when `C(K+n−1, n)` exceeds the
/// configured cap.
pub fn secrecy_noma_imperfect(config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    need_users(config, |k| k >= 2, "secrecy throughput needs K >= 2")?;
    if config.rho == 0.0 {
        return Ok(0.0);
    }
    let eps = config.eps_m();
    let coverage = coverage_quadrature(config, eps, config.effective_sigma2(), config.quad.c)?;
    let no_outage = coverage.powi(config.users as i32).clamp(0.0, 1.0);
    Ok(no_outage * multinomial_secrecy(config, 1.0 + eps)?)
}

/// OMA counterpart of [`secrecy_noma_imperfect`]. Does not depend on `R_M`.
pub fn secrecy_oma_imperfect(config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    need_users(config, |k| k >= 2, "secrecy throughput needs K >= 2")?;
    if config.rho == 0.0 {
        return Ok(0.0);
    }
    Ok(0.5 * multinomial_secrecy(config, 1.0)?)
}

/// Two-user NOMA secrecy throughput when the nearest user is served and
/// users are ranked by distance.
pub fn secrecy_noma_sos_k2(config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    need_users(
        config,
        |k| k == 2,
        "the distance-ranked secrecy expression is two-user only",
    )?;
    if config.rho == 0.0 {
        return Ok(0.0);
    }
    let d_max = config.radius;
    let eta = config.path_loss_exponent;
    let rho = config.rho;
    let eps = config.eps_m();
    let nu = 1.0 + eps;
    let z = eps / rho;
    let d_eta = d_max.powf(eta);
    let d2 = d_max * d_max;
    let d4 = d2 * d2;
    let outer = chebyshev_rule(config.quad.l, 1.0)?;
    let radial = chebyshev_rule(config.quad.q, d_max)?;

    let mut total = 0.0;
    for (kappa, wi) in outer.iter() {
        let decay = (-z * d_eta * kappa).exp();
        let j = d4 / 2.0 * decay - d4 * lower_gamma_scaled(4.0 / eta, z * kappa * d_eta)? / eta
            + d4 / (4.0 * (kappa + 1.0));
        let t5 = (nu + eps).ln() * d4 * lower_gamma_scaled(4.0 / eta, (kappa + 1.0) * z * d_eta)?
            / (eta * (kappa + 1.0));
        let mut jbar_sum = 0.0;
        for (x, wj) in radial.iter() {
            let xe = x.powf(eta);
            let x2 = x * x;
            let mix = d_eta * kappa + xe;
            let first = -e_ei(nu * xe / rho)? * (d2 * decay - x2 * (-z * xe * kappa).exp());
            let kx = (kappa + 1.0) * xe / rho;
            let second =
                -x2 / (kappa + 1.0) * (e_ei(nu * kx)? - (-eps * kx).exp() * e_ei((nu + eps) * kx)?);
            let third = -d2 * (xe * nu.ln() / mix - xe / mix * e_ei(nu * mix / rho)?);
            jbar_sum += wj * x * (first + second + third);
        }
        total += wi * kappa.powf(2.0 / eta - 1.0) * (j * nu.ln() - t5 + jbar_sum);
    }
    Ok(8.0 / (eta * d4 * LN_2) * total)
}

/// Two-user OMA secrecy throughput with distance ranking. Does not depend
/// on `R_M`.
pub fn secrecy_oma_sos_k2(config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    need_users(
        config,
        |k| k == 2,
        "the distance-ranked secrecy expression is two-user only",
    )?;
    if config.rho == 0.0 {
        return Ok(0.0);
    }
    let d_max = config.radius;
    let eta = config.path_loss_exponent;
    let rho = config.rho;
    let d_eta = d_max.powf(eta);
    let d2 = d_max * d_max;
    let d4 = d2 * d2;
    let outer = chebyshev_rule(config.quad.l, 1.0)?;
    let radial = chebyshev_rule(config.quad.q, d_max)?;

    let mut near = 0.0;
    for (x, wj) in radial.iter() {
        let xe = x.powf(eta);
        near += wj * x * (-e_ei(xe / rho)? * (d2 - x * x));
    }
    let mut far = 0.0;
    for (kappa, wi) in outer.iter() {
        let mut s = 0.0;
        for (x, wj) in radial.iter() {
            let xe = x.powf(eta);
            let mix = d_eta * kappa + xe;
            s += wj * x * d2 * xe / mix * e_ei(mix / rho)?;
        }
        far += wi * kappa.powf(2.0 / eta - 1.0) * s;
    }
    Ok(2.0 / (d4 * LN_2) * near + 4.0 / (eta * d4 * LN_2) * far)
}
