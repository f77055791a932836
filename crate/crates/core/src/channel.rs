//! Cell geometry, Rayleigh fading and channel-estimation model.
//!
//! Users are dropped uniformly in a disk of radius `D` around the base
//! station. A draw holds the sorted distances, the unit-mean exponential
//! fading powers `|g_k|²`, the true gains `α_k = |g_k|² d_k^{−η}` and, for
//! imperfect CSI, the estimated gains seen by the base station.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{domain, Error, Result};

/// What the base station knows about the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsiMode {
    Perfect,
    Imperfect,
    /// Second-order statistics only: users are ranked by distance.
    Sos,
}

impl CsiMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CsiMode::Perfect => "perfect",
            CsiMode::Imperfect => "imperfect",
            CsiMode::Sos => "sos",
        }
    }
}

impl std::str::FromStr for CsiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "perfect" => Ok(CsiMode::Perfect),
            "imperfect" => Ok(CsiMode::Imperfect),
            "sos" => Ok(CsiMode::Sos),
            other => Err(Error::InvalidConfig(format!(
                "csi_mode must be perfect, imperfect or sos (got {other:?})"
            ))),
        }
    }
}

/// Gauss–Chebyshev orders used by the analytic evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadOrders {
    /// Outage integral over the cell radius.
    pub c: usize,
    /// Outer secrecy integral over the unit interval.
    pub m: usize,
    /// Inner secrecy integral over the cell radius.
    pub n: usize,
    /// Unit-interval order of the two-user distance-ranked secrecy integral.
    pub l: usize,
    /// Radial order of the two-user distance-ranked secrecy integral.
    pub q: usize,
}

impl Default for QuadOrders {
    fn default() -> Self {
        QuadOrders {
            c: 50,
            m: 5,
            n: 10,
            l: 100,
            q: 10,
        }
    }
}

/// Full parameterization of one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Number of users `K`.
    pub users: usize,
    /// Cell radius `D` in meters.
    pub radius: f64,
    /// Path-loss exponent `η`.
    pub path_loss_exponent: f64,
    /// Transmit SNR `ρ`, linear scale.
    pub rho: f64,
    /// Multicast target rate `R_M` in bits/s/Hz.
    pub rate_multicast: f64,
    /// Channel-estimation error variance `σ_ζ²`.
    pub sigma2: f64,
    pub csi_mode: CsiMode,
    pub quad: QuadOrders,
    /// Upper bound on the number of multinomial terms the imperfect-CSI
    /// secrecy evaluator may enumerate.
    pub composition_cap: u128,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            users: 8,
            radius: 5.0,
            path_loss_exponent: 2.0,
            rho: 1000.0,
            rate_multicast: 0.5,
            sigma2: 0.01,
            csi_mode: CsiMode::Imperfect,
            quad: QuadOrders::default(),
            composition_cap: 10_000_000,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.users < 1 {
            return bad("users (K) must be at least 1".into());
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad(format!("radius (D) must be positive, got {}", self.radius));
        }
        if !(self.path_loss_exponent > 0.0 && self.path_loss_exponent.is_finite()) {
            return bad(format!(
                "path_loss_exponent (eta) must be positive, got {}",
                self.path_loss_exponent
            ));
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return bad(format!(
                "rho must be finite and non-negative, got {}",
                self.rho
            ));
        }
        if !(self.rate_multicast > 0.0 && self.rate_multicast.is_finite()) {
            return bad(format!(
                "rate_multicast (R_M) must be positive, got {}",
                self.rate_multicast
            ));
        }
        let edge = self.radius.powf(-self.path_loss_exponent);
        if !(self.sigma2 >= 0.0) {
            return bad(format!("sigma2 must be non-negative, got {}", self.sigma2));
        }
        if self.sigma2 >= edge {
            return bad(format!(
                "sigma2 < D^(-eta) violated: sigma2 = {} but D^(-eta) = {}",
                self.sigma2, edge
            ));
        }
        let q = &self.quad;
        for (name, v) in [("c", q.c), ("m", q.m), ("n", q.n), ("l", q.l), ("q", q.q)] {
            if v == 0 {
                return bad(format!("quadrature order {name} must be at least 1"));
            }
        }
        Ok(())
    }

    /// NOMA SINR threshold `ε_M = 2^{R_M} − 1`.
    pub fn eps_m(&self) -> f64 {
        self.rate_multicast.exp2() - 1.0
    }

    /// OMA SINR threshold `λ_M = 2^{2R_M} − 1`.
    pub fn lambda_m(&self) -> f64 {
        (2.0 * self.rate_multicast).exp2() - 1.0
    }

    /// Estimation-error variance that applies in the current CSI mode.
    pub fn effective_sigma2(&self) -> f64 {
        match self.csi_mode {
            CsiMode::Imperfect => self.sigma2,
            CsiMode::Perfect | CsiMode::Sos => 0.0,
        }
    }
}

/// Reproducible random stream: ChaCha8 keyed by `seed` on stream `stream`.
///
/// Distinct stream indices give independent sequences, so work can be split
/// into blocks whose draws do not depend on which thread runs them.
#[derive(Debug, Clone)]
pub struct RandomStream(ChaCha8Rng);

impl RandomStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomStream(rng)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// One Monte Carlo draw of the cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelRealization {
    /// Distances in `(0, D]`, ascending.
    pub distances: Vec<f64>,
    /// `|g_k|²`, matched to `distances`.
    pub fading_powers: Vec<f64>,
    /// `α_k = |g_k|² d_k^{−η}`.
    pub true_gains: Vec<f64>,
    /// Gains available to the base station; `None` in SOS mode.
    pub est_gains: Option<Vec<f64>>,
}

impl ChannelRealization {
    /// Gains the base station ranks users by: estimated gains when present,
    /// true gains otherwise.
    pub fn decision_gains(&self) -> &[f64] {
        self.est_gains.as_deref().unwrap_or(&self.true_gains)
    }

    /// Overwrites `self` with a fresh draw, reusing its buffers.
    pub fn resample<R: Rng + ?Sized>(&mut self, config: &SystemConfig, rng: &mut R) {
        let k = config.users;
        let d_max = config.radius;
        let eta = config.path_loss_exponent;

        self.distances.clear();
        // 1 - U lies in (0, 1], so no user sits on the base station
        self.distances
            .extend((0..k).map(|_| d_max * (1.0 - rng.random::<f64>()).sqrt()));
        self.distances.sort_by(f64::total_cmp);

        self.fading_powers.clear();
        self.fading_powers
            .extend((0..k).map(|_| <Exp1 as Distribution<f64>>::sample(&Exp1, rng)));

        self.true_gains.clear();
        self.true_gains.extend(
            self.distances
                .iter()
                .zip(&self.fading_powers)
                .map(|(&d, &g)| g * d.powf(-eta)),
        );

        match config.csi_mode {
            CsiMode::Sos => self.est_gains = None,
            CsiMode::Perfect => {
                let est = self.est_gains.get_or_insert_with(Vec::new);
                est.clear();
                est.extend_from_slice(&self.true_gains);
            }
            CsiMode::Imperfect => {
                let sigma2 = config.sigma2;
                let est = self.est_gains.get_or_insert_with(Vec::new);
                est.clear();
                for &d in &self.distances {
                    let e: f64 = Exp1.sample(rng);
                    est.push(e * (d.powf(-eta) - sigma2));
                }
            }
        }
    }
}

/// Draws one realization. Fails if `config` is invalid.
pub fn sample_realization<R: Rng + ?Sized>(
    config: &SystemConfig,
    rng: &mut R,
) -> Result<ChannelRealization> {
    config.validate()?;
    let mut r = ChannelRealization::default();
    r.resample(config, rng);
    Ok(r)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Density of the `k`-th smallest of `total` i.i.d. distances uniform in
/// the disk, evaluated at `x`.
pub fn distance_order_pdf(k: usize, total: usize, radius: f64, x: f64) -> Result<f64> {
    if k < 1 || k > total {
        return Err(domain(
            "distance_order_pdf",
            format!("rank {k} outside 1..={total}"),
        ));
    }
    if !(radius > 0.0) || !(0.0..=radius).contains(&x) {
        return Err(domain(
            "distance_order_pdf",
            format!("x = {x} outside [0, {radius}]"),
        ));
    }
    let cdf = (x / radius).powi(2);
    let pdf = 2.0 * x / (radius * radius);
    Ok(k as f64
        * binomial(total, k)
        * cdf.powi(k as i32 - 1)
        * (1.0 - cdf).powi((total - k) as i32)
        * pdf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(users: usize, mode: CsiMode, sigma2: f64) -> SystemConfig {
        SystemConfig {
            users,
            csi_mode: mode,
            sigma2,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn default_is_valid_and_thresholds() {
        let c = SystemConfig::default();
        c.validate().unwrap();
        assert!((c.eps_m() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(c.lambda_m(), 1.0);
        assert!(c.lambda_m() > c.eps_m());
    }

    #[test]
    fn rejects_sigma2_at_edge() {
        let mut c = SystemConfig {
            sigma2: 0.04,
            ..SystemConfig::default()
        };
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("sigma2 < D^(-eta)"), "{err}");
        c.sigma2 = -1e-3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn rejects_bad_fields() {
        let base = SystemConfig::default();
        let cases = [
            SystemConfig {
                users: 0,
                ..base.clone()
            },
            SystemConfig {
                radius: 0.0,
                ..base.clone()
            },
            SystemConfig {
                path_loss_exponent: -2.0,
                ..base.clone()
            },
            SystemConfig {
                rho: f64::NAN,
                ..base.clone()
            },
            SystemConfig {
                rate_multicast: 0.0,
                ..base.clone()
            },
            SystemConfig {
                quad: QuadOrders { m: 0, ..base.quad },
                ..base.clone()
            },
        ];
        for c in cases {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn realization_shape() {
        let c = cfg(8, CsiMode::Imperfect, 0.01);
        let mut rng = RandomStream::new(1, 0);
        for _ in 0..100 {
            let r = sample_realization(&c, &mut rng).unwrap();
            assert_eq!(r.distances.len(), 8);
            assert!(r.distances.windows(2).all(|w| w[0] <= w[1]));
            assert!(r.distances.iter().all(|&d| d > 0.0 && d <= 5.0));
            for k in 0..8 {
                assert_eq!(
                    r.true_gains[k],
                    r.fading_powers[k] * r.distances[k].powf(-2.0)
                );
            }
            assert_eq!(r.est_gains.as_ref().unwrap().len(), 8);
        }
        let r = sample_realization(&cfg(3, CsiMode::Sos, 0.0), &mut rng).unwrap();
        assert!(r.est_gains.is_none());
        let r = sample_realization(&cfg(3, CsiMode::Perfect, 0.0), &mut rng).unwrap();
        assert_eq!(r.est_gains.as_deref(), Some(&r.true_gains[..]));
    }

    #[test]
    fn deterministic_per_stream() {
        let c = cfg(8, CsiMode::Imperfect, 0.01);
        let a = sample_realization(&c, &mut RandomStream::new(42, 7)).unwrap();
        let b = sample_realization(&c, &mut RandomStream::new(42, 7)).unwrap();
        let other = sample_realization(&c, &mut RandomStream::new(42, 8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, other);
    }

    #[test]
    fn single_user_distance_cdf() {
        let c = cfg(1, CsiMode::Sos, 0.0);
        let mut rng = RandomStream::new(3, 0);
        let mut r = ChannelRealization::default();
        let n = 100_000;
        let mut below = 0;
        for _ in 0..n {
            r.resample(&c, &mut rng);
            if r.distances[0] <= 2.5 {
                below += 1;
            }
        }
        let p = below as f64 / n as f64;
        assert!((p - 0.25).abs() < 0.005, "{p}");
    }

    #[test]
    fn ks_statistic_of_unsorted_distances() {
        // pool all distances of K=1 draws, which are the unsorted sample
        let c = cfg(1, CsiMode::Sos, 0.0);
        let mut rng = RandomStream::new(11, 0);
        let mut r = ChannelRealization::default();
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| {
                r.resample(&c, &mut rng);
                r.distances[0]
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let mut d = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            let f = (x / 5.0).powi(2);
            d = d.max((f - i as f64 / n as f64).abs());
            d = d.max(((i + 1) as f64 / n as f64 - f).abs());
        }
        let critical = 1.628 / (n as f64).sqrt();
        assert!(d < critical, "D = {d}, critical = {critical}");
    }

    #[test]
    fn nearest_of_two_mean() {
        let c = cfg(2, CsiMode::Sos, 0.0);
        let mut rng = RandomStream::new(5, 0);
        let mut r = ChannelRealization::default();
        let n = 1_000_000;
        let (mut sum_d1, mut sum_g) = (0.0, 0.0);
        for _ in 0..n {
            r.resample(&c, &mut rng);
            sum_d1 += r.distances[0];
            sum_g += r.fading_powers[0] + r.fading_powers[1];
        }
        let mean_d1 = sum_d1 / n as f64;
        let expected = 8.0 * 5.0 / 15.0;
        assert!((mean_d1 / expected - 1.0).abs() < 0.01, "{mean_d1}");
        let mean_g = sum_g / (2 * n) as f64;
        assert!((0.99..=1.01).contains(&mean_g), "{mean_g}");
    }

    #[test]
    fn estimated_gain_mean_at_fixed_distance() {
        // K = 1 with the draw conditioned on d by rescaling
        let c = cfg(1, CsiMode::Imperfect, 0.01);
        let mut rng = RandomStream::new(9, 0);
        let mut r = ChannelRealization::default();
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            r.resample(&c, &mut rng);
            let d = r.distances[0];
            sum += r.est_gains.as_ref().unwrap()[0] / (d.powi(-2) - 0.01);
        }
        let mean = sum / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn zero_error_estimates_match_true_law() {
        let c = cfg(1, CsiMode::Imperfect, 0.0);
        let mut rng = RandomStream::new(13, 0);
        let mut r = ChannelRealization::default();
        let n = 200_000;
        let (mut below_est, mut below_true) = (0usize, 0usize);
        for _ in 0..n {
            r.resample(&c, &mut rng);
            below_est += (r.est_gains.as_ref().unwrap()[0] < 0.05) as usize;
            below_true += (r.true_gains[0] < 0.05) as usize;
        }
        let (pe, pt) = (below_est as f64 / n as f64, below_true as f64 / n as f64);
        assert!((pe - pt).abs() < 0.005, "{pe} vs {pt}");
    }

    #[test]
    fn order_pdf_closed_cases() {
        assert!((distance_order_pdf(1, 1, 5.0, 2.5).unwrap() - 0.2).abs() < 1e-15);
        for total in 1..=8 {
            let v = distance_order_pdf(total, total, 5.0, 5.0).unwrap();
            assert!((v - 2.0 * total as f64 / 5.0).abs() < 1e-12);
        }
        assert!(distance_order_pdf(0, 2, 5.0, 1.0).is_err());
        assert!(distance_order_pdf(3, 2, 5.0, 1.0).is_err());
        assert!(distance_order_pdf(1, 2, 5.0, 5.1).is_err());
    }

    #[test]
    fn order_pdf_matches_histogram() {
        let c = cfg(2, CsiMode::Sos, 0.0);
        let mut rng = RandomStream::new(1, 0);
        let mut r = ChannelRealization::default();
        let n = 1_000_000;
        let h = 0.1;
        let mut hits = 0;
        for _ in 0..n {
            r.resample(&c, &mut rng);
            if (r.distances[0] - 2.0).abs() < h {
                hits += 1;
            }
        }
        let empirical = hits as f64 / (n as f64 * 2.0 * h);
        let exact = distance_order_pdf(1, 2, 5.0, 2.0).unwrap();
        assert!(
            (empirical / exact - 1.0).abs() < 0.02,
            "{empirical} vs {exact}"
        );
    }
}
