use std::io::Write;

use crate::analytic::{self, evaluate};
use crate::channel::{sample_realization, CsiMode, QuadOrders, RandomStream, SystemConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate, simulate_with_workers, MetricKind, Scheme};
use crate::noma_core::{multicast_rate, power_split};

use super::config::{db_to_linear, RunConfig};

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: String, observed: f64, bound: f64) -> Self {
        Check {
            passed: observed <= bound,
            name,
            observed,
            bound,
        }
    }
}

fn rel_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn outage_oracle(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    for &rate in &cfg.rates {
        for &db in &cfg.snr_grid_db {
            for scheme in [Scheme::Noma, Scheme::Oma] {
                for mode in [CsiMode::Imperfect, CsiMode::Sos] {
                    let sys = cfg.point(db_to_linear(db), rate, mode);
                    let a = evaluate(&sys, scheme, MetricKind::OutageProb)?.expect("outage");
                    let mc = simulate(&sys, scheme, MetricKind::OutageProb, cfg.trials, cfg.seed)?;
                    let bound = match mode {
                        CsiMode::Imperfect => (3.0 * mc.half_width_95).max(1e-3),
                        _ => 3.0 * mc.half_width_95,
                    };
                    checks.push(Check::at_most(
                        format!(
                            "outage {} {} vs simulation, R_M={rate}, {db} dB",
                            scheme.as_str(),
                            mode.as_str()
                        ),
                        (a - mc.value).abs(),
                        bound,
                    ));
                }
            }
        }
    }
    Ok(())
}

fn perfect_cross_check(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let mut users = vec![1, 4, 8, cfg.system.users];
    users.sort_unstable();
    users.dedup();
    for k in users {
        for db in [10.0, 30.0] {
            let sys = SystemConfig {
                users: k,
                sigma2: 0.0,
                ..cfg.point(db_to_linear(db), cfg.rates[0], CsiMode::Perfect)
            };
            let approx = analytic::outage_noma_imperfect_with_order(&sys, sys.quad.c)?;
            let exact = analytic::outage_noma_perfect(&sys)?;
            checks.push(Check::at_most(
                format!(
                    "quadrature outage at sigma2=0 vs exact, K={k}, {db} dB, c={}",
                    sys.quad.c
                ),
                (approx - exact).abs(),
                1e-3,
            ));
        }
    }
    Ok(())
}

fn secrecy_oracle(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let cases: [(Scheme, CsiMode, Option<usize>); 4] = [
        (Scheme::Noma, CsiMode::Imperfect, None),
        (Scheme::Oma, CsiMode::Imperfect, None),
        (Scheme::Noma, CsiMode::Sos, Some(2)),
        (Scheme::Oma, CsiMode::Sos, Some(2)),
    ];
    for &rate in &cfg.rates {
        for &db in cfg.snr_grid_db.iter().filter(|&&db| db >= 10.0) {
            let rel = if db >= 20.0 { 0.05 } else { 0.10 };
            for (scheme, mode, users) in cases {
                let mut sys = cfg.point(db_to_linear(db), rate, mode);
                if let Some(k) = users {
                    sys.users = k;
                }
                if sys.users < 2 {
                    continue;
                }
                let kind = MetricKind::SecrecyThroughputSurrogate;
                let Some(a) = evaluate(&sys, scheme, kind)? else {
                    continue;
                };
                let mc = simulate(&sys, scheme, kind, cfg.trials, cfg.seed)?;
                checks.push(Check::at_most(
                    format!(
                        "secrecy {} {} K={} vs simulated surrogate, R_M={rate}, {db} dB",
                        scheme.as_str(),
                        mode.as_str(),
                        sys.users
                    ),
                    (a - mc.value).abs(),
                    3.0 * mc.half_width_95 + rel * mc.value.abs(),
                ));
            }
        }
    }
    Ok(())
}

type Evaluator = fn(&SystemConfig) -> Result<f64>;

fn secrecy_evaluators() -> [(&'static str, Evaluator, CsiMode, Option<usize>); 4] {
    [
        (
            "secrecy noma imperfect",
            analytic::secrecy_noma_imperfect,
            CsiMode::Imperfect,
            None,
        ),
        (
            "secrecy oma imperfect",
            analytic::secrecy_oma_imperfect,
            CsiMode::Imperfect,
            None,
        ),
        (
            "secrecy noma sos K=2",
            analytic::secrecy_noma_sos_k2,
            CsiMode::Sos,
            Some(2),
        ),
        (
            "secrecy oma sos K=2",
            analytic::secrecy_oma_sos_k2,
            CsiMode::Sos,
            Some(2),
        ),
    ]
}

fn secrecy_limits(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let grid: Vec<f64> = (0..10).map(|i| 40.0 * i as f64 / 9.0).collect();
    for (name, f, mode, users) in secrecy_evaluators() {
        let k = users.unwrap_or(cfg.system.users);
        if k < 2 {
            continue;
        }
        let mut lowest = f64::INFINITY;
        for &rate in &cfg.rates {
            let at = |db: f64| SystemConfig {
                users: k,
                ..cfg.point(db_to_linear(db), rate, mode)
            };
            checks.push(Check::at_most(
                format!("{name} vanishes as SNR -> 0 (-40 dB), R_M={rate}"),
                f(&at(-40.0))?.abs(),
                1e-3,
            ));
            for &db in &grid {
                lowest = lowest.min(f(&at(db))?);
            }
        }
        checks.push(Check::at_most(
            format!("{name} non-negative on the (SNR, R_M) grid"),
            (-lowest).max(0.0),
            0.0,
        ));
    }
    Ok(())
}

fn quadrature_convergence(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let doubled = |q: QuadOrders, which: char| -> QuadOrders {
        let mut d = q;
        match which {
            'c' => d.c *= 2,
            'm' => d.m *= 2,
            'n' => d.n *= 2,
            'l' => d.l *= 2,
            _ => d.q *= 2,
        }
        d
    };
    let evaluators: [(&str, Evaluator, &str, CsiMode, Option<usize>); 6] = [
        (
            "outage noma imperfect",
            analytic::outage_noma_imperfect,
            "c",
            CsiMode::Imperfect,
            None,
        ),
        (
            "outage oma imperfect",
            analytic::outage_oma_imperfect,
            "c",
            CsiMode::Imperfect,
            None,
        ),
        (
            "secrecy noma imperfect",
            analytic::secrecy_noma_imperfect,
            "mn",
            CsiMode::Imperfect,
            None,
        ),
        (
            "secrecy oma imperfect",
            analytic::secrecy_oma_imperfect,
            "mn",
            CsiMode::Imperfect,
            None,
        ),
        (
            "secrecy noma sos K=2",
            analytic::secrecy_noma_sos_k2,
            "lq",
            CsiMode::Sos,
            Some(2),
        ),
        (
            "secrecy oma sos K=2",
            analytic::secrecy_oma_sos_k2,
            "lq",
            CsiMode::Sos,
            Some(2),
        ),
    ];
    for (name, f, orders, mode, users) in evaluators {
        let rates = if name.starts_with("secrecy oma") {
            &cfg.rates[..1]
        } else {
            &cfg.rates[..]
        };
        for &rate in rates {
            for &db in &cfg.snr_grid_db {
                let mut sys = cfg.point(db_to_linear(db), rate, mode);
                if let Some(k) = users {
                    sys.users = k;
                }
                if name.starts_with("secrecy") && sys.users < 2 {
                    continue;
                }
                let base = f(&sys)?;
                for which in orders.chars() {
                    let finer = SystemConfig {
                        quad: doubled(sys.quad, which),
                        ..sys.clone()
                    };
                    let v = f(&finer)?;
                    checks.push(Check::at_most(
                        format!("{name}: doubling order {which}, R_M={rate}, {db} dB"),
                        rel_change(base, v),
                        1e-3,
                    ));
                }
            }
        }
    }
    Ok(())
}

fn monotonicity(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let outage: [(&str, Evaluator, bool); 6] = [
        (
            "outage noma imperfect",
            analytic::outage_noma_imperfect,
            true,
        ),
        ("outage oma imperfect", analytic::outage_oma_imperfect, true),
        ("outage noma perfect", analytic::outage_noma_perfect, false),
        ("outage oma perfect", analytic::outage_oma_perfect, false),
        ("outage noma sos", analytic::outage_noma_sos, false),
        ("outage oma sos", analytic::outage_oma_sos, false),
    ];
    let grid: Vec<f64> = (0..10).map(|i| 40.0 * i as f64 / 9.0).collect();
    let mut rates = cfg.rates.clone();
    rates.sort_by(f64::total_cmp);
    let worst_increase = |vals: &[f64]| vals.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    for (name, f, uses_sigma) in outage {
        let mode = if uses_sigma {
            CsiMode::Imperfect
        } else {
            CsiMode::Perfect
        };
        let base = |rho: f64, rate: f64| {
            let mut s = cfg.point(rho, rate, mode);
            if !uses_sigma {
                s.sigma2 = 0.0;
            }
            s
        };
        for &rate in &rates {
            let vals = grid
                .iter()
                .map(|&db| f(&base(db_to_linear(db), rate)))
                .collect::<Result<Vec<_>>>()?;
            checks.push(Check::at_most(
                format!("{name} non-increasing in SNR, R_M={rate}"),
                worst_increase(&vals),
                0.0,
            ));
        }
        for &db in &grid {
            let rho = db_to_linear(db);
            let vals = rates
                .iter()
                .map(|&r| f(&base(rho, r)))
                .collect::<Result<Vec<_>>>()?;
            let drop = -vals.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::min);
            checks.push(Check::at_most(
                format!("{name} non-decreasing in R_M, {db:.1} dB"),
                drop,
                0.0,
            ));
            let vals = (1..=cfg.system.users.max(2))
                .map(|k| {
                    f(&SystemConfig {
                        users: k,
                        ..base(rho, rates[0])
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let drop = -vals.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::min);
            checks.push(Check::at_most(
                format!("{name} non-decreasing in K, {db:.1} dB"),
                drop,
                0.0,
            ));
            if uses_sigma {
                let mut sig = cfg.sigma2_grid.clone();
                sig.sort_by(f64::total_cmp);
                let vals = sig
                    .iter()
                    .map(|&s| {
                        f(&SystemConfig {
                            sigma2: s,
                            ..base(rho, rates[0])
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let drop = -vals.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::min);
                checks.push(Check::at_most(
                    format!("{name} non-decreasing in sigma2, {db:.1} dB"),
                    drop,
                    0.0,
                ));
            }
        }
    }
    for &rate in &rates {
        let mut worst = 0.0f64;
        for &db in &grid {
            for mode in [CsiMode::Imperfect, CsiMode::Perfect, CsiMode::Sos] {
                let mut s = cfg.point(db_to_linear(db), rate, mode);
                if mode == CsiMode::Perfect {
                    s.sigma2 = 0.0;
                }
                let n = evaluate(&s, Scheme::Noma, MetricKind::OutageProb)?.expect("outage");
                let o = evaluate(&s, Scheme::Oma, MetricKind::OutageProb)?.expect("outage");
                worst = worst.max(n - o);
            }
        }
        checks.push(Check::at_most(
            format!("noma outage <= oma outage on the SNR grid, R_M={rate}"),
            worst,
            0.0,
        ));
    }
    Ok(())
}

fn power_split_equality(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    for &rate in &cfg.rates {
        let sys = cfg.point(cfg.system.rho, rate, CsiMode::Imperfect);
        let mut rng = RandomStream::new(cfg.seed, u64::MAX);
        let (mut seen, mut worst, mut sum_ok) = (0, 0.0f64, true);
        let mut draws = 0u64;
        while seen < 10_000 && draws < 10_000_000 {
            draws += 1;
            let r = sample_realization(&sys, &mut rng)?;
            let weakest = r
                .decision_gains()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            let split = power_split(weakest, sys.rho, rate)?;
            sum_ok &= split.theta_m + split.theta_u == 1.0;
            if split.outage {
                continue;
            }
            seen += 1;
            worst = worst.max((multicast_rate(weakest, &split, sys.rho)? - rate).abs());
        }
        checks.push(Check::at_most(
            format!("weakest-user multicast rate equals R_M over {seen} draws, R_M={rate}"),
            if sum_ok { worst } else { f64::INFINITY },
            1e-9,
        ));
    }
    Ok(())
}

fn determinism(cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let many = 4;
    let trials = cfg.trials.min(50_000);
    for kind in [MetricKind::OutageProb, MetricKind::SecrecyThroughput] {
        let sys = cfg.point(cfg.system.rho, cfg.rates[0], CsiMode::Imperfect);
        if kind != MetricKind::OutageProb && sys.users < 2 {
            continue;
        }
        let a = simulate_with_workers(&sys, Scheme::Noma, kind, trials, cfg.seed, 1)?;
        let b = simulate_with_workers(&sys, Scheme::Noma, kind, trials, cfg.seed, many)?;
        let same = a.value.to_bits() == b.value.to_bits()
            && a.half_width_95.to_bits() == b.half_width_95.to_bits();
        checks.push(Check::at_most(
            format!(
                "{} estimate identical on 1 and {many} workers",
                kind.as_str()
            ),
            if same {
                0.0
            } else {
                (a.value - b.value).abs().max(f64::MIN_POSITIVE)
            },
            0.0,
        ));
    }
    Ok(())
}

/// Runs every check and returns them in report order.
pub fn run_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let mut checks = Vec::new();
    outage_oracle(cfg, &mut checks)?;
    perfect_cross_check(cfg, &mut checks)?;
    secrecy_oracle(cfg, &mut checks)?;
    secrecy_limits(cfg, &mut checks)?;
    quadrature_convergence(cfg, &mut checks)?;
    monotonicity(cfg, &mut checks)?;
    power_split_equality(cfg, &mut checks)?;
    determinism(cfg, &mut checks)?;
    Ok(checks)
}

/// Writes the report and returns whether every check passed.
pub fn verify<W: Write>(cfg: &RunConfig, mut out: W) -> Result<bool> {
    let checks = run_checks(cfg)?;
    let io = |e: std::io::Error| Error::Io(format!("cannot write report: {e}"));
    let mut failed = 0;
    for c in &checks {
        if !c.passed {
            failed += 1;
        }
        writeln!(
            out,
            "{} {}: observed {:.3e}, bound {:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.observed,
            c.bound
        )
        .map_err(io)?;
    }
    writeln!(out, "{} checks, {} failed", checks.len(), failed).map_err(io)?;
    Ok(failed == 0)
}
