use super::{EULER_GAMMA, MAX_ITER};
use crate::error::{domain, Error, Result};

/// `E₁(y)` for `0 < y ≤ 1` by its power series.
fn e1_series(y: f64) -> Result<f64> {
    // E₁(y) = −γ − ln y − Σ_{k≥1} (−y)^k / (k·k!)
    let mut sum = 0.0;
    let mut pow_over_fact = 1.0;
    for k in 1..=MAX_ITER {
        let kf = k as f64;
        pow_over_fact *= -y / kf;
        let term = pow_over_fact / kf;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(-EULER_GAMMA - y.ln() - sum);
        }
    }
    Err(Error::NoConvergence("E1 series"))
}

/// `e^y E₁(y)` for `y > 1` by the Lentz continued fraction.
fn e1_scaled_cf(y: f64) -> Result<f64> {
    let tiny = 1e-300;
    let mut b = y + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence("E1 continued fraction"))
}

fn check_negative(func: &'static str, x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(domain(func, format!("x must be negative, got {x}")));
    }
    Ok(-x)
}

/// Exponential integral `Ei(x) = ∫_{−∞}^x e^t/t dt` on the negative axis,
/// computed as `−E₁(−x)`.
pub fn expint_ei(x: f64) -> Result<f64> {
    let y = check_negative("expint_ei", x)?;
    if y.is_infinite() {
        return Ok(0.0);
    }
    if y <= 1.0 {
        Ok(-e1_series(y)?)
    } else {
        Ok(-(-y).exp() * e1_scaled_cf(y)?)
    }
}

/// `e^{−x} Ei(x)` for `x < 0`.
///
/// The closed forms only ever use `Ei` in products `e^{y} Ei(−y)`; for large
/// `y` the two factors overflow and underflow separately while their product
/// is close to `−1/y`.
pub fn ei_scaled(x: f64) -> Result<f64> {
    let y = check_negative("ei_scaled", x)?;
    if y.is_infinite() {
        return Ok(0.0);
    }
    if y <= 1.0 {
        Ok(-y.exp() * e1_series(y)?)
    } else {
        Ok(-e1_scaled_cf(y)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_points() {
        assert_relative_eq!(
            expint_ei(-1.0).unwrap(),
            -0.219_383_934_395_520_3,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            expint_ei(-0.01).unwrap(),
            -4.037_929_576_538_113,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            expint_ei(-2.0).unwrap(),
            -0.048_900_510_708_061_12,
            epsilon = 1e-14
        );
    }

    #[test]
    fn deep_tail_envelope() {
        let v = expint_ei(-50.0).unwrap();
        assert!(v < 0.0);
        assert!(v.abs() < 2.0 * (-50f64).exp() / 50.0);
    }

    #[test]
    fn scaled_agrees_with_unscaled() {
        for &x in &[-1e-6, -0.3, -1.0, -1.0000001, -7.0, -40.0] {
            let lhs = ei_scaled(x).unwrap();
            let rhs = (-x).exp() * expint_ei(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
        // large arguments where the unscaled pair would under/overflow
        let y = 1e6;
        assert_relative_eq!(
            ei_scaled(-y).unwrap(),
            -1.0 / y * (1.0 - 1.0 / y),
            max_relative = 1e-11
        );
    }

    #[test]
    fn derivative_is_exp_over_x() {
        let h = 1e-5;
        for &x in &[-0.5, -2.0, -10.0] {
            let fd = (expint_ei(x + h).unwrap() - expint_ei(x - h).unwrap()) / (2.0 * h);
            let exact = x.exp() / x;
            assert!(
                ((fd - exact) / exact).abs() < 1e-5,
                "x={x}: {fd} vs {exact}"
            );
        }
    }

    #[test]
    fn rejects_non_negative() {
        assert!(expint_ei(0.0).is_err());
        assert!(expint_ei(1.0).is_err());
        assert!(expint_ei(f64::NAN).is_err());
        assert!(ei_scaled(0.0).is_err());
    }
}
