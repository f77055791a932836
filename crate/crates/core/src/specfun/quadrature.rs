use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Gauss–Chebyshev rule on `[0, upper_limit]`.
///
/// The weights already carry the `|sin|` factor and the interval Jacobian, so
/// `Σ weights[i] * f(nodes[i])` approximates `∫₀^upper_limit f(x) dx` directly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub upper_limit: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Builds the `order`-point rule with nodes
/// `(U/2)(1 + cos((2i−1)π/(2·order)))` and weights
/// `(π·U)/(2·order)·|sin((2i−1)π/(2·order))|`.
pub fn chebyshev_rule(order: usize, upper_limit: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(domain("chebyshev_rule", "order must be at least 1"));
    }
    if !(upper_limit > 0.0 && upper_limit.is_finite()) {
        return Err(domain(
            "chebyshev_rule",
            format!("upper_limit must be positive and finite, got {upper_limit}"),
        ));
    }
    let n = order as f64;
    let (nodes, weights) = (1..=order)
        .map(|i| {
            let theta = (2 * i - 1) as f64 * PI / (2.0 * n);
            let node = 0.5 * upper_limit * (1.0 + theta.cos());
            let weight = PI * upper_limit / (2.0 * n) * theta.sin().abs();
            (node, weight)
        })
        .unzip();
    Ok(QuadratureRule {
        order,
        upper_limit,
        nodes,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_node_rule() {
        let rule = chebyshev_rule(1, 2.0).unwrap();
        assert_relative_eq!(rule.nodes[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[0], PI, epsilon = 1e-15);
    }

    #[test]
    fn linear_integrand_at_order_50() {
        let rule = chebyshev_rule(50, 5.0).unwrap();
        let v = rule.integrate(|x| x);
        assert!((v - 12.5).abs() <= 0.0125, "got {v}");
    }

    #[test]
    fn shape_invariants() {
        for &(order, upper) in &[(1, 1.0), (7, 5.0), (100, 0.3), (500, 5.0)] {
            let rule = chebyshev_rule(order, upper).unwrap();
            assert_eq!(rule.nodes.len(), order);
            assert_eq!(rule.weights.len(), order);
            assert!(rule.nodes.iter().all(|&x| x > 0.0 && x < upper));
            assert!(rule.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn relative_error_shrinks_as_order_doubles() {
        let d: f64 = 5.0;
        for &s in &[0.01, 0.1, 1.0] {
            let exact = (1.0 - (-s * d * d).exp()) / (2.0 * s);
            let errs: Vec<f64> = [10, 20, 40]
                .iter()
                .map(|&n| {
                    let r = chebyshev_rule(n, d).unwrap();
                    ((r.integrate(|x| x * (-s * x * x).exp()) - exact) / exact).abs()
                })
                .collect();
            assert!(errs[1] <= errs[0] && errs[2] <= errs[1], "s={s}: {errs:?}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(chebyshev_rule(0, 1.0).is_err());
        assert!(chebyshev_rule(3, 0.0).is_err());
        assert!(chebyshev_rule(3, -1.0).is_err());
        assert!(chebyshev_rule(3, f64::NAN).is_err());
    }
}
