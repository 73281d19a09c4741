//! Time quadrature rules on `[0, T]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order of each Gauss–Legendre panel in the composite rule.
pub const GL_PANEL_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum QuadRule {
    Trapezoid,
    #[default]
    GaussLegendre,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A set of nodes `t_i ∈ [0, T]` with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Panel boundaries; nodes of panel `p` lie in `[breaks[p], breaks[p+1]]`.
    pub breaks: Vec<f64>,
    /// Index of the first node of each panel (plus a final sentinel).
    pub panel_start: Vec<usize>,
}

impl TimeQuadrature {
    /// Builds the rule with `n_quad` nodes (rounded up to whole panels for
    /// Gauss–Legendre).
    pub fn new(rule: QuadRule, horizon: f64, n_quad: usize) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        if n_quad < 2 {
            return Err(Error::InvalidParameter(format!("n_quad must be at least 2, got {n_quad}")));
        }
        Ok(match rule {
            QuadRule::GaussLegendre => {
                let panels = n_quad.div_ceil(GL_PANEL_ORDER);
                let (x, w) = gauss_legendre(GL_PANEL_ORDER);
                let h = horizon / panels as f64;
                let mut nodes = Vec::with_capacity(panels * GL_PANEL_ORDER);
                let mut weights = Vec::with_capacity(panels * GL_PANEL_ORDER);
                let mut breaks = Vec::with_capacity(panels + 1);
                let mut panel_start = Vec::with_capacity(panels + 1);
                for p in 0..panels {
                    let a = p as f64 * h;
                    breaks.push(a);
                    panel_start.push(nodes.len());
                    for (xi, wi) in x.iter().zip(&w) {
                        nodes.push(a + 0.5 * h * (xi + 1.0));
                        weights.push(0.5 * h * wi);
                    }
                }
                breaks.push(horizon);
                panel_start.push(nodes.len());
                TimeQuadrature { nodes, weights, breaks, panel_start }
            }
            QuadRule::Trapezoid => {
                let h = horizon / (n_quad - 1) as f64;
                let nodes: Vec<f64> = (0..n_quad).map(|i| i as f64 * h).collect();
                let weights = (0..n_quad)
                    .map(|i| if i == 0 || i == n_quad - 1 { 0.5 * h } else { h })
                    .collect();
                // one panel per node: the node sits at the right end of its panel
                let mut breaks = vec![0.0];
                breaks.extend(nodes.iter().skip(1).copied());
                let mut panel_start = vec![0, 2];
                panel_start.extend(3..=n_quad);
                TimeQuadrature { nodes, weights, breaks, panel_start }
            }
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panels(&self) -> usize {
        self.breaks.len() - 1
    }
}

/// Node count that resolves oscillations up to angular frequency
/// `max_rate` over `[0, horizon]` with 16-point panels (at most 8 radians
/// of phase per panel), never fewer than `floor`.
pub fn resolved_node_count(max_rate: f64, horizon: f64, floor: usize) -> usize {
    let panels = ((max_rate * horizon) / 8.0).ceil().max(1.0) as usize;
    (panels * GL_PANEL_ORDER).max(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        for deg in 0..32 {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
            assert!((q - exact).abs() < 1e-14, "degree {deg}: {q} vs {exact}");
        }
    }

    #[test]
    fn composite_oscillatory_integral() {
        let a = 2000.0_f64;
        let t = 1.0;
        let rule = TimeQuadrature::new(QuadRule::GaussLegendre, t, resolved_node_count(a, t, 32)).unwrap();
        let q: f64 = rule.nodes.iter().zip(&rule.weights).map(|(s, w)| w * (a * s).cos()).sum();
        let exact = (a * t).sin() / a;
        assert!((q - exact).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_weights_sum() {
        let rule = TimeQuadrature::new(QuadRule::Trapezoid, 2.0, 11).unwrap();
        let s: f64 = rule.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        assert_eq!(rule.panels(), 10);
        assert_eq!(*rule.panel_start.last().unwrap(), 11);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TimeQuadrature::new(QuadRule::GaussLegendre, 0.0, 32).is_err());
        assert!(TimeQuadrature::new(QuadRule::Trapezoid, 1.0, 1).is_err());
    }
}
