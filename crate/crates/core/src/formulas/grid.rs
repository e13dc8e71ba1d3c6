//! Time-quadrature grids for the L²([0, T]) metrics.

use super::{FormulaError, FormulaResult};
use crate::quadrature::composite_rule;

/// Quadrature rule on (0, T): strictly increasing interior nodes with
/// positive weights summing to T.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    t_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Validating constructor.
    pub fn new(t_max: f64, nodes: Vec<f64>, weights: Vec<f64>) -> FormulaResult<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(FormulaError::InvalidGrid {
                reason: format!("T must be positive and finite, got {t_max}"),
            });
        }
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(FormulaError::InvalidGrid {
                reason: "nodes and weights must be non-empty and equal length".into(),
            });
        }
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(FormulaError::InvalidGrid {
                reason: "nodes must be strictly increasing".into(),
            });
        }
        if nodes[0] <= 0.0 || *nodes.last().unwrap() >= t_max {
            return Err(FormulaError::InvalidGrid {
                reason: "nodes must lie in the open interval (0, T)".into(),
            });
        }
        if weights.iter().any(|w| *w <= 0.0) {
            return Err(FormulaError::InvalidGrid {
                reason: "weights must be positive".into(),
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - t_max).abs() > 1e-12 * t_max.max(1.0) {
            return Err(FormulaError::InvalidGrid {
                reason: format!("weights sum to {total}, expected {t_max}"),
            });
        }
        Ok(QuadratureGrid {
            t_max,
            nodes,
            weights,
        })
    }

    /// Composite Gauss-Legendre rule: `panels` uniform panels of `points`
    /// nodes each. The default metric grid is 8 panels × 16 points.
    pub fn gauss_legendre(t_max: f64, panels: usize, points: usize) -> FormulaResult<Self> {
        if panels == 0 || points == 0 {
            return Err(FormulaError::InvalidGrid {
                reason: "panels and points must be >= 1".into(),
            });
        }
        let breaks: Vec<f64> = (0..=panels)
            .map(|k| t_max * k as f64 / panels as f64)
            .collect();
        let (nodes, weights) = composite_rule(points, &breaks);
        Self::new(t_max, nodes, weights)
    }

    /// Default grid used by the sweeps.
    pub fn default_for(t_max: f64) -> FormulaResult<Self> {
        Self::gauss_legendre(t_max, 8, 16)
    }

    /// Uniform midpoint rule with `n` nodes; the dense cross-check grid
    /// guarding against quadrature artifacts.
    pub fn midpoint(t_max: f64, n: usize) -> FormulaResult<Self> {
        if n == 0 {
            return Err(FormulaError::InvalidGrid {
                reason: "midpoint rule needs n >= 1".into(),
            });
        }
        let w = t_max / n as f64;
        let nodes: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * w).collect();
        let weights = vec![w; n];
        Self::new(t_max, nodes, weights)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }
}
