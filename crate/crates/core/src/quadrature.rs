//! Gauss-Legendre quadrature rules.
//!
//! Nodes are roots of the Legendre polynomial, found by Newton iteration
//! from the Chebyshev initial guesses; weights follow from the derivative.

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess for the i-th root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `n`-point rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| half * w).collect(),
    )
}

/// Composite rule over explicit panel breakpoints.
pub fn composite_rule(points_per_panel: usize, breakpoints: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for pair in breakpoints.windows(2) {
        let (xs, ws) = gauss_legendre_on(points_per_panel, pair[0], pair[1]);
        nodes.extend(xs);
        weights.extend(ws);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules_match_known_values() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3.0_f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);

        let (x, w) = gauss_legendre(3);
        let r = (3.0_f64 / 5.0).sqrt();
        assert!((x[0] + r).abs() < 1e-15 && x[1].abs() < 1e-15 && (x[2] - r).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for &n in &[4usize, 16, 64] {
            let (_, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} sum {total}");
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // 16-point rule is exact through degree 31
        let (x, w) = gauss_legendre_on(16, 0.0, 2.0);
        let value: f64 = x
            .iter()
            .zip(w.iter())
            .map(|(xi, wi)| wi * xi.powi(21))
            .sum();
        let exact = 2.0_f64.powi(22) / 22.0;
        assert!((value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn oscillatory_integral_on_panels() {
        // ∫_0^π sin x dx = 2 with 4 panels of 16 points
        let breaks: Vec<f64> = (0..=4).map(|k| k as f64 * std::f64::consts::PI / 4.0).collect();
        let (x, w) = composite_rule(16, &breaks);
        let value: f64 = x.iter().zip(w.iter()).map(|(xi, wi)| wi * xi.sin()).sum();
        assert!((value - 2.0).abs() < 1e-13);
    }
}
