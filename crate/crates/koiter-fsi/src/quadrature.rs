//! Gauss–Legendre rules and composite quadrature helpers.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre polynomial; accurate to
/// machine precision for the orders used here (n <= 24).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule on `[a, b]` with `cells` equal cells and
/// `order` points per cell. Returns `(nodes, weights)`.
pub fn composite_gauss(a: f64, b: f64, cells: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let h = (b - a) / cells as f64;
    let mut nodes = Vec::with_capacity(cells * order);
    let mut weights = Vec::with_capacity(cells * order);
    for c in 0..cells {
        let lo = a + c as f64 * h;
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    (nodes, weights)
}

/// Quadrature of `f` against a node/weight rule.
pub fn integrate(nodes: &[f64], weights: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * f(x))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(6);
        // degree 11 is exact for a 6-point rule
        let val = integrate(&x, &w, |t| t.powi(10));
        assert_relative_eq!(val, 2.0 / 11.0, epsilon = 1e-14);
    }

    #[test]
    fn composite_rule_handles_oscillation() {
        let (x, w) = composite_gauss(0.0, std::f64::consts::PI, 24, 6);
        let val = integrate(&x, &w, |t| (8.0 * t).sin().powi(2));
        assert_relative_eq!(val, std::f64::consts::PI / 2.0, epsilon = 1e-12);
    }
}
