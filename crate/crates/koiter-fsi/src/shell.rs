//! Linear elastic arc: clamped-beam eigenbasis, elastic gradient and energy.
//!
//! The restoring force is `K'(eta) = m * eta'''' + B eta` with
//! `B = -b2 * d^2/ds^2 + b0`, acting on displacements along the reference
//! normal of the elastic arc with clamped ends. Evolution is spectral in the
//! clamped eigenbasis; a dense finite-difference eigensolve in
//! [`crate::oracle`] serves as the independent reference.

use nalgebra::DVector;

use crate::quadrature::composite_gauss;

/// Elastic parameters. The shell inertia coefficient is normalized to one.
#[derive(Debug, Clone, Copy)]
pub struct ShellParams {
    /// Bending modulus, positive.
    pub m: f64,
    /// Coefficient of the second-order part of `B` (nonnegative).
    pub b2: f64,
    /// Coefficient of the zero-order part of `B` (nonnegative).
    pub b0: f64,
}

impl Default for ShellParams {
    fn default() -> Self {
        ShellParams {
            m: 1.0,
            b2: 0.0,
            b0: 0.0,
        }
    }
}

impl ShellParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.m > 0.0) {
            return Err(format!("bending modulus must be positive, got {}", self.m));
        }
        if self.b2 < 0.0 || self.b0 < 0.0 {
            return Err("B coefficients must be nonnegative".into());
        }
        Ok(())
    }
}

/// Shell displacement and velocity as coefficients in the clamped eigenbasis.
#[derive(Debug, Clone, Default)]
pub struct DisplacementState {
    pub eta: DVector<f64>,
    pub eta_dot: DVector<f64>,
}

impl DisplacementState {
    pub fn zero(n: usize) -> Self {
        DisplacementState {
            eta: DVector::zeros(n),
            eta_dot: DVector::zeros(n),
        }
    }
}

/// Clamped-beam eigenbasis of the fourth-derivative operator on `[0, len]`.
///
/// Mode `k` has the closed form
/// `cosh(b x) - cos(b x) - sigma (sinh(b x) - sin(b x))` with `b len` the
/// k-th root of `cosh t cos t = 1`; evaluation uses exponentially stable
/// rearrangements so high modes do not cancel catastrophically.
#[derive(Debug, Clone)]
pub struct ShellBasis {
    pub len: f64,
    /// Wavenumbers `b_k`; the stiffness eigenvalue of mode k is `b_k^4`.
    pub beta: Vec<f64>,
    sigma: Vec<f64>,
    norm: Vec<f64>,
    /// Quadrature on `[0, len]` used for all arc integrals.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `b2`-part stiffness in the eigenbasis: entries `int w_i' w_j'`.
    grad_gram: nalgebra::DMatrix<f64>,
}

impl ShellBasis {
    pub fn new(n_modes: usize, len: f64) -> Self {
        assert!(n_modes >= 1 && len > 0.0);
        let cells = (4 * n_modes).max(48);
        let (nodes, weights) = composite_gauss(0.0, len, cells, 6);
        let mut beta = Vec::with_capacity(n_modes);
        let mut sigma = Vec::with_capacity(n_modes);
        for k in 1..=n_modes {
            let root = clamped_root(k);
            beta.push(root / len);
            sigma.push(mode_sigma(root));
        }
        let mut basis = ShellBasis {
            len,
            beta,
            sigma,
            norm: vec![1.0; n_modes],
            nodes,
            weights,
            grad_gram: nalgebra::DMatrix::zeros(n_modes, n_modes),
        };
        for k in 0..n_modes {
            let nrm: f64 = basis
                .nodes
                .iter()
                .zip(&basis.weights)
                .map(|(&x, &w)| w * basis.raw_value(k, x).powi(2))
                .sum();
            basis.norm[k] = nrm.sqrt();
        }
        let n = n_modes;
        let mut gg = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = basis
                    .nodes
                    .iter()
                    .zip(&basis.weights)
                    .map(|(&x, &w)| w * basis.deriv(i, x) * basis.deriv(j, x))
                    .sum();
                gg[(i, j)] = v;
                gg[(j, i)] = v;
            }
        }
        basis.grad_gram = gg;
        basis
    }

    pub fn n_modes(&self) -> usize {
        self.beta.len()
    }

    /// Stiffness eigenvalue of the fourth-derivative operator for mode `k`.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.beta[k].powi(4)
    }

    /// Stable `cosh(bx) - sigma sinh(bx)` and `sinh(bx) - sigma cosh(bx)`
    /// together with `cos(bx)`, `sin(bx)`.
    ///
    /// `1 - sigma` decays like `2 e^{-b len}`, so the naive difference of
    /// hyperbolic terms cancels catastrophically for high modes; it is
    /// computed in closed form instead.
    fn mode_parts(&self, k: usize, x: f64) -> (f64, f64, f64, f64) {
        let b = self.beta[k];
        let sg = self.sigma[k];
        let z = b * x;
        let t = b * self.len;
        // (sinh t - sin t) - (cosh t - cos t) = -e^{-t} - sin t + cos t
        let one_minus_sigma = (-(-t).exp() - t.sin() + t.cos()) / (t.sinh() - t.sin());
        let ep_scaled = z.exp() * one_minus_sigma;
        let em = (-z).exp();
        let ch_part = 0.5 * (ep_scaled + (1.0 + sg) * em);
        let sh_part = 0.5 * (ep_scaled - (1.0 + sg) * em);
        (ch_part, sh_part, z.cos(), z.sin())
    }

    // W      = (cosh - sg sinh) - cos + sg sin
    // W'/b   = (sinh - sg cosh) + sin + sg cos
    // W''/b^2 = (cosh - sg sinh) + cos - sg sin
    fn raw_value(&self, k: usize, x: f64) -> f64 {
        let (ch, _sh, c, s) = self.mode_parts(k, x);
        ch - c + self.sigma[k] * s
    }

    fn raw_deriv(&self, k: usize, x: f64) -> f64 {
        let (_ch, sh, c, s) = self.mode_parts(k, x);
        self.beta[k] * (sh + s + self.sigma[k] * c)
    }

    fn raw_dd(&self, k: usize, x: f64) -> f64 {
        let (ch, _sh, c, s) = self.mode_parts(k, x);
        self.beta[k] * self.beta[k] * (ch + c - self.sigma[k] * s)
    }

    /// L2-normalized mode value.
    pub fn value(&self, k: usize, x: f64) -> f64 {
        self.raw_value(k, x) / self.norm[k]
    }

    /// First derivative of the normalized mode.
    pub fn deriv(&self, k: usize, x: f64) -> f64 {
        self.raw_deriv(k, x) / self.norm[k]
    }

    /// Second derivative of the normalized mode.
    pub fn second_deriv(&self, k: usize, x: f64) -> f64 {
        self.raw_dd(k, x) / self.norm[k]
    }

    /// Displacement value at an arc coordinate.
    pub fn eval(&self, coeff: &DVector<f64>, x: f64) -> f64 {
        (0..coeff.len()).map(|k| coeff[k] * self.value(k, x)).sum()
    }

    /// Arc derivative of a displacement.
    pub fn eval_deriv(&self, coeff: &DVector<f64>, x: f64) -> f64 {
        (0..coeff.len()).map(|k| coeff[k] * self.deriv(k, x)).sum()
    }

    /// Second arc derivative of a displacement.
    pub fn eval_second(&self, coeff: &DVector<f64>, x: f64) -> f64 {
        (0..coeff.len())
            .map(|k| coeff[k] * self.second_deriv(k, x))
            .sum()
    }

    /// `L^2(M)` inner product of two coefficient vectors (orthonormal basis).
    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(b)
    }

    /// Coefficients of the elastic gradient `K'(eta)`.
    pub fn koiter_gradient(&self, eta: &DVector<f64>, p: &ShellParams) -> DVector<f64> {
        let mut out = DVector::zeros(eta.len());
        for k in 0..eta.len() {
            out[k] = p.m * self.eigenvalue(k) * eta[k] + p.b0 * eta[k];
        }
        if p.b2 != 0.0 {
            out += p.b2 * (&self.grad_gram * eta);
        }
        out
    }

    /// Elastic energy `K(eta) = 1/2 <K'(eta), eta>`.
    pub fn koiter_energy(&self, eta: &DVector<f64>, p: &ShellParams) -> f64 {
        0.5 * self.inner(&self.koiter_gradient(eta, p), eta)
    }

    /// Discrete bending seminorm `int |eta''|^2` by arc quadrature.
    pub fn bending_seminorm_sq(&self, eta: &DVector<f64>) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * self.eval_second(eta, x).powi(2))
            .sum()
    }

    /// Gram matrix of the modes under arc quadrature (identity up to
    /// quadrature error).
    pub fn gram(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n_modes();
        let mut g = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = self
                    .nodes
                    .iter()
                    .zip(&self.weights)
                    .map(|(&x, &w)| w * self.value(i, x) * self.value(j, x))
                    .sum();
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }
}

/// k-th positive root of `cosh t * cos t = 1`.
fn clamped_root(k: usize) -> f64 {
    // roots approach (k + 1/2) pi; solve cos t = sech t by Newton
    let mut t = (k as f64 + 0.5) * std::f64::consts::PI;
    if k == 1 {
        t = 4.73; // first root sits slightly below 1.5 pi
    }
    for _ in 0..60 {
        let f = t.cos() - 1.0 / t.cosh();
        let d = -t.sin() + t.sinh() / t.cosh().powi(2);
        let step = f / d;
        t -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    t
}

fn mode_sigma(t: f64) -> f64 {
    (t.cosh() - t.cos()) / (t.sinh() - t.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn roots_match_the_classical_values() {
        assert_relative_eq!(clamped_root(1), 4.730040744862704, epsilon = 1e-10);
        assert_relative_eq!(clamped_root(2), 7.853204624095838, epsilon = 1e-9);
        assert_relative_eq!(clamped_root(3), 10.995607838001671, epsilon = 1e-9);
    }

    #[test]
    fn eigenvalues_match_fd_oracle_within_one_percent() {
        let basis = ShellBasis::new(3, 1.0);
        let fd = crate::oracle::clamped_beam_fd_spectrum(1.0, 256, 3);
        for k in 0..3 {
            let rel = (basis.eigenvalue(k) - fd[k]).abs() / fd[k];
            assert!(rel < 0.01, "mode {k}: {} vs {}", basis.eigenvalue(k), fd[k]);
        }
    }

    #[test]
    fn modes_are_orthonormal_and_clamped() {
        let basis = ShellBasis::new(8, std::f64::consts::PI);
        let g = basis.gram();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g[(i, j)] - want).abs() < 1e-8,
                    "gram[{i},{j}] = {}",
                    g[(i, j)]
                );
            }
        }
        for k in 0..8 {
            assert!(basis.value(k, 0.0).abs() < 1e-9, "left value mode {k}");
            assert!(
                basis.value(k, basis.len).abs() < 1e-8,
                "right value mode {k}: {}",
                basis.value(k, basis.len)
            );
            assert!(basis.deriv(k, 0.0).abs() < 1e-8, "left slope mode {k}");
            assert!(
                basis.deriv(k, basis.len).abs() < 1e-7,
                "right slope mode {k}: {}",
                basis.deriv(k, basis.len)
            );
        }
    }

    #[test]
    fn gradient_is_diagonal_on_eigenmodes() {
        let basis = ShellBasis::new(4, std::f64::consts::PI);
        let p = ShellParams::default();
        let mut eta = DVector::zeros(4);
        eta[2] = 1.0;
        let g = basis.koiter_gradient(&eta, &p);
        for k in 0..4 {
            let want = if k == 2 { p.m * basis.eigenvalue(2) } else { 0.0 };
            assert_relative_eq!(g[k], want, epsilon = 1e-12 * basis.eigenvalue(2));
        }
        // energy of the unit eigenmode
        let e = basis.koiter_energy(&eta, &p);
        assert_relative_eq!(e, 0.5 * p.m * basis.eigenvalue(2), epsilon = 1e-10);
        // quadratic scaling
        assert_relative_eq!(
            basis.koiter_energy(&(2.0 * &eta), &p),
            4.0 * e,
            epsilon = 1e-12 * e
        );
    }

    #[test]
    fn zero_displacement() {
        let basis = ShellBasis::new(4, 1.0);
        let p = ShellParams::default();
        let eta = DVector::zeros(4);
        assert_eq!(basis.koiter_gradient(&eta, &p).norm(), 0.0);
        assert_eq!(basis.koiter_energy(&eta, &p), 0.0);
    }

    #[test]
    fn gradient_linearity() {
        let basis = ShellBasis::new(6, 2.0);
        let p = ShellParams {
            m: 1.3,
            b2: 0.2,
            b0: 0.5,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let e1 = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
        let e2 = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
        let alpha = 0.7;
        let lhs = basis.koiter_gradient(&(alpha * &e1 + &e2), &p);
        let rhs = alpha * basis.koiter_gradient(&e1, &p) + basis.koiter_gradient(&e2, &p);
        assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + e1.norm() + e2.norm()));
    }

    #[test]
    fn symmetry_and_coercivity_on_random_states() {
        let basis = ShellBasis::new(6, std::f64::consts::PI);
        let p = ShellParams {
            m: 0.8,
            b2: 0.1,
            b0: 0.3,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let e1 = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
            let e2 = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
            let s1 = basis.inner(&basis.koiter_gradient(&e1, &p), &e2);
            let s2 = basis.inner(&e1, &basis.koiter_gradient(&e2, &p));
            assert!((s1 - s2).abs() < 1e-10, "symmetry {s1} vs {s2}");
            // coercivity at B = 0
            let p0 = ShellParams {
                m: p.m,
                b2: 0.0,
                b0: 0.0,
            };
            let k = basis.koiter_energy(&e1, &p0);
            let bend = basis.bending_seminorm_sq(&e1);
            assert!(
                k >= 0.5 * p.m * bend - 1e-10,
                "coercivity {k} vs {}",
                0.5 * p.m * bend
            );
        }
    }

    #[test]
    fn gradient_consistent_with_energy_by_finite_differences() {
        let basis = ShellBasis::new(5, std::f64::consts::PI);
        let p = ShellParams {
            m: 1.0,
            b2: 0.4,
            b0: 0.2,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let eta = DVector::from_fn(5, |_, _| rng.random_range(-1.0..1.0));
        let dir = DVector::from_fn(5, |_, _| rng.random_range(-1.0..1.0));
        let h = 1e-6;
        let e_plus = basis.koiter_energy(&(&eta + h * &dir), &p);
        let e_minus = basis.koiter_energy(&(&eta - h * &dir), &p);
        let fd = (e_plus - e_minus) / (2.0 * h);
        let exact = basis.inner(&basis.koiter_gradient(&eta, &p), &dir);
        assert!(
            (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
            "fd {fd} vs {exact}"
        );
    }
}
