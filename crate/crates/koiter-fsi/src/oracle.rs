//! Independent finite-difference references.
//!
//! Everything in this module is deliberately built from dense grids and
//! low-order stencils so it shares no code path with the spectral solvers it
//! cross-checks.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

type V2 = Vector2<f64>;

/// Central-difference Jacobian determinant of a planar map.
pub fn fd_jacobian_det(map: impl Fn(V2) -> V2, x: V2, h: f64) -> f64 {
    let dx = (map(V2::new(x.x + h, x.y)) - map(V2::new(x.x - h, x.y))) / (2.0 * h);
    let dy = (map(V2::new(x.x, x.y + h)) - map(V2::new(x.x, x.y - h))) / (2.0 * h);
    Matrix2::from_columns(&[dx, dy]).determinant()
}

/// Five-point Laplacian of a scalar field at a point.
pub fn fd_laplacian(f: impl Fn(V2) -> f64, x: V2, h: f64) -> f64 {
    (f(V2::new(x.x + h, x.y))
        + f(V2::new(x.x - h, x.y))
        + f(V2::new(x.x, x.y + h))
        + f(V2::new(x.x, x.y - h))
        - 4.0 * f(x))
        / (h * h)
}

/// Dense finite-difference eigensolve of the clamped fourth-derivative
/// operator on an interval of length `len` with `n` grid points.
///
/// Uses the standard 5-point stencil with reflection ghosts enforcing the
/// clamped slope condition; returns eigenvalues ascending together with the
/// grid spacing.
pub fn clamped_beam_fd_spectrum(len: f64, n: usize, n_eigs: usize) -> Vec<f64> {
    let h = len / (n - 1) as f64;
    let m = n - 2; // interior unknowns
    let mut a = DMatrix::<f64>::zeros(m, m);
    let h4 = h.powi(4);
    for i in 0..m {
        a[(i, i)] = 6.0 / h4;
        if i + 1 < m {
            a[(i, i + 1)] = -4.0 / h4;
            a[(i + 1, i)] = -4.0 / h4;
        }
        if i + 2 < m {
            a[(i, i + 2)] = 1.0 / h4;
            a[(i + 2, i)] = 1.0 / h4;
        }
    }
    // clamped ends: ghost reflection w(-1) = w(1) adds 1/h^4 at the first and
    // last interior point
    a[(0, 0)] += 1.0 / h4;
    a[(m - 1, m - 1)] += 1.0 / h4;
    let eig = a.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals.truncate(n_eigs);
    vals
}

/// Crank–Nicolson heat-equation reference on the unit square with the
/// natural (no-flux) boundary condition, dense 5-point grid.
///
/// `rho0` is sampled at cell centers of an `n x n` grid; the solver advances
/// to time `t_end` and returns the final grid values. The linear systems are
/// solved by conjugate gradients.
pub struct HeatReference {
    pub n: usize,
    pub side: f64,
    pub values: Vec<f64>,
}

impl HeatReference {
    pub fn run(
        rho0: impl Fn(V2) -> f64,
        side: f64,
        n: usize,
        eps: f64,
        t_end: f64,
        steps: usize,
    ) -> Self {
        let h = side / n as f64;
        let mut u = DVector::<f64>::zeros(n * n);
        for j in 0..n {
            for i in 0..n {
                let p = V2::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                u[j * n + i] = rho0(p);
            }
        }
        let dt = t_end / steps as f64;
        let lam = eps * dt / (2.0 * h * h);
        // A u = (I + lam * Lap_neumann) u, SPD
        let apply = |v: &DVector<f64>, out: &mut DVector<f64>, sign: f64| {
            for j in 0..n {
                for i in 0..n {
                    let c = v[j * n + i];
                    let l = if i > 0 { v[j * n + i - 1] } else { c };
                    let r = if i + 1 < n { v[j * n + i + 1] } else { c };
                    let d = if j > 0 { v[(j - 1) * n + i] } else { c };
                    let t = if j + 1 < n { v[(j + 1) * n + i] } else { c };
                    out[j * n + i] = c + sign * lam * (4.0 * c - l - r - d - t);
                }
            }
        };
        let mut rhs = DVector::<f64>::zeros(n * n);
        let mut tmp = DVector::<f64>::zeros(n * n);
        for _ in 0..steps {
            apply(&u, &mut rhs, -1.0);
            // CG on (I + lam L) x = rhs
            let mut x = u.clone();
            apply(&x, &mut tmp, 1.0);
            let mut res = &rhs - &tmp;
            let mut p = res.clone();
            let mut rr = res.dot(&res);
            for _ in 0..(4 * n) {
                if rr.sqrt() < 1e-12 {
                    break;
                }
                apply(&p, &mut tmp, 1.0);
                let alpha = rr / p.dot(&tmp);
                x.axpy(alpha, &p, 1.0);
                res.axpy(-alpha, &tmp, 1.0);
                let rr_new = res.dot(&res);
                let beta = rr_new / rr;
                rr = rr_new;
                p = &res + beta * &p;
            }
            u = x;
        }
        HeatReference {
            n,
            side,
            values: u.iter().copied().collect(),
        }
    }

    /// Bilinear sample of the reference solution.
    pub fn sample(&self, p: V2) -> f64 {
        let h = self.side / self.n as f64;
        let fx = (p.x / h - 0.5).clamp(0.0, (self.n - 1) as f64);
        let fy = (p.y / h - 0.5).clamp(0.0, (self.n - 1) as f64);
        let i = (fx as usize).min(self.n - 2);
        let j = (fy as usize).min(self.n - 2);
        let ax = fx - i as f64;
        let ay = fy - j as f64;
        let v = |ii: usize, jj: usize| self.values[jj * self.n + ii];
        (1.0 - ax) * (1.0 - ay) * v(i, j)
            + ax * (1.0 - ay) * v(i + 1, j)
            + (1.0 - ax) * ay * v(i, j + 1)
            + ax * ay * v(i + 1, j + 1)
    }
}
