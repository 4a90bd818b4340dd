//! Smoothing operators for boundary displacements and space-time fields.
//!
//! Boundary displacements are smoothed by one-sided kernels in time (reading
//! forward near the start of the window and backward near the end, blended by
//! a monotone ramp, so no values outside the window are ever sampled) and by
//! a periodic bump in the arc parameter. Space-time fields are smoothed by a
//! separable even bump on a uniform grid after zero extension.

use thiserror::Error;

use crate::geometry::BoundaryField;
use crate::quadrature::composite_gauss;

#[derive(Debug, Error)]
pub enum MollifierError {
    #[error("kappa = {kappa} too large for window {span} (limit span/4)")]
    KappaTooLarge { kappa: f64, span: f64 },
}

/// Parameters of the smoothing operators.
#[derive(Debug, Clone, Copy)]
pub struct MollifierConfig {
    /// Smoothing radius in time and arclength.
    pub kappa: f64,
    /// Time window `[t0, t0 + span]`.
    pub t0: f64,
    pub span: f64,
    /// Parameter speed of the boundary curve (arc radius -> angle radius).
    pub arc_speed: f64,
}

impl MollifierConfig {
    pub fn validate(&self, shell_arclength: f64) -> Result<(), MollifierError> {
        if self.kappa > 0.25 * self.span {
            return Err(MollifierError::KappaTooLarge {
                kappa: self.kappa,
                span: self.span,
            });
        }
        if self.kappa > 0.25 * shell_arclength {
            return Err(MollifierError::KappaTooLarge {
                kappa: self.kappa,
                span: shell_arclength,
            });
        }
        Ok(())
    }
}

/// `C^infty` ramp: 0 on `[0, 1/4]`, 1 on `[3/4, 1]` of the window.
pub fn blend_ramp(t0: f64, span: f64, t: f64) -> f64 {
    fn s(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            (-1.0 / x).exp()
        }
    }
    let u = ((t - t0) / span - 0.25) * 2.0;
    let a = s(u);
    let b = s(1.0 - u);
    a / (a + b)
}

fn blend_ramp_deriv(t0: f64, span: f64, t: f64) -> f64 {
    let h = 1e-6 * span;
    (blend_ramp(t0, span, t + h) - blend_ramp(t0, span, t - h)) / (2.0 * h)
}

#[derive(Clone, Copy)]
enum Side {
    /// Support in `(-kappa, 0]`: samples the input forward in time.
    Minus,
    /// Support in `[0, kappa)`: samples the input backward in time.
    Plus,
}

/// Polynomial bump `(1 - u^2)^4` sampled on one side, weights normalized to
/// unit discrete mass.
fn one_sided_kernel(kappa: f64, side: Side) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = match side {
        Side::Minus => (-kappa, 0.0),
        Side::Plus => (0.0, kappa),
    };
    let (nodes, quad_w) = composite_gauss(lo, hi, 8, 6);
    let mut weights: Vec<f64> = nodes
        .iter()
        .zip(&quad_w)
        .map(|(&s, &w)| {
            let u = match side {
                Side::Minus => 2.0 * s / kappa + 1.0,
                Side::Plus => 2.0 * s / kappa - 1.0,
            };
            w * (1.0 - u * u).powi(4).max(0.0)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    (nodes, weights)
}

/// Symmetric bump on `(-radius, radius)`, unit discrete mass.
pub fn symmetric_kernel(radius: f64, cells: usize) -> (Vec<f64>, Vec<f64>) {
    let (nodes, quad_w) = composite_gauss(-radius, radius, cells, 6);
    let mut weights: Vec<f64> = nodes
        .iter()
        .zip(&quad_w)
        .map(|(&s, &w)| {
            let u = s / radius;
            w * (1.0 - u * u).powi(4).max(0.0)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    (nodes, weights)
}

/// A boundary displacement trajectory `zeta(t, theta)`.
pub trait BoundaryTrajectory {
    fn value(&self, t: f64, theta: f64) -> f64;
    /// Time derivative; used for chart velocities of the smoothed output.
    fn time_deriv(&self, t: f64, theta: f64) -> f64;
}

/// Smoothed displacement trajectory; evaluates the convolution on demand.
pub struct SmoothedDisplacement<'a> {
    input: &'a dyn BoundaryTrajectory,
    cfg: MollifierConfig,
    t_minus: (Vec<f64>, Vec<f64>),
    t_plus: (Vec<f64>, Vec<f64>),
    space: (Vec<f64>, Vec<f64>),
}

/// Smooths a boundary displacement trajectory.
///
/// The output obeys the max principle exactly and converges uniformly to the
/// input as `kappa -> 0`.
pub fn mollify_displacement<'a>(
    zeta: &'a dyn BoundaryTrajectory,
    cfg: MollifierConfig,
    shell_arclength: f64,
) -> Result<SmoothedDisplacement<'a>, MollifierError> {
    cfg.validate(shell_arclength)?;
    let t_minus = one_sided_kernel(cfg.kappa, Side::Minus);
    let t_plus = one_sided_kernel(cfg.kappa, Side::Plus);
    let space = symmetric_kernel(cfg.kappa / cfg.arc_speed, 8);
    Ok(SmoothedDisplacement {
        input: zeta,
        cfg,
        t_minus,
        t_plus,
        space,
    })
}

impl SmoothedDisplacement<'_> {
    fn accumulate(&self, t: f64, theta: f64, f: &dyn Fn(f64, f64) -> f64) -> f64 {
        let psi = blend_ramp(self.cfg.t0, self.cfg.span, t);
        let mut acc = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut add = |side: &(Vec<f64>, Vec<f64>), blend: f64| {
            if blend == 0.0 {
                return;
            }
            for (&s, &wt) in side.0.iter().zip(&side.1) {
                for (&dx, &wx) in self.space.0.iter().zip(&self.space.1) {
                    let v = f(t - s, theta - dx);
                    acc += blend * wt * wx * v;
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        };
        add(&self.t_plus, psi);
        add(&self.t_minus, 1.0 - psi);
        // the convolution is a convex average of the sampled values; clamping
        // to their hull removes rounding overshoot so the max principle is
        // exact
        acc.clamp(lo, hi)
    }

    pub fn value(&self, t: f64, theta: f64) -> f64 {
        self.accumulate(t, theta, &|tt, th| self.input.value(tt, th))
    }

    /// The smoothing operator applied to the time derivative of the input.
    pub fn of_time_deriv(&self, t: f64, theta: f64) -> f64 {
        self.accumulate(t, theta, &|tt, th| self.input.time_deriv(tt, th))
    }

    /// Exact time derivative of the smoothed output (includes the blend
    /// term, which vanishes wherever the ramp is locally constant).
    pub fn time_deriv(&self, t: f64, theta: f64) -> f64 {
        let dpsi = blend_ramp_deriv(self.cfg.t0, self.cfg.span, t);
        let mut out = self.of_time_deriv(t, theta);
        if dpsi != 0.0 {
            let conv_side = |side: &(Vec<f64>, Vec<f64>)| -> f64 {
                let mut acc = 0.0;
                for (&s, &wt) in side.0.iter().zip(&side.1) {
                    for (&dx, &wx) in self.space.0.iter().zip(&self.space.1) {
                        acc += wt * wx * self.input.value(t - s, theta - dx);
                    }
                }
                acc
            };
            out += dpsi * (conv_side(&self.t_plus) - conv_side(&self.t_minus));
        }
        out
    }

    /// Arc-parameter derivative by differentiating the (even) space kernel:
    /// central differences on the smooth output.
    pub fn deriv_theta(&self, t: f64, theta: f64) -> f64 {
        let h = 1e-5;
        (self.value(t, theta + h) - self.value(t, theta - h)) / (2.0 * h)
    }

    /// View at a fixed time as a boundary field for chart construction.
    pub fn at_time(&self, t: f64) -> SmoothedSlice<'_> {
        SmoothedSlice { parent: self, t }
    }

    /// Time-derivative view at a fixed time.
    pub fn velocity_at_time(&self, t: f64) -> SmoothedVelocitySlice<'_> {
        SmoothedVelocitySlice { parent: self, t }
    }
}

pub struct SmoothedSlice<'a> {
    parent: &'a SmoothedDisplacement<'a>,
    t: f64,
}

impl BoundaryField for SmoothedSlice<'_> {
    fn value(&self, theta: f64) -> f64 {
        self.parent.value(self.t, theta)
    }
    fn deriv_theta(&self, theta: f64) -> f64 {
        self.parent.deriv_theta(self.t, theta)
    }
}

pub struct SmoothedVelocitySlice<'a> {
    parent: &'a SmoothedDisplacement<'a>,
    t: f64,
}

impl BoundaryField for SmoothedVelocitySlice<'_> {
    fn value(&self, theta: f64) -> f64 {
        self.parent.time_deriv(self.t, theta)
    }
    fn deriv_theta(&self, theta: f64) -> f64 {
        let h = 1e-5;
        (self.parent.time_deriv(self.t, theta + h) - self.parent.time_deriv(self.t, theta - h))
            / (2.0 * h)
    }
}

/// Uniform space-time grid holding sampled field values, zero outside.
#[derive(Debug, Clone)]
pub struct GridField {
    pub t0: f64,
    pub dt: f64,
    pub nt: usize,
    pub x0: f64,
    pub dx: f64,
    pub nx: usize,
    pub y0: f64,
    pub dy: f64,
    pub ny: usize,
    /// Layout `[t][y][x]`.
    pub data: Vec<f64>,
}

impl GridField {
    pub fn zeros(t0: f64, dt: f64, nt: usize, x0: f64, dx: f64, nx: usize, y0: f64, dy: f64, ny: usize) -> Self {
        GridField {
            t0,
            dt,
            nt,
            x0,
            dx,
            nx,
            y0,
            dy,
            ny,
            data: vec![0.0; nt * nx * ny],
        }
    }

    #[inline]
    pub fn idx(&self, it: usize, iy: usize, ix: usize) -> usize {
        (it * self.ny + iy) * self.nx + ix
    }

    /// Trilinear sample; zero outside the grid box.
    pub fn sample(&self, t: f64, x: f64, y: f64) -> f64 {
        let ft = (t - self.t0) / self.dt;
        let fx = (x - self.x0) / self.dx;
        let fy = (y - self.y0) / self.dy;
        if ft < 0.0 || fx < 0.0 || fy < 0.0 {
            return 0.0;
        }
        let (it, ix, iy) = (ft as usize, fx as usize, fy as usize);
        if it + 1 >= self.nt || ix + 1 >= self.nx || iy + 1 >= self.ny {
            return 0.0;
        }
        let (at, ax, ay) = (ft - it as f64, fx - ix as f64, fy - iy as f64);
        let mut acc = 0.0;
        for (dt_, wt_) in [(0, 1.0 - at), (1, at)] {
            for (dy_, wy_) in [(0, 1.0 - ay), (1, ay)] {
                for (dx_, wx_) in [(0, 1.0 - ax), (1, ax)] {
                    acc += wt_ * wy_ * wx_ * self.data[self.idx(it + dt_, iy + dy_, ix + dx_)];
                }
            }
        }
        acc
    }
}

/// Discrete kernel weights for one grid axis: offsets in cells and weights
/// with unit mass.
fn axis_kernel(radius: f64, step: f64) -> Vec<(isize, f64)> {
    let half = (radius / step).ceil() as isize;
    let mut out = Vec::new();
    let mut total = 0.0;
    for k in -half..=half {
        let u = k as f64 * step / radius;
        if u.abs() < 1.0 {
            let w = (1.0 - u * u).powi(4);
            out.push((k, w));
            total += w;
        }
    }
    for (_, w) in &mut out {
        *w /= total;
    }
    out
}

/// Smooths a gridded field by separable convolution with an even bump of
/// radius `kappa` in every axis. Values are zero-extended beyond the grid.
///
/// The discrete operator is exactly self-adjoint under the uniform grid
/// pairing and never increases the sup-norm.
pub fn mollify_field(field: &GridField, kappa: f64) -> GridField {
    let sup = field.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = field.clone();
    let kt = axis_kernel(kappa, field.dt);
    let kx = axis_kernel(kappa, field.dx);
    let ky = axis_kernel(kappa, field.dy);
    // time axis
    let mut tmp = out.data.clone();
    convolve_axis(&out, &kt, 0, &mut tmp);
    out.data = tmp;
    let mut tmp = out.data.clone();
    convolve_axis(&out, &ky, 1, &mut tmp);
    out.data = tmp;
    let mut tmp = out.data.clone();
    convolve_axis(&out, &kx, 2, &mut tmp);
    out.data = tmp;
    for v in &mut out.data {
        *v = v.clamp(-sup, sup);
    }
    out
}

fn convolve_axis(f: &GridField, kernel: &[(isize, f64)], axis: usize, out: &mut [f64]) {
    let (nt, ny, nx) = (f.nt as isize, f.ny as isize, f.nx as isize);
    for it in 0..nt {
        for iy in 0..ny {
            for ix in 0..nx {
                let mut acc = 0.0;
                for &(k, w) in kernel {
                    let (jt, jy, jx) = match axis {
                        0 => (it - k, iy, ix),
                        1 => (it, iy - k, ix),
                        _ => (it, iy, ix - k),
                    };
                    if jt >= 0 && jt < nt && jy >= 0 && jy < ny && jx >= 0 && jx < nx {
                        acc += w * f.data[f.idx(jt as usize, jy as usize, jx as usize)];
                    }
                }
                out[f.idx(it as usize, iy as usize, ix as usize)] = acc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    struct Analytic<F: Fn(f64, f64) -> f64, G: Fn(f64, f64) -> f64> {
        f: F,
        df: G,
    }
    impl<F: Fn(f64, f64) -> f64, G: Fn(f64, f64) -> f64> BoundaryTrajectory for Analytic<F, G> {
        fn value(&self, t: f64, theta: f64) -> f64 {
            (self.f)(t, theta)
        }
        fn time_deriv(&self, t: f64, theta: f64) -> f64 {
            (self.df)(t, theta)
        }
    }

    fn cfg(kappa: f64) -> MollifierConfig {
        MollifierConfig {
            kappa,
            t0: 0.0,
            span: 1.0,
            arc_speed: 1.0,
        }
    }

    #[test]
    fn constant_is_reproduced() {
        let traj = Analytic {
            f: |_, _| 0.37,
            df: |_, _| 0.0,
        };
        let sm = mollify_displacement(&traj, cfg(0.05), std::f64::consts::PI).unwrap();
        for &t in &[0.0, 0.3, 0.77, 1.0] {
            assert!((sm.value(t, 1.0) - 0.37).abs() < 1e-14);
        }
    }

    #[test]
    fn kappa_limits() {
        let traj = Analytic {
            f: |_, _| 0.0,
            df: |_, _| 0.0,
        };
        assert!(mollify_displacement(&traj, cfg(0.3), std::f64::consts::PI).is_err());
        let tight = MollifierConfig {
            kappa: 0.2,
            t0: 0.0,
            span: 1.0,
            arc_speed: 1.0,
        };
        assert!(mollify_displacement(&traj, tight, 0.5).is_err());
    }

    #[test]
    fn max_principle_is_exact_on_random_trajectories() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = rng.random_range(-0.2..0.2);
            let b = rng.random_range(-0.2..0.2);
            let w1 = rng.random_range(0.5..6.0);
            let w2 = rng.random_range(0.5..6.0);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            let traj = Analytic {
                f: move |t: f64, th: f64| a * (w1 * t + phase).sin() * (th).cos() + b * (w2 * th).sin(),
                df: move |t: f64, th: f64| a * w1 * (w1 * t + phase).cos() * (th).cos(),
            };
            let sm = mollify_displacement(&traj, cfg(0.04), std::f64::consts::PI).unwrap();
            let mut sup_in: f64 = 0.0;
            for i in 0..60 {
                for j in 0..30 {
                    let t = i as f64 / 59.0;
                    let th = std::f64::consts::TAU * j as f64 / 30.0;
                    sup_in = sup_in.max(traj.value(t, th).abs());
                }
            }
            for i in 0..30 {
                for j in 0..15 {
                    let t = i as f64 / 29.0;
                    let th = std::f64::consts::TAU * j as f64 / 15.0;
                    assert!(
                        sm.value(t, th).abs() <= sup_in,
                        "max principle violated: {} > {}",
                        sm.value(t, th).abs(),
                        sup_in
                    );
                }
            }
        }
    }

    #[test]
    fn uniform_convergence_is_monotone_under_kappa_halving() {
        let traj = Analytic {
            f: |t: f64, th: f64| 0.1 * (2.0 * t).sin() * th.cos(),
            df: |t: f64, th: f64| 0.2 * (2.0 * t).cos() * th.cos(),
        };
        let mut errors = Vec::new();
        for k in 0..4 {
            let kappa = 0.08 / (1 << k) as f64;
            let sm = mollify_displacement(&traj, cfg(kappa), std::f64::consts::PI).unwrap();
            let mut err: f64 = 0.0;
            for i in 0..40 {
                for j in 0..20 {
                    let t = i as f64 / 39.0;
                    let th = std::f64::consts::TAU * j as f64 / 20.0;
                    err = err.max((sm.value(t, th) - traj.value(t, th)).abs());
                }
            }
            errors.push(err);
        }
        for w in errors.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "errors not monotone: {errors:?}");
        }
    }

    #[test]
    fn lipschitz_error_halves_with_kappa() {
        // kinked-in-time trajectory
        let traj = Analytic {
            f: |t: f64, th: f64| 0.1 * (t - 0.5).abs() * (1.0 + 0.3 * th.cos()),
            df: |t: f64, th: f64| 0.1 * (t - 0.5).signum() * (1.0 + 0.3 * th.cos()),
        };
        let sup_err = |kappa: f64| {
            let sm = mollify_displacement(&traj, cfg(kappa), std::f64::consts::PI).unwrap();
            let mut err: f64 = 0.0;
            for i in 0..200 {
                let t = i as f64 / 199.0;
                err = err.max((sm.value(t, 0.3) - traj.value(t, 0.3)).abs());
            }
            err
        };
        let e1 = sup_err(0.08);
        let e2 = sup_err(0.04);
        assert!(e2 / e1 <= 0.75, "ratio {} from {e1}, {e2}", e2 / e1);
    }

    #[test]
    fn commutation_with_time_derivative_where_ramp_is_constant() {
        let traj = Analytic {
            f: |t: f64, th: f64| 0.08 * (3.0 * t).sin() * (2.0 * th).cos(),
            df: |t: f64, th: f64| 0.24 * (3.0 * t).cos() * (2.0 * th).cos(),
        };
        let sm = mollify_displacement(&traj, cfg(0.02), std::f64::consts::PI).unwrap();
        let h = 1e-5;
        for &t in &[0.1, 0.15, 0.2, 0.9] {
            let dd = (sm.value(t + h, 0.7) - sm.value(t - h, 0.7)) / (2.0 * h);
            let rd = sm.of_time_deriv(t, 0.7);
            assert!(
                (dd - rd).abs() <= 1e-6,
                "commutation residual {} at t={t}",
                (dd - rd).abs()
            );
        }
    }

    #[test]
    fn smoothed_output_has_bounded_fourth_differences() {
        let traj = Analytic {
            f: |t: f64, th: f64| 0.1 * (t - 0.5).abs() * th.cos(),
            df: |t: f64, th: f64| 0.1 * (t - 0.5).signum() * th.cos(),
        };
        let sm = mollify_displacement(&traj, cfg(0.06), std::f64::consts::PI).unwrap();
        let dd4 = |h: f64| {
            let t = 0.5;
            let v: Vec<f64> = (-2..=2)
                .map(|k| sm.value(t + k as f64 * h, 0.2))
                .collect();
            (v[0] - 4.0 * v[1] + 6.0 * v[2] - 4.0 * v[3] + v[4]) / h.powi(4)
        };
        let a = dd4(4e-3);
        let b = dd4(2e-3);
        assert!(
            b.abs() <= 2.0 * a.abs() + 1e-3,
            "fourth differences explode: {a} -> {b}"
        );
    }

    #[test]
    fn grid_mollifier_preserves_constant_core_and_is_self_adjoint() {
        let mut f = GridField::zeros(0.0, 0.1, 12, -1.0, 0.05, 41, -1.0, 0.05, 41);
        for v in &mut f.data {
            *v = 1.0;
        }
        let kappa = 0.12;
        let sm = mollify_field(&f, kappa);
        // center of the grid: kernel mass fully inside
        let c = sm.data[sm.idx(6, 20, 20)];
        assert!((c - 1.0).abs() < 1e-12, "center value {c}");
        // sup-norm never grows
        assert!(sm.data.iter().all(|v| v.abs() <= 1.0));

        // adjointness of the discrete operator
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut u = f.clone();
        let mut v = f.clone();
        for w in &mut u.data {
            *w = rng.random_range(-1.0..1.0);
        }
        for w in &mut v.data {
            *w = rng.random_range(-1.0..1.0);
        }
        let su = mollify_field(&u, kappa);
        let sv = mollify_field(&v, kappa);
        let p1: f64 = su.data.iter().zip(&v.data).map(|(a, b)| a * b).sum();
        let p2: f64 = u.data.iter().zip(&sv.data).map(|(a, b)| a * b).sum();
        assert!(
            (p1 - p2).abs() <= 1e-8 * p1.abs().max(1.0),
            "adjointness {p1} vs {p2}"
        );
    }
}
