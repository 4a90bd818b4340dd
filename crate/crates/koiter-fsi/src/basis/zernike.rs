//! Zernike polynomial basis on a disk, optionally composed with a radial
//! star-shape map so the same polynomials serve star-shaped domains.

use nalgebra::DVector;

use super::{ScalarBasis, V2};
use crate::geometry::BoundaryCurve;

/// One Zernike mode: radial order `n`, signed angular order `m`
/// (`m > 0` cosine, `m < 0` sine, `m = 0` radial only).
#[derive(Debug, Clone)]
struct Mode {
    m: i32,
    /// `(power, coefficient)` pairs of the radial polynomial.
    poly: Vec<(i32, f64)>,
    /// L2 normalization on the unit disk.
    norm: f64,
}

/// Zernike basis over the region bounded by `curve`, via the radial map
/// `rho = r / c(theta)`.
#[derive(Debug, Clone)]
pub struct ZernikeBasis {
    modes: Vec<Mode>,
    curve: BoundaryCurve,
}

fn factorial(n: i32) -> f64 {
    (1..=n as i64).map(|k| k as f64).product()
}

fn radial_poly(n: i32, m_abs: i32) -> Vec<(i32, f64)> {
    let mut out = Vec::new();
    let half = (n - m_abs) / 2;
    for j in 0..=half {
        let c = (if j % 2 == 0 { 1.0 } else { -1.0 }) * factorial(n - j)
            / (factorial(j) * factorial((n + m_abs) / 2 - j) * factorial((n - m_abs) / 2 - j));
        out.push((n - 2 * j, c));
    }
    out
}

impl ZernikeBasis {
    /// First `n_modes` modes in radial-then-angular order over the unit disk.
    pub fn unit_disk(n_modes: usize) -> Self {
        Self::on_curve(n_modes, BoundaryCurve::circle(1.0))
    }

    /// Basis adapted to a star-shaped region.
    pub fn on_curve(n_modes: usize, curve: BoundaryCurve) -> Self {
        let mut modes = Vec::with_capacity(n_modes);
        let mut n = 0;
        'fill: loop {
            let mut m = -n;
            while m <= n {
                let poly = radial_poly(n, m.abs());
                let ang_norm = if m == 0 {
                    std::f64::consts::TAU
                } else {
                    std::f64::consts::PI
                };
                let norm = (ang_norm / (2.0 * (n as f64 + 1.0))).sqrt();
                modes.push(Mode { m, poly, norm });
                if modes.len() == n_modes {
                    break 'fill;
                }
                m += 2;
            }
            n += 1;
        }
        ZernikeBasis { modes, curve }
    }

    /// `(R, R', R/rho)` of the radial polynomial at `rho`.
    fn radial_parts(&self, k: usize, rho: f64) -> (f64, f64, f64) {
        let mode = &self.modes[k];
        let (mut v, mut d, mut v_over) = (0.0, 0.0, 0.0);
        for &(p, c) in &mode.poly {
            v += c * rho.powi(p);
            if p >= 1 {
                d += c * p as f64 * rho.powi(p - 1);
                v_over += c * rho.powi(p - 1);
            }
        }
        (v, d, v_over)
    }

    fn angular_parts(&self, k: usize, theta: f64) -> (f64, f64) {
        let m = self.modes[k].m;
        if m == 0 {
            (1.0, 0.0)
        } else if m > 0 {
            let mf = m as f64;
            ((mf * theta).cos(), -mf * (mf * theta).sin())
        } else {
            let mf = (-m) as f64;
            ((mf * theta).sin(), mf * (mf * theta).cos())
        }
    }

    fn polar(&self, p: V2) -> (f64, f64, f64, f64) {
        let r = p.norm().max(1e-12);
        let theta = p.y.atan2(p.x);
        let c = self.curve.radius_at(theta);
        (r, theta, c, r / c)
    }

    fn curve_radius_deriv(&self, theta: f64) -> f64 {
        match &self.curve {
            BoundaryCurve::Circle { .. } => 0.0,
            _ => {
                let h = 1e-6;
                (self.curve.radius_at(theta + h) - self.curve.radius_at(theta - h)) / (2.0 * h)
            }
        }
    }
}

impl ScalarBasis for ZernikeBasis {
    fn len(&self) -> usize {
        self.modes.len()
    }

    fn value(&self, k: usize, p: V2) -> f64 {
        let (_r, theta, _c, rho) = self.polar(p);
        let (rv, _, _) = self.radial_parts(k, rho);
        let (av, _) = self.angular_parts(k, theta);
        rv * av / self.modes[k].norm
    }

    fn gradient(&self, k: usize, p: V2) -> V2 {
        let (_r, theta, c, rho) = self.polar(p);
        let (_rv, rd, rover) = self.radial_parts(k, rho);
        let (av, ad) = self.angular_parts(k, theta);
        let (s, co) = theta.sin_cos();
        let e_r = V2::new(co, s);
        let e_t = V2::new(-s, co);
        let dc = self.curve_radius_deriv(theta);
        // f = R(r/c(theta)) A(theta):
        //   df/dr           = R' A / c
        //   (1/r) df/dtheta = -R' A c'/c^2 + (R/rho) A'/c
        let g_r = rd * av / c;
        let angular = if ad == 0.0 { 0.0 } else { rover * ad / c };
        let g_t = -rd * av * dc / (c * c) + angular;
        (e_r * g_r + e_t * g_t) / self.modes[k].norm
    }

    fn constant_coefficients(&self) -> Option<DVector<f64>> {
        // mode 0 is the constant 1/norm
        let mut c = DVector::zeros(self.modes.len());
        c[0] = self.modes[0].norm;
        Some(c)
    }
}
