//! Closed reference curves: circles and star-shaped trigonometric curves.

use nalgebra::Vector2;

pub type V2 = Vector2<f64>;

/// Frame data of the curve at a parameter value.
#[derive(Debug, Clone, Copy)]
pub struct CurveFrame {
    /// Point on the curve.
    pub point: V2,
    /// Unit tangent (counterclockwise).
    pub tangent: V2,
    /// Outward unit normal.
    pub normal: V2,
    /// Curvature with the convention `d(nu)/d(arclength) = kappa * tangent`.
    pub kappa: f64,
    /// Parameter speed `|dq/dtheta|`.
    pub speed: f64,
}

/// A closed curve bounding a star-shaped region, parameterized by the polar
/// angle `theta` in `[0, 2*pi)`.
#[derive(Debug, Clone)]
pub enum BoundaryCurve {
    Circle {
        radius: f64,
    },
    /// `r(theta) = c0 + sum_n (a_n cos n theta + b_n sin n theta)`.
    Polar {
        c0: f64,
        cos_coef: Vec<f64>,
        sin_coef: Vec<f64>,
    },
}

impl BoundaryCurve {
    pub fn circle(radius: f64) -> Self {
        BoundaryCurve::Circle { radius }
    }

    /// Polar radius at the given angle.
    pub fn radius_at(&self, theta: f64) -> f64 {
        match self {
            BoundaryCurve::Circle { radius } => *radius,
            BoundaryCurve::Polar {
                c0,
                cos_coef,
                sin_coef,
            } => {
                let mut r = *c0;
                for (n, (a, b)) in cos_coef.iter().zip(sin_coef).enumerate() {
                    let k = (n + 1) as f64;
                    r += a * (k * theta).cos() + b * (k * theta).sin();
                }
                r
            }
        }
    }

    fn radius_derivs(&self, theta: f64) -> (f64, f64, f64) {
        match self {
            BoundaryCurve::Circle { radius } => (*radius, 0.0, 0.0),
            BoundaryCurve::Polar {
                c0,
                cos_coef,
                sin_coef,
            } => {
                let (mut r, mut dr, mut ddr) = (*c0, 0.0, 0.0);
                for (n, (a, b)) in cos_coef.iter().zip(sin_coef).enumerate() {
                    let k = (n + 1) as f64;
                    let (s, c) = (k * theta).sin_cos();
                    r += a * c + b * s;
                    dr += k * (-a * s + b * c);
                    ddr += k * k * (-a * c - b * s);
                }
                (r, dr, ddr)
            }
        }
    }

    /// Point on the curve.
    pub fn point(&self, theta: f64) -> V2 {
        let r = self.radius_at(theta);
        V2::new(r * theta.cos(), r * theta.sin())
    }

    /// Full frame at `theta`.
    pub fn frame(&self, theta: f64) -> CurveFrame {
        let (r, dr, ddr) = self.radius_derivs(theta);
        let (s, c) = theta.sin_cos();
        let e_r = V2::new(c, s);
        let e_t = V2::new(-s, c);
        let point = r * e_r;
        let vel = dr * e_r + r * e_t;
        let speed = vel.norm();
        let tangent = vel / speed;
        let normal = V2::new(tangent.y, -tangent.x);
        // curvature of a polar curve, positive for a convex counterclockwise
        // boundary; matches d(nu)/d(arclength) = kappa * tangent
        let kappa = (r * r + 2.0 * dr * dr - r * ddr) / speed.powi(3);
        CurveFrame {
            point,
            tangent,
            normal,
            kappa,
            speed,
        }
    }

    /// Closest curve parameter to `x`. Closed-form for circles, Newton on the
    /// stationarity condition otherwise.
    pub fn closest_parameter(&self, x: V2) -> f64 {
        let theta0 = x.y.atan2(x.x).rem_euclid(std::f64::consts::TAU);
        match self {
            BoundaryCurve::Circle { .. } => theta0,
            BoundaryCurve::Polar { .. } => {
                let mut theta = theta0;
                for _ in 0..50 {
                    let (r, dr, ddr) = self.radius_derivs(theta);
                    let (s, c) = theta.sin_cos();
                    let e_r = V2::new(c, s);
                    let e_t = V2::new(-s, c);
                    let q = r * e_r;
                    let v = dr * e_r + r * e_t;
                    let acc = (ddr - r) * e_r + 2.0 * dr * e_t;
                    let d = x - q;
                    let f = d.dot(&v);
                    let fp = -v.dot(&v) + d.dot(&acc);
                    if fp.abs() < 1e-300 {
                        break;
                    }
                    let step = f / fp;
                    theta -= step;
                    if step.abs() < 1e-14 {
                        break;
                    }
                }
                theta.rem_euclid(std::f64::consts::TAU)
            }
        }
    }

    /// Signed distance decomposition `(theta, s)` with `x = q(theta) + s nu`.
    /// `s` is negative inside the domain.
    pub fn decompose(&self, x: V2) -> (f64, f64) {
        match self {
            BoundaryCurve::Circle { radius } => {
                let theta = x.y.atan2(x.x).rem_euclid(std::f64::consts::TAU);
                (theta, x.norm() - radius)
            }
            _ => {
                let theta = self.closest_parameter(x);
                let fr = self.frame(theta);
                let s = (x - fr.point).dot(&fr.normal);
                (theta, s)
            }
        }
    }

    /// Total arclength, by quadrature for non-circles.
    pub fn total_arclength(&self) -> f64 {
        match self {
            BoundaryCurve::Circle { radius } => std::f64::consts::TAU * radius,
            _ => {
                let (nodes, weights) =
                    crate::quadrature::composite_gauss(0.0, std::f64::consts::TAU, 128, 6);
                crate::quadrature::integrate(&nodes, &weights, |t| self.frame(t).speed)
            }
        }
    }

    /// Pairwise-distance sampling check that `(q, s) -> q + s nu(q)` is
    /// injective on the tube of half-width `tube`.
    pub fn tube_is_injective(&self, tube: f64, samples: usize) -> bool {
        // the map degenerates where 1 + s*kappa <= 0; sample the curvature
        let mut ok = true;
        for i in 0..samples {
            let theta = std::f64::consts::TAU * i as f64 / samples as f64;
            let fr = self.frame(theta);
            if 1.0 - tube * fr.kappa.abs() <= 1e-9 {
                ok = false;
            }
        }
        if !ok {
            return false;
        }
        // pairwise sampling of mapped points on a (theta, s) grid
        let nt = samples;
        let ns = 7;
        let mut pts: Vec<(V2, f64, f64)> = Vec::with_capacity(nt * ns);
        for i in 0..nt {
            let theta = std::f64::consts::TAU * i as f64 / nt as f64;
            let fr = self.frame(theta);
            for j in 0..ns {
                let s = -tube + 2.0 * tube * (j as f64 + 0.5) / ns as f64;
                pts.push((fr.point + s * fr.normal, theta, s));
            }
        }
        for (i, a) in pts.iter().enumerate() {
            for b in pts.iter().skip(i + 1) {
                let d2 = (a.0 - b.0).norm_squared();
                // distinct tube coordinates must give distinct points
                let dth = (a.1 - b.1).abs();
                let dth = dth.min(std::f64::consts::TAU - dth);
                let coord2 = (dth * 0.2).powi(2) + (a.2 - b.2).powi(2);
                if d2 < 1e-6 * coord2 {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circle_frame() {
        let c = BoundaryCurve::circle(2.0);
        let fr = c.frame(0.3);
        assert_relative_eq!(fr.normal.dot(&fr.tangent), 0.0, epsilon = 1e-15);
        assert_relative_eq!(fr.normal.norm(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(fr.kappa, 0.5, epsilon = 1e-14);
        assert_relative_eq!(fr.speed, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn polar_closest_point_matches_radial_for_circle_series() {
        // a "polar" curve with no harmonics is a circle
        let c = BoundaryCurve::Polar {
            c0: 1.0,
            cos_coef: vec![],
            sin_coef: vec![],
        };
        let x = V2::new(0.4, 0.5);
        let (theta, s) = c.decompose(x);
        assert_relative_eq!(theta, 0.5f64.atan2(0.4), epsilon = 1e-12);
        assert_relative_eq!(s, x.norm() - 1.0, epsilon = 1e-12);
    }

    #[test]
    fn wavy_curve_decomposition_is_consistent() {
        let c = BoundaryCurve::Polar {
            c0: 1.0,
            cos_coef: vec![0.0, 0.05],
            sin_coef: vec![0.02, 0.0],
        };
        let x = V2::new(0.7, 0.35);
        let (theta, s) = c.decompose(x);
        let fr = c.frame(theta);
        let rebuilt = fr.point + s * fr.normal;
        assert_relative_eq!((rebuilt - x).norm(), 0.0, epsilon = 1e-10);
        // stationarity: x - q orthogonal to the tangent
        assert!(((x - fr.point).dot(&fr.tangent)).abs() < 1e-10);
    }

    #[test]
    fn unit_circle_tube_injectivity() {
        let c = BoundaryCurve::circle(1.0);
        assert!(c.tube_is_injective(0.5, 64));
        assert!(!c.tube_is_injective(1.01, 64));
    }
}
