//! The displacement chart `psi` and its derivatives.

use nalgebra::Matrix2;

use super::curve::V2;
use super::domain::{BoundaryField, ReferenceDomain};
use super::GeometryError;

type M2 = Matrix2<f64>;

/// Radial cutoff `phi(s)`: zero for `s <= -3L/4`, one for `s >= -L/4`,
/// a `C^3` monotone ramp in between.
///
/// The ramp derivative is a plateau with short quintic ease-in/out so that
/// `max phi' = 1/((1 - ease) * L/2)`; with `ease = 0.08` the chart stays
/// injective up to displacement sup-norms of `0.45 L`.
#[derive(Debug, Clone, Copy)]
pub struct CutoffProfile {
    pub tube_width: f64,
    pub ease: f64,
}

impl CutoffProfile {
    pub fn new(tube_width: f64) -> Self {
        CutoffProfile {
            tube_width,
            ease: 0.08,
        }
    }

    fn ramp_bounds(&self) -> (f64, f64) {
        (-0.75 * self.tube_width, -0.25 * self.tube_width)
    }

    /// Signed-distance values where the profile changes its polynomial
    /// piece. Quadrature cells aligned with these keep moving-domain
    /// integrals spectrally accurate.
    pub fn feature_breaks(&self) -> [f64; 4] {
        let (lo, hi) = self.ramp_bounds();
        let w = (hi - lo) * self.ease;
        [lo, lo + w, hi - w, hi]
    }

    /// `phi(s)`.
    pub fn value(&self, s: f64) -> f64 {
        let (lo, hi) = self.ramp_bounds();
        if s <= lo {
            return 0.0;
        }
        if s >= hi {
            return 1.0;
        }
        let u = (s - lo) / (hi - lo);
        plateau_integral(u, self.ease) / (1.0 - self.ease)
    }

    /// `phi'(s)`.
    pub fn deriv(&self, s: f64) -> f64 {
        let (lo, hi) = self.ramp_bounds();
        if s <= lo || s >= hi {
            return 0.0;
        }
        let u = (s - lo) / (hi - lo);
        plateau(u, self.ease) / ((1.0 - self.ease) * (hi - lo))
    }
}

/// Quintic smoothstep (vanishing first and second derivatives at 0 and 1).
fn smoothstep(v: f64) -> f64 {
    let v = v.clamp(0.0, 1.0);
    v * v * v * (10.0 + v * (-15.0 + 6.0 * v))
}

/// Unit plateau profile: eases 0 -> 1 over `[0, f]`, flat 1, eases back to 0
/// over `[1-f, 1]`.
fn plateau(u: f64, f: f64) -> f64 {
    if u < f {
        smoothstep(u / f)
    } else if u > 1.0 - f {
        smoothstep((1.0 - u) / f)
    } else {
        1.0
    }
}

/// Integral of [`plateau`] from 0 to `u`; total mass is `1 - f`.
fn plateau_integral(u: f64, f: f64) -> f64 {
    // antiderivative of the quintic smoothstep
    fn ss_int(v: f64) -> f64 {
        let v = v.clamp(0.0, 1.0);
        v * v * v * v * (2.5 + v * (-3.0 + v))
    }
    let u = u.clamp(0.0, 1.0);
    if u <= f {
        f * ss_int(u / f)
    } else if u <= 1.0 - f {
        f * 0.5 + (u - f)
    } else {
        1.0 - 1.5 * f + f * (0.5 - ss_int((1.0 - u) / f))
    }
}

/// Per-node chart data cached for assembly at a fixed time.
#[derive(Debug, Clone, Copy)]
pub struct ChartNode {
    /// Image of the reference node under `psi`.
    pub moved: V2,
    /// `det(D psi)` at the node.
    pub jdet: f64,
    /// `(D psi)^{-T}` in Cartesian coordinates; maps reference gradients to
    /// gradients at the moved point.
    pub dpsi_inv_t: M2,
    /// `d(psi)/dt` at the node (zero when no boundary velocity is set).
    pub chart_vel: V2,
}

/// Boundary-node chart data.
#[derive(Debug, Clone, Copy)]
pub struct MovedBoundaryNode {
    pub moved: V2,
    /// Line weight on the displaced boundary.
    pub weight: f64,
    /// Outward normal of the displaced boundary.
    pub nu_eta: V2,
    pub eta: f64,
    pub eta_dot: f64,
}

/// Chart from the reference domain onto the domain displaced by `eta` along
/// the reference normal.
pub struct DomainChart<'a> {
    pub domain: &'a ReferenceDomain,
    pub eta: &'a dyn BoundaryField,
    /// Boundary velocity, used for the chart time derivative.
    pub eta_dot: Option<&'a dyn BoundaryField>,
    pub cutoff: CutoffProfile,
}

impl<'a> DomainChart<'a> {
    pub fn build(
        domain: &'a ReferenceDomain,
        eta: &'a dyn BoundaryField,
        eta_dot: Option<&'a dyn BoundaryField>,
    ) -> Result<Self, GeometryError> {
        let sup = eta.sup_norm();
        let half = 0.5 * domain.tube_width;
        if sup >= half {
            return Err(GeometryError::DisplacementTooLarge {
                sup,
                half_tube: half,
            });
        }
        Ok(DomainChart {
            domain,
            eta,
            eta_dot,
            cutoff: CutoffProfile::new(domain.tube_width),
        })
    }

    /// Forward map. Identity outside the tube.
    pub fn psi(&self, x: V2) -> V2 {
        let (theta, s) = self.domain.curve.decompose(x);
        if s <= -self.domain.tube_width {
            return x;
        }
        let fr = self.domain.curve.frame(theta);
        let shift = if s >= 0.0 {
            // extended chart outside the reference domain
            s + self.eta.value(theta)
        } else {
            s + self.eta.value(theta) * self.cutoff.value(s)
        };
        fr.point + shift * fr.normal
    }

    /// Inverse map, by Newton iteration in the signed-distance coordinate.
    pub fn psi_inv(&self, y: V2) -> Result<V2, GeometryError> {
        let (theta, sy) = self.domain.curve.decompose(y);
        if sy <= -self.domain.tube_width {
            return Ok(y);
        }
        let eta = self.eta.value(theta);
        let fr = self.domain.curve.frame(theta);
        if sy - eta >= 0.0 {
            // outside the reference domain the shift is linear
            return Ok(fr.point + (sy - eta) * fr.normal);
        }
        let mut s = (sy - eta).max(-self.domain.tube_width + 1e-12);
        for _ in 0..50 {
            let f = s + eta * self.cutoff.value(s) - sy;
            let d = 1.0 + eta * self.cutoff.deriv(s);
            let step = f / d;
            s -= step;
            if step.abs() < 1e-12 {
                return Ok(fr.point + s * fr.normal);
            }
        }
        Err(GeometryError::InverseDiverged { x: y.x, y: y.y })
    }

    fn factors(&self, theta: f64, s: f64, kappa: f64, speed: f64) -> (f64, f64, f64) {
        let (phi, dphi) = if s >= 0.0 {
            (1.0, 0.0)
        } else {
            (self.cutoff.value(s), self.cutoff.deriv(s))
        };
        let eta = self.eta.value(theta);
        let m = s + eta * phi;
        let tt = (1.0 + m * kappa) / (1.0 + s * kappa);
        let nn = 1.0 + eta * dphi;
        // d(eta)/d(arclength) * phi
        let nt = self.eta.deriv_theta(theta) / speed * phi / (1.0 + s * kappa);
        (tt, nn, nt)
    }

    /// Jacobian determinant of `psi` at a reference point.
    pub fn jac_det(&self, x: V2) -> f64 {
        let (theta, s) = self.domain.curve.decompose(x);
        if s <= -self.domain.tube_width {
            return 1.0;
        }
        let fr = self.domain.curve.frame(theta);
        let (tt, nn, _) = self.factors(theta, s, fr.kappa, fr.speed);
        tt * nn
    }

    /// Full Jacobian matrix of `psi` in Cartesian coordinates.
    pub fn dpsi(&self, x: V2) -> M2 {
        let (theta, s) = self.domain.curve.decompose(x);
        if s <= -self.domain.tube_width {
            return M2::identity();
        }
        let fr = self.domain.curve.frame(theta);
        let (tt, nn, nt) = self.factors(theta, s, fr.kappa, fr.speed);
        let frame = M2::from_columns(&[fr.tangent, fr.normal]);
        let j = M2::new(tt, 0.0, nt, nn);
        frame * j * frame.transpose()
    }

    /// Minimum Jacobian determinant over the interior quadrature nodes.
    pub fn min_jac_det(&self) -> f64 {
        self.domain
            .interior
            .iter()
            .map(|n| match &n.tube {
                None => 1.0,
                Some(tc) => {
                    let (tt, nn, _) = self.factors(tc.theta, tc.s, tc.kappa, tc.speed);
                    tt * nn
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Chart data at every interior quadrature node.
    pub fn interior_nodes(&self) -> Vec<ChartNode> {
        self.domain
            .interior
            .iter()
            .map(|n| match &n.tube {
                None => ChartNode {
                    moved: n.pos,
                    jdet: 1.0,
                    dpsi_inv_t: M2::identity(),
                    chart_vel: V2::new(0.0, 0.0),
                },
                Some(tc) => {
                    let (tt, nn, nt) = self.factors(tc.theta, tc.s, tc.kappa, tc.speed);
                    let phi = if tc.s >= 0.0 {
                        1.0
                    } else {
                        self.cutoff.value(tc.s)
                    };
                    let eta = self.eta.value(tc.theta);
                    let m = tc.s + eta * phi;
                    let moved = n.pos + (m - tc.s) * tc.normal;
                    let frame = M2::from_columns(&[tc.tangent, tc.normal]);
                    // inverse-transpose of [[tt, 0], [nt, nn]]
                    let inv_t = M2::new(1.0 / tt, -nt / (tt * nn), 0.0, 1.0 / nn);
                    let dpsi_inv_t = frame * inv_t * frame.transpose();
                    let chart_vel = match self.eta_dot {
                        None => V2::new(0.0, 0.0),
                        Some(ed) => ed.value(tc.theta) * phi * tc.normal,
                    };
                    ChartNode {
                        moved,
                        jdet: tt * nn,
                        dpsi_inv_t,
                        chart_vel,
                    }
                }
            })
            .collect()
    }

    /// Chart data at every boundary quadrature node.
    pub fn boundary_nodes(&self) -> Vec<MovedBoundaryNode> {
        self.domain
            .boundary
            .iter()
            .map(|n| {
                let eta = self.eta.value(n.theta);
                let deta = self.eta.deriv_theta(n.theta);
                let moved = n.pos + eta * n.normal;
                // velocity of the displaced boundary curve in the parameter
                let tang_speed = n.speed * (1.0 + eta * n.kappa);
                let c_prime_t = tang_speed;
                let c_prime_n = deta;
                let stretch = (c_prime_t * c_prime_t + c_prime_n * c_prime_n).sqrt();
                let tangent_eta = (c_prime_t * n.tangent + c_prime_n * n.normal) / stretch;
                let nu_eta = V2::new(tangent_eta.y, -tangent_eta.x);
                let eta_dot = self.eta_dot.map(|ed| ed.value(n.theta)).unwrap_or(0.0);
                MovedBoundaryNode {
                    moved,
                    weight: n.weight / n.speed * stretch,
                    nu_eta,
                    eta,
                    eta_dot,
                }
            })
            .collect()
    }

    /// Trace of a field along the displaced boundary, sampled at the
    /// reference boundary nodes: `v ∘ psi` restricted to the boundary.
    pub fn trace<T>(&self, field: impl Fn(V2) -> T) -> Vec<T> {
        self.domain
            .boundary
            .iter()
            .map(|n| field(n.pos + self.eta.value(n.theta) * n.normal))
            .collect()
    }
}
