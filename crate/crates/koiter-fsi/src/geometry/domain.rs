//! Reference domain: curve, shell arc, tube width and quadrature tables.

use super::curve::{BoundaryCurve, V2};
use super::GeometryError;
use crate::quadrature::composite_gauss;

/// Closest-point data of an interior node lying inside the tube.
#[derive(Debug, Clone, Copy)]
pub struct TubeCoords {
    /// Curve parameter of the closest boundary point.
    pub theta: f64,
    /// Signed distance, negative inside the domain.
    pub s: f64,
    pub tangent: V2,
    pub normal: V2,
    pub kappa: f64,
    pub speed: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct InteriorNode {
    pub pos: V2,
    /// Area weight on the reference domain.
    pub weight: f64,
    /// Tube decomposition when `dist(pos, boundary) < L`.
    pub tube: Option<TubeCoords>,
}

#[derive(Debug, Clone, Copy)]
pub struct BoundaryNode {
    pub theta: f64,
    /// Line weight on the reference boundary (includes the parameter speed).
    pub weight: f64,
    pub pos: V2,
    pub tangent: V2,
    pub normal: V2,
    pub kappa: f64,
    pub speed: f64,
    /// Whether this node lies on the elastic arc `M` (else on the rigid part).
    pub on_shell: bool,
    /// Arclength from the start of `M`, meaningful for shell nodes.
    pub arc: f64,
}

/// Quadrature resolution knobs.
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    pub radial_cells: usize,
    pub angular_cells: usize,
    pub boundary_cells: usize,
    pub order: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            radial_cells: 6,
            angular_cells: 16,
            boundary_cells: 32,
            order: 6,
        }
    }
}

/// Scalar field on the reference boundary, parameterized by the curve angle.
pub trait BoundaryField {
    fn value(&self, theta: f64) -> f64;
    fn deriv_theta(&self, theta: f64) -> f64;
    /// Sup-norm over a parameter sample, used by chart validity checks.
    fn sup_norm(&self) -> f64 {
        (0..512)
            .map(|i| {
                self.value(std::f64::consts::TAU * i as f64 / 512.0)
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Constant boundary displacement (full-boundary test fixture).
#[derive(Debug, Clone, Copy)]
pub struct Uniform(pub f64);

impl BoundaryField for Uniform {
    fn value(&self, _theta: f64) -> f64 {
        self.0
    }
    fn deriv_theta(&self, _theta: f64) -> f64 {
        0.0
    }
    fn sup_norm(&self) -> f64 {
        self.0.abs()
    }
}

/// Real trigonometric series `c0 + sum a_n cos n t + b_n sin n t`.
#[derive(Debug, Clone, Default)]
pub struct TrigSeries {
    pub c0: f64,
    pub cos_coef: Vec<f64>,
    pub sin_coef: Vec<f64>,
}

impl TrigSeries {
    /// Least-squares fit on uniformly spaced samples over `[0, 2*pi)`.
    pub fn fit(samples: &[f64], n_harmonics: usize) -> Self {
        let n = samples.len();
        let mut c0 = 0.0;
        for &v in samples {
            c0 += v;
        }
        c0 /= n as f64;
        let mut cos_coef = vec![0.0; n_harmonics];
        let mut sin_coef = vec![0.0; n_harmonics];
        for k in 1..=n_harmonics {
            let (mut a, mut b) = (0.0, 0.0);
            for (i, &v) in samples.iter().enumerate() {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                a += v * (k as f64 * t).cos();
                b += v * (k as f64 * t).sin();
            }
            cos_coef[k - 1] = 2.0 * a / n as f64;
            sin_coef[k - 1] = 2.0 * b / n as f64;
        }
        TrigSeries {
            c0,
            cos_coef,
            sin_coef,
        }
    }
}

impl BoundaryField for TrigSeries {
    fn value(&self, theta: f64) -> f64 {
        let mut v = self.c0;
        for (n, (a, b)) in self.cos_coef.iter().zip(&self.sin_coef).enumerate() {
            let k = (n + 1) as f64;
            v += a * (k * theta).cos() + b * (k * theta).sin();
        }
        v
    }
    fn deriv_theta(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for (n, (a, b)) in self.cos_coef.iter().zip(&self.sin_coef).enumerate() {
            let k = (n + 1) as f64;
            v += k * (-a * (k * theta).sin() + b * (k * theta).cos());
        }
        v
    }
}

/// The fixed reference domain with its quadrature tables.
#[derive(Debug, Clone)]
pub struct ReferenceDomain {
    pub curve: BoundaryCurve,
    /// Parameter range of the elastic arc `M`; the complement is rigid.
    pub shell_range: (f64, f64),
    /// Tube half-width `L`.
    pub tube_width: f64,
    pub quad: QuadSpec,
    pub interior: Vec<InteriorNode>,
    pub boundary: Vec<BoundaryNode>,
    /// Arclength of `M`.
    pub shell_arclength: f64,
}

impl ReferenceDomain {
    /// Unit disk with the elastic arc on the upper half boundary.
    pub fn unit_disk(quad: QuadSpec) -> Self {
        Self::new(
            BoundaryCurve::circle(1.0),
            (0.0, std::f64::consts::PI),
            0.5,
            quad,
        )
        .expect("unit disk reference domain")
    }

    /// Fixture with the whole boundary elastic (uniform displacement tests).
    pub fn unit_disk_full_shell(quad: QuadSpec) -> Self {
        Self::new(
            BoundaryCurve::circle(1.0),
            (0.0, std::f64::consts::TAU),
            0.5,
            quad,
        )
        .expect("unit disk reference domain")
    }

    pub fn new(
        curve: BoundaryCurve,
        shell_range: (f64, f64),
        tube_width: f64,
        quad: QuadSpec,
    ) -> Result<Self, GeometryError> {
        assert!(tube_width > 0.0);
        if !curve.tube_is_injective(tube_width, 96) {
            return Err(GeometryError::RestartGeometryInvalid(format!(
                "tube map not injective at width {tube_width}"
            )));
        }
        let interior = build_interior(&curve, tube_width, &quad);
        let (boundary, shell_arclength) = build_boundary(&curve, shell_range, &quad);
        Ok(ReferenceDomain {
            curve,
            shell_range,
            tube_width,
            quad,
            interior,
            boundary,
            shell_arclength,
        })
    }

    /// Area of the reference domain by quadrature.
    pub fn area(&self) -> f64 {
        self.interior.iter().map(|n| n.weight).sum()
    }

    /// Arclength coordinate within `M` of a boundary parameter.
    pub fn shell_arc_of_theta(&self, theta: f64) -> f64 {
        arclength_from(&self.curve, self.shell_range.0, theta)
    }

    /// Inverse of [`Self::shell_arc_of_theta`], by Newton iteration.
    pub fn theta_of_shell_arc(&self, arc: f64) -> f64 {
        let mut theta = self.shell_range.0 + arc / self.curve.frame(self.shell_range.0).speed;
        for _ in 0..50 {
            let f = arclength_from(&self.curve, self.shell_range.0, theta) - arc;
            let d = self.curve.frame(theta).speed;
            let step = f / d;
            theta -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
        theta
    }

    /// Whether a boundary parameter lies on the elastic arc.
    pub fn theta_on_shell(&self, theta: f64) -> bool {
        let t = theta.rem_euclid(std::f64::consts::TAU);
        let (a, b) = self.shell_range;
        t >= a - 1e-14 && t <= b + 1e-14
    }

    /// Shell-portion boundary nodes.
    pub fn shell_nodes(&self) -> impl Iterator<Item = &BoundaryNode> {
        self.boundary.iter().filter(|n| n.on_shell)
    }
}

fn arclength_from(curve: &BoundaryCurve, theta0: f64, theta: f64) -> f64 {
    match curve {
        BoundaryCurve::Circle { radius } => radius * (theta - theta0),
        _ => {
            let (nodes, weights) = composite_gauss(theta0, theta, 24, 6);
            crate::quadrature::integrate(&nodes, &weights, |t| curve.frame(t).speed)
        }
    }
}

fn build_interior(curve: &BoundaryCurve, tube_width: f64, quad: &QuadSpec) -> Vec<InteriorNode> {
    let (tn, tw) = composite_gauss(0.0, std::f64::consts::TAU, quad.angular_cells, quad.order);
    let cutoff = super::chart::CutoffProfile::new(tube_width);
    let breaks = cutoff.feature_breaks();
    let mut nodes = Vec::new();
    for (&theta, &wt) in tn.iter().zip(&tw) {
        let r_b = curve.radius_at(theta);
        // radial partition in u = r / r_b, aligned with the cutoff joints so
        // no quadrature cell straddles a change of polynomial piece
        let mut seg = vec![0.0];
        let mut push = |s: f64, seg: &mut Vec<f64>| {
            let u = 1.0 + s / r_b;
            if u > 1e-9 && u < 1.0 - 1e-9 {
                seg.push(u);
            }
        };
        push(-tube_width, &mut seg);
        for &s in &breaks {
            push(s, &mut seg);
        }
        seg.push(1.0);
        seg.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for pair in seg.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let cells = (((hi - lo) * 2.0 * quad.radial_cells as f64).ceil() as usize).max(1);
            let (un, uw) = composite_gauss(lo, hi, cells, quad.order);
            for (&u, &wu) in un.iter().zip(&uw) {
                let r = u * r_b;
                let pos = V2::new(r * theta.cos(), r * theta.sin());
                let weight = wu * wt * u * r_b * r_b;
                let (th_c, s) = curve.decompose(pos);
                let tube = if s.abs() < tube_width {
                    let fr = curve.frame(th_c);
                    Some(TubeCoords {
                        theta: th_c,
                        s,
                        tangent: fr.tangent,
                        normal: fr.normal,
                        kappa: fr.kappa,
                        speed: fr.speed,
                    })
                } else {
                    None
                };
                nodes.push(InteriorNode { pos, weight, tube });
            }
        }
    }
    nodes
}

fn build_boundary(
    curve: &BoundaryCurve,
    shell_range: (f64, f64),
    quad: &QuadSpec,
) -> (Vec<BoundaryNode>, f64) {
    let (a, b) = shell_range;
    let full = std::f64::consts::TAU;
    let shell_fraction = (b - a) / full;
    let shell_cells = ((quad.boundary_cells as f64 * shell_fraction).round() as usize).max(2);
    let rigid_cells = if (b - a % full) < 1e-12 || (full - (b - a)) < 1e-12 {
        0
    } else {
        (quad.boundary_cells - shell_cells.min(quad.boundary_cells)).max(2)
    };

    let mut nodes = Vec::new();
    let mut push_range = |lo: f64, hi: f64, cells: usize, on_shell: bool| {
        if cells == 0 || hi - lo < 1e-14 {
            return;
        }
        let (tn, tw) = composite_gauss(lo, hi, cells, quad.order);
        for (&theta, &w) in tn.iter().zip(&tw) {
            let fr = curve.frame(theta);
            let arc = if on_shell {
                arclength_from(curve, lo, theta)
            } else {
                0.0
            };
            nodes.push(BoundaryNode {
                theta,
                weight: w * fr.speed,
                pos: fr.point,
                tangent: fr.tangent,
                normal: fr.normal,
                kappa: fr.kappa,
                speed: fr.speed,
                on_shell,
                arc,
            });
        }
    };
    push_range(a, b, shell_cells, true);
    push_range(b, a + full, rigid_cells, false);
    let shell_arclength = arclength_from(curve, a, b);
    (nodes, shell_arclength)
}

/// Closest-point decomposition of a point within the tube.
///
/// Returns the closest boundary point and the signed distance, negative
/// inside the domain.
pub fn closest_point_decomposition(
    x: V2,
    domain: &ReferenceDomain,
) -> Result<(V2, f64), GeometryError> {
    let (theta, s) = domain.curve.decompose(x);
    if s.abs() > domain.tube_width {
        return Err(GeometryError::OutOfTube {
            dist: s.abs(),
            tube: domain.tube_width,
        });
    }
    Ok((domain.curve.point(theta), s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn disk_area() {
        let d = ReferenceDomain::unit_disk(QuadSpec::default());
        assert_relative_eq!(d.area(), std::f64::consts::PI, epsilon = 1e-10);
    }

    #[test]
    fn boundary_length_and_normals() {
        let d = ReferenceDomain::unit_disk(QuadSpec::default());
        let len: f64 = d.boundary.iter().map(|n| n.weight).sum();
        assert_relative_eq!(len, std::f64::consts::TAU, epsilon = 1e-10);
        for n in &d.boundary {
            assert!((n.normal.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn closest_point_radial_cases() {
        let d = ReferenceDomain::unit_disk(QuadSpec::default());
        let (q, s) = closest_point_decomposition(V2::new(0.5, 0.0), &d).unwrap();
        assert_relative_eq!(q.x, 1.0, epsilon = 1e-14);
        assert_relative_eq!(q.y, 0.0, epsilon = 1e-14);
        assert_relative_eq!(s, -0.5, epsilon = 1e-14);

        let (q, s) = closest_point_decomposition(V2::new(1.2, 0.0), &d).unwrap();
        assert_relative_eq!(q.x, 1.0, epsilon = 1e-14);
        assert_relative_eq!(s, 0.2, epsilon = 1e-14);

        // boundary point is fixed with s = 0
        let p = V2::new((0.3f64).cos(), (0.3f64).sin());
        let (q, s) = closest_point_decomposition(p, &d).unwrap();
        assert_relative_eq!((q - p).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(s, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn out_of_tube_is_rejected() {
        let d = ReferenceDomain::unit_disk(QuadSpec::default());
        assert!(matches!(
            closest_point_decomposition(V2::new(0.2, 0.0), &d),
            Err(GeometryError::OutOfTube { .. })
        ));
    }

    #[test]
    fn shell_arc_roundtrip() {
        let d = ReferenceDomain::unit_disk(QuadSpec::default());
        assert_relative_eq!(d.shell_arclength, std::f64::consts::PI, epsilon = 1e-12);
        let arc = 1.1;
        let theta = d.theta_of_shell_arc(arc);
        assert_relative_eq!(d.shell_arc_of_theta(theta), arc, epsilon = 1e-12);
    }
}
