//! Whole-plane extension of fields defined on the displaced domain.

use super::chart::DomainChart;
use super::curve::V2;

/// Extends a scalar field given on the displaced domain to the whole plane.
///
/// On the displaced domain the operator is the identity. Outside, the field
/// is pulled back to the reference domain through the chart, reflected
/// evenly across the reference boundary, pushed forward through the extended
/// chart and damped to zero beyond half the tube width.
pub fn extend_field<'c>(
    field: impl Fn(V2) -> f64 + 'c,
    chart: &'c DomainChart<'c>,
) -> impl Fn(V2) -> f64 + 'c {
    move |y: V2| {
        let domain = chart.domain;
        let (theta, sy) = domain.curve.decompose(y);
        let eta = chart.eta.value(theta);
        if sy <= -domain.tube_width || sy < eta {
            // inside the displaced domain: identity
            return field(y);
        }
        // outer collar: reflect in the reference signed distance
        let s_ref = sy - eta; // reference coordinate of y under the extended chart
        let half = 0.5 * domain.tube_width;
        if s_ref >= half {
            return 0.0;
        }
        // damping ramps from 1 near the boundary to 0 at s = L/2
        let cut = if s_ref <= 0.25 * half {
            1.0
        } else {
            let v = 1.0 - (s_ref - 0.25 * half) / (0.5 * half);
            let v = v.clamp(0.0, 1.0);
            v * v * v * (10.0 + v * (-15.0 + 6.0 * v))
        };
        if cut == 0.0 {
            return 0.0;
        }
        let fr = domain.curve.frame(theta);
        let x_reflected = fr.point - s_ref * fr.normal;
        // pull back through the chart: the mirrored reference point is pushed
        // into the displaced domain before sampling
        let inside = chart.psi(x_reflected);
        field(inside) * cut
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{QuadSpec, ReferenceDomain, Uniform};
    use approx::assert_relative_eq;

    #[test]
    fn identity_on_displaced_domain() {
        let d = ReferenceDomain::unit_disk(QuadSpec::default());
        let eta = crate::geometry::TrigSeries {
            c0: 0.04,
            cos_coef: vec![0.0, -0.04],
            sin_coef: vec![],
        };
        let chart = DomainChart::build(&d, &eta, None).unwrap();
        let f = |p: V2| (1.3 * p.x - 0.4 * p.y).sin();
        let ext = extend_field(f, &chart);
        for n in &d.interior {
            let y = chart.psi(n.pos);
            assert_eq!(ext(y), f(y));
        }
    }

    #[test]
    fn constant_field_extends_through_the_collar() {
        let d = ReferenceDomain::unit_disk_full_shell(QuadSpec::default());
        let eta = Uniform(0.05);
        let chart = DomainChart::build(&d, &eta, None).unwrap();
        let ext = extend_field(|_| 1.0, &chart);
        // on the displaced domain and just outside it the extension is 1
        assert_relative_eq!(ext(V2::new(0.5, 0.0)), 1.0, epsilon = 1e-14);
        assert_relative_eq!(ext(V2::new(1.052, 0.0)), 1.0, epsilon = 1e-12);
        // far away it decays to zero
        assert_eq!(ext(V2::new(1.4, 0.0)), 0.0);
    }

    #[test]
    fn extension_controls_the_gradient() {
        let d = ReferenceDomain::unit_disk(QuadSpec::default());
        let eta = crate::geometry::TrigSeries {
            c0: 0.03,
            cos_coef: vec![0.02],
            sin_coef: vec![0.01],
        };
        let chart = DomainChart::build(&d, &eta, None).unwrap();
        let f = |p: V2| (2.0 * p.x).sin() * (1.5 * p.y).cos();
        let ext = extend_field(f, &chart);
        let h = 1e-5;
        let grad2 = |g: &dyn Fn(V2) -> f64, p: V2| {
            let dx = (g(V2::new(p.x + h, p.y)) - g(V2::new(p.x - h, p.y))) / (2.0 * h);
            let dy = (g(V2::new(p.x, p.y + h)) - g(V2::new(p.x, p.y - h))) / (2.0 * h);
            dx * dx + dy * dy
        };
        // seminorm of the input over the displaced domain
        let mut inner = 0.0;
        let nodes = chart.interior_nodes();
        for (n, cn) in d.interior.iter().zip(&nodes) {
            inner += n.weight * cn.jdet * grad2(&|p| f(p), cn.moved);
        }
        // seminorm of the extension over a covering box
        let mut outer = 0.0;
        let m = 60;
        let cell = (2.8 / m as f64) * (2.8 / m as f64);
        for i in 0..m {
            for j in 0..m {
                let p = V2::new(-1.4 + 2.8 * (i as f64 + 0.5) / m as f64,
                                -1.4 + 2.8 * (j as f64 + 0.5) / m as f64);
                outer += cell * grad2(&ext, p);
            }
        }
        let ratio = outer / inner;
        assert!(ratio.is_finite() && ratio < 50.0, "seminorm ratio {ratio}");
        println!("extension seminorm ratio C = {ratio:.3}");
    }
}
