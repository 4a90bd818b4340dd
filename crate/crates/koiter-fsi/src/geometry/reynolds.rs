//! Transport-theorem residual for moving-domain quadrature.

use super::chart::DomainChart;
use super::curve::V2;
use super::domain::{BoundaryField, ReferenceDomain};
use super::GeometryError;

/// Residual of the transport identity for a scalar `g(t, x)` on the moving
/// domain: the time derivative of the domain integral minus the integral of
/// `dg/dt` minus the boundary flux of the domain motion.
///
/// `eta_at` supplies the displacement and boundary velocity at a given time.
/// The time derivative of the domain integral and `dg/dt` are evaluated by
/// central differences with step `dt_fd`.
pub fn reynolds_residual<F, E>(
    g: F,
    domain: &ReferenceDomain,
    eta_at: E,
    t: f64,
    dt_fd: f64,
) -> Result<f64, GeometryError>
where
    F: Fn(f64, V2) -> f64,
    E: Fn(f64) -> (Box<dyn BoundaryField>, Box<dyn BoundaryField>),
{
    let integral_at = |time: f64| -> Result<f64, GeometryError> {
        let (eta, eta_dot) = eta_at(time);
        let chart = DomainChart::build(domain, eta.as_ref(), Some(eta_dot.as_ref()))?;
        let nodes = chart.interior_nodes();
        Ok(domain
            .interior
            .iter()
            .zip(&nodes)
            .map(|(n, cn)| n.weight * cn.jdet * g(time, cn.moved))
            .sum())
    };

    let d_dt = (integral_at(t + dt_fd)? - integral_at(t - dt_fd)?) / (2.0 * dt_fd);

    let (eta, eta_dot) = eta_at(t);
    let chart = DomainChart::build(domain, eta.as_ref(), Some(eta_dot.as_ref()))?;
    let nodes = chart.interior_nodes();
    let bulk: f64 = domain
        .interior
        .iter()
        .zip(&nodes)
        .map(|(n, cn)| {
            let dg_dt = (g(t + dt_fd, cn.moved) - g(t - dt_fd, cn.moved)) / (2.0 * dt_fd);
            n.weight * cn.jdet * dg_dt
        })
        .sum();

    let boundary: f64 = domain
        .boundary
        .iter()
        .zip(chart.boundary_nodes())
        .map(|(n, bn)| {
            let flux = bn.eta_dot * n.normal.dot(&bn.nu_eta);
            bn.weight * flux * g(t, bn.moved)
        })
        .sum();

    Ok((d_dt - bulk - boundary).abs())
}
