//! Tubular-neighborhood geometry around the reference boundary.
//!
//! The reference domain is a star-shaped planar region whose boundary is a
//! closed curve with outward normal `nu`. Points within tube distance `L` of
//! the boundary decompose uniquely as `x = q + s nu(q)` with `q` the closest
//! boundary point and `s` the signed distance (negative inside). A boundary
//! displacement `eta` along `nu` induces the chart `psi` mapping the
//! reference domain onto the displaced domain; all moving-domain integrals
//! pull back through this chart.

mod chart;
mod curve;
mod domain;
mod extend;
mod reynolds;

pub use chart::{ChartNode, CutoffProfile, DomainChart, MovedBoundaryNode};
pub use curve::{BoundaryCurve, CurveFrame};
pub use domain::{
    closest_point_decomposition, BoundaryField, BoundaryNode, InteriorNode, QuadSpec,
    ReferenceDomain, TrigSeries, TubeCoords, Uniform,
};
pub use extend::extend_field;
pub use reynolds::reynolds_residual;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    /// The point lies outside the tubular neighborhood of the boundary.
    #[error("point at distance {dist:.6} is outside the tube of width {tube:.6}")]
    OutOfTube { dist: f64, tube: f64 },
    /// The displacement exceeds half the tube width.
    #[error("displacement sup-norm {sup:.6} exceeds L/2 = {half_tube:.6}")]
    DisplacementTooLarge { sup: f64, half_tube: f64 },
    /// Newton iteration for the chart inverse failed to converge.
    #[error("chart inverse did not converge at ({x:.6}, {y:.6})")]
    InverseDiverged { x: f64, y: f64 },
    /// The candidate reference curve failed the injectivity sampling check.
    #[error("restart geometry invalid: {0}")]
    RestartGeometryInvalid(String),
}
