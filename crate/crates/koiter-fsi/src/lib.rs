//! Compressible barotropic flow coupled to a linear Koiter shell on a
//! moving boundary.
//!
//! The library solves, on a two dimensional reference domain with a one
//! dimensional elastic arc, the damped continuity equation and the coupled
//! momentum/shell system with a four layer approximation: boundary and
//! convective mollification (`kappa`), artificial viscosity (`epsilon`),
//! artificial pressure (`delta`, exponent `beta`) and a finite Galerkin
//! dimension. A damped fixed-point iteration couples the decoupled solves
//! into a solution of the full system, and every analytical estimate the
//! construction rests on is exposed as a numerically checkable probe.
//!
//! Module map:
//!
//! * [`geometry`] — tubular charts around the reference boundary, the
//!   displacement map, traces, extensions and transport-theorem quadrature.
//! * [`shell`] — clamped beam eigenbasis, elastic gradient and energy.
//! * [`mollifier`] — one-sided-in-time smoothing of boundary displacements
//!   and space-time smoothing of velocity fields.
//! * [`transport`] — Galerkin solver for the damped continuity equation on
//!   a prescribed moving domain.
//! * [`momentum`] — the coupled fluid/shell Galerkin system and its
//!   implicit-midpoint integration with energy accounting.
//! * [`coupling`] — the decoupled solve, the damped fixed-point iteration,
//!   self-intersection guard and continuation restart.
//! * [`diagnostics`] — energy budget, boundary concentration probe,
//!   effective viscous flux and truncation functionals.
//! * [`config`]/[`cli`] — scenario files, the batch runner and the
//!   invariant suite.

pub mod basis;
pub mod checks;
pub mod cli;
pub mod config;
pub mod coupling;
pub mod diagnostics;
pub mod geometry;
pub mod ledger;
pub mod mollifier;
pub mod momentum;
pub mod oracle;
pub mod output;
pub mod quadrature;
pub mod shell;
pub mod transport;

pub use geometry::{BoundaryCurve, DomainChart, GeometryError, ReferenceDomain};
pub use ledger::EnergyLedger;
pub use shell::{ShellBasis, ShellParams};
