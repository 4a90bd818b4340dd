//! Galerkin bases on the reference domain.
//!
//! Scalar bases discretize the density; the coupled vector basis for the
//! momentum system interleaves interior zero-trace fields with lifted shell
//! modes whose boundary trace is exactly the shell mode times the reference
//! normal.

mod cosine;
mod vector;
mod zernike;

pub use cosine::CosineBasis;
pub use vector::{CoupledBasis, LiftError, VecMode};
pub use zernike::ZernikeBasis;

use nalgebra::{DVector, Vector2};

pub type V2 = Vector2<f64>;

/// Smooth scalar basis on a planar reference domain.
pub trait ScalarBasis: Send + Sync {
    fn len(&self) -> usize;
    fn value(&self, k: usize, p: V2) -> f64;
    fn gradient(&self, k: usize, p: V2) -> V2;
    /// Coefficients representing the constant function 1, when the constant
    /// lies in the span. Mass conservation of the transport scheme is
    /// structural exactly in that case.
    fn constant_coefficients(&self) -> Option<DVector<f64>>;

    fn eval(&self, coeff: &DVector<f64>, p: V2) -> f64 {
        (0..coeff.len()).map(|k| coeff[k] * self.value(k, p)).sum()
    }

    fn eval_gradient(&self, coeff: &DVector<f64>, p: V2) -> V2 {
        let mut g = V2::new(0.0, 0.0);
        for k in 0..coeff.len() {
            g += coeff[k] * self.gradient(k, p);
        }
        g
    }
}
