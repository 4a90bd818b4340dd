//! Coupled vector basis for the momentum system.
//!
//! Interior modes are polynomial bubbles times coordinate directions; they
//! vanish on the reference boundary, hence on the displaced boundary after
//! push-forward by composition. Lifted shell modes extend the shell
//! eigenfunctions times the reference normal into the domain: a truncated
//! Fourier harmonic extension blended, in a thin collar, to the exact
//! boundary datum, so the trace condition is structural.

use nalgebra::Matrix2;
use thiserror::Error;

use super::zernike::ZernikeBasis;
use super::{ScalarBasis, V2};
use crate::geometry::ReferenceDomain;
use crate::shell::ShellBasis;

type M2 = Matrix2<f64>;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("harmonic lift of shell mode {mode} did not converge: tail ratio {tail:.3e}")]
    NotConverged { mode: usize, tail: f64 },
}

/// Identity of one vector mode in the interleaved enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VecMode {
    /// Bubble times unit vector: zero trace.
    Fluid { scalar: usize, comp: usize },
    /// Lifted shell mode.
    Lift { shell_mode: usize },
}

/// Truncated Fourier harmonic extension of one Cartesian component.
#[derive(Debug, Clone)]
struct HarmonicSeries {
    c0: f64,
    cos_coef: Vec<f64>,
    sin_coef: Vec<f64>,
}

impl HarmonicSeries {
    fn fit(samples: &[f64], n_harmonics: usize) -> Self {
        let n = samples.len() as f64;
        let c0 = samples.iter().sum::<f64>() / n;
        let mut cos_coef = vec![0.0; n_harmonics];
        let mut sin_coef = vec![0.0; n_harmonics];
        for k in 1..=n_harmonics {
            let (mut a, mut b) = (0.0, 0.0);
            for (i, &v) in samples.iter().enumerate() {
                let t = std::f64::consts::TAU * i as f64 / n;
                a += v * (k as f64 * t).cos();
                b += v * (k as f64 * t).sin();
            }
            cos_coef[k - 1] = 2.0 * a / n;
            sin_coef[k - 1] = 2.0 * b / n;
        }
        HarmonicSeries {
            c0,
            cos_coef,
            sin_coef,
        }
    }

    /// Value of the harmonic extension at disk coordinates `(rho, theta)`.
    fn eval(&self, rho: f64, theta: f64) -> f64 {
        let mut v = self.c0;
        let mut rp = 1.0;
        for (n, (a, b)) in self.cos_coef.iter().zip(&self.sin_coef).enumerate() {
            let k = (n + 1) as f64;
            rp *= rho;
            v += rp * (a * (k * theta).cos() + b * (k * theta).sin());
        }
        v
    }

    fn tail_ratio(&self) -> f64 {
        let total: f64 = self
            .cos_coef
            .iter()
            .zip(&self.sin_coef)
            .map(|(a, b)| a.abs() + b.abs())
            .sum();
        let n = self.cos_coef.len();
        let tail: f64 = self
            .cos_coef
            .iter()
            .zip(&self.sin_coef)
            .skip(3 * n / 4)
            .map(|(a, b)| a.abs() + b.abs())
            .sum();
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }
}

struct LiftField {
    hx: HarmonicSeries,
    hy: HarmonicSeries,
}

/// The interleaved coupled basis with precomputed node tables.
pub struct CoupledBasis {
    pub modes: Vec<VecMode>,
    pub n_shell: usize,
    /// Values at the reference interior quadrature nodes, `[mode][node]`.
    pub val: Vec<Vec<V2>>,
    /// Cartesian Jacobians at the interior nodes, `[mode][node]`.
    pub jac: Vec<Vec<M2>>,
    /// Values at the reference boundary nodes (trace under push-forward).
    pub bval: Vec<Vec<V2>>,
    scalars: ZernikeBasis,
    lifts: Vec<LiftField>,
    shell: ShellBasis,
    collar_depth: f64,
}

impl CoupledBasis {
    /// Builds the interleaved basis: `n_fluid` bubble modes and `n_shell`
    /// lifted shell modes.
    pub fn build(
        n_fluid: usize,
        n_shell: usize,
        domain: &ReferenceDomain,
        shell: &ShellBasis,
    ) -> Result<Self, LiftError> {
        assert!(n_shell <= shell.n_modes());
        let n_scalars = n_fluid.div_ceil(2).max(1);
        let scalars = ZernikeBasis::on_curve(n_scalars, domain.curve.clone());

        // lift data
        let n_samples = 2048;
        let n_harmonics = 48;
        let mut lifts = Vec::with_capacity(n_shell);
        for j in 0..n_shell {
            let mut sx = vec![0.0; n_samples];
            let mut sy = vec![0.0; n_samples];
            for i in 0..n_samples {
                let theta = std::f64::consts::TAU * i as f64 / n_samples as f64;
                let g = boundary_datum(domain, shell, j, theta);
                sx[i] = g.x;
                sy[i] = g.y;
            }
            let hx = HarmonicSeries::fit(&sx, n_harmonics);
            let hy = HarmonicSeries::fit(&sy, n_harmonics);
            let tail = hx.tail_ratio().max(hy.tail_ratio());
            if tail > 5e-2 {
                return Err(LiftError::NotConverged { mode: j, tail });
            }
            lifts.push(LiftField { hx, hy });
        }

        // interleaved enumeration
        let mut modes = Vec::with_capacity(n_fluid + n_shell);
        let (mut xi, mut yi) = (0, 0);
        while xi < n_fluid || yi < n_shell {
            if xi < n_fluid {
                modes.push(VecMode::Fluid {
                    scalar: xi / 2,
                    comp: xi % 2,
                });
                xi += 1;
            }
            if yi < n_shell {
                modes.push(VecMode::Lift { shell_mode: yi });
                yi += 1;
            }
        }

        let mut basis = CoupledBasis {
            modes,
            n_shell,
            val: Vec::new(),
            jac: Vec::new(),
            bval: Vec::new(),
            scalars,
            lifts,
            shell: shell.clone(),
            collar_depth: 0.15 * domain.tube_width,
        };
        basis.build_tables(domain);
        Ok(basis)
    }

    fn build_tables(&mut self, domain: &ReferenceDomain) {
        let h = 1e-6;
        for k in 0..self.modes.len() {
            let mut val = Vec::with_capacity(domain.interior.len());
            let mut jac = Vec::with_capacity(domain.interior.len());
            for node in &domain.interior {
                val.push(self.value_at(domain, k, node.pos));
                let dx = (self.value_at(domain, k, V2::new(node.pos.x + h, node.pos.y))
                    - self.value_at(domain, k, V2::new(node.pos.x - h, node.pos.y)))
                    / (2.0 * h);
                let dy = (self.value_at(domain, k, V2::new(node.pos.x, node.pos.y + h))
                    - self.value_at(domain, k, V2::new(node.pos.x, node.pos.y - h)))
                    / (2.0 * h);
                jac.push(M2::from_columns(&[dx, dy]));
            }
            self.val.push(val);
            self.jac.push(jac);
            let bval = domain
                .boundary
                .iter()
                .map(|bn| match self.modes[k] {
                    VecMode::Fluid { .. } => V2::new(0.0, 0.0),
                    VecMode::Lift { shell_mode } => {
                        boundary_datum(domain, &self.shell, shell_mode, bn.theta)
                    }
                })
                .collect();
            self.bval.push(bval);
        }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Shell coefficient index carried by mode `k`, if it is a lift.
    pub fn shell_component(&self, k: usize) -> Option<usize> {
        match self.modes[k] {
            VecMode::Lift { shell_mode } => Some(shell_mode),
            _ => None,
        }
    }

    /// Field value at an arbitrary reference point.
    pub fn value_at(&self, domain: &ReferenceDomain, k: usize, p: V2) -> V2 {
        match self.modes[k] {
            VecMode::Fluid { scalar, comp } => {
                let r = p.norm();
                let theta = p.y.atan2(p.x);
                let c = domain.curve.radius_at(theta);
                let rho = r / c;
                let b = (1.0 - rho * rho) * self.scalars.value(scalar, p);
                if comp == 0 {
                    V2::new(b, 0.0)
                } else {
                    V2::new(0.0, b)
                }
            }
            VecMode::Lift { shell_mode } => self.lift_value(domain, shell_mode, p),
        }
    }

    /// Lifted shell mode: harmonic extension away from the boundary, blended
    /// to the exact datum in the collar.
    pub fn lift_value(&self, domain: &ReferenceDomain, j: usize, p: V2) -> V2 {
        let lift = &self.lifts[j];
        let r = p.norm();
        let theta = p.y.atan2(p.x);
        let c = domain.curve.radius_at(theta);
        let rho = (r / c).min(1.0);
        let h = V2::new(lift.hx.eval(rho, theta), lift.hy.eval(rho, theta));
        let (th_c, s) = domain.curve.decompose(p);
        if s <= -self.collar_depth {
            return h;
        }
        let u = ((s + self.collar_depth) / self.collar_depth).clamp(0.0, 1.0);
        let w = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        let datum = boundary_datum(domain, &self.shell, j, th_c);
        h * (1.0 - w) + datum * w
    }
}

fn boundary_datum(domain: &ReferenceDomain, shell: &ShellBasis, j: usize, theta: f64) -> V2 {
    if !domain.theta_on_shell(theta) {
        return V2::new(0.0, 0.0);
    }
    let arc = domain.shell_arc_of_theta(theta);
    if arc < 0.0 || arc > shell.len {
        return V2::new(0.0, 0.0);
    }
    let fr = domain.curve.frame(theta);
    shell.value(j, arc) * fr.normal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::QuadSpec;

    fn setup() -> (ReferenceDomain, ShellBasis, CoupledBasis) {
        let domain = ReferenceDomain::unit_disk(QuadSpec::default());
        let shell = ShellBasis::new(4, domain.shell_arclength);
        let basis = CoupledBasis::build(6, 3, &domain, &shell).unwrap();
        (domain, shell, basis)
    }

    #[test]
    fn interleaving_starts_with_fluid_then_lift() {
        let (_, _, b) = setup();
        assert_eq!(b.modes[0], VecMode::Fluid { scalar: 0, comp: 0 });
        assert_eq!(b.modes[1], VecMode::Lift { shell_mode: 0 });
        assert_eq!(b.modes[2], VecMode::Fluid { scalar: 0, comp: 1 });
        assert_eq!(b.len(), 9);
    }

    #[test]
    fn fluid_modes_have_zero_trace() {
        let (domain, _, b) = setup();
        for (k, mode) in b.modes.iter().enumerate() {
            if matches!(mode, VecMode::Fluid { .. }) {
                for bn in &domain.boundary {
                    let v = b.value_at(&domain, k, bn.pos);
                    assert!(v.norm() <= 1e-8, "mode {k} trace {v:?}");
                }
            }
        }
    }

    #[test]
    fn lift_trace_equals_shell_datum_exactly() {
        let (domain, shell, b) = setup();
        for j in 0..3 {
            for bn in &domain.boundary {
                let v = b.lift_value(&domain, j, bn.pos);
                let want = boundary_datum(&domain, &shell, j, bn.theta);
                assert!(
                    (v - want).norm() <= 1e-12,
                    "mode {j} at theta {}: {v:?} vs {want:?}",
                    bn.theta
                );
                // trace is normal: tangential part vanishes
                assert!(v.dot(&bn.tangent).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn lift_is_discretely_harmonic_in_the_interior() {
        let (domain, _, b) = setup();
        let h = 2e-4;
        for j in 0..3 {
            for &(r, t) in &[(0.2, 0.4), (0.5, 2.0), (0.6, 4.3), (0.4, 5.5)] {
                let p = V2::new(r * f64::cos(t), r * f64::sin(t));
                for comp in 0..2 {
                    let lap = crate::oracle::fd_laplacian(
                        |q| b.lift_value(&domain, j, q)[comp],
                        p,
                        h,
                    );
                    assert!(
                        lap.abs() <= 1e-6,
                        "mode {j} comp {comp} at {p:?}: laplacian {lap}"
                    );
                }
            }
        }
    }
}
