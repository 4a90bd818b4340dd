//! Tensor cosine basis on a square, natural for no-flux problems.

use nalgebra::DVector;

use super::{ScalarBasis, V2};

/// `cos(j pi x / a) cos(k pi y / a)` modes on `[0, a]^2`, sorted by total
/// frequency. The constant mode comes first.
#[derive(Debug, Clone)]
pub struct CosineBasis {
    pub side: f64,
    modes: Vec<(usize, usize)>,
}

impl CosineBasis {
    pub fn new(n_modes: usize, side: f64) -> Self {
        let cap = (n_modes as f64).sqrt() as usize + 2;
        let mut modes: Vec<(usize, usize)> = (0..=cap)
            .flat_map(|j| (0..=cap).map(move |k| (j, k)))
            .collect();
        modes.sort_by_key(|&(j, k)| (j * j + k * k, j, k));
        modes.truncate(n_modes);
        CosineBasis { side, modes }
    }

    fn axis_norm(&self, j: usize) -> f64 {
        if j == 0 {
            (1.0 / self.side).sqrt()
        } else {
            (2.0 / self.side).sqrt()
        }
    }
}

impl ScalarBasis for CosineBasis {
    fn len(&self) -> usize {
        self.modes.len()
    }

    fn value(&self, k: usize, p: V2) -> f64 {
        let (j, l) = self.modes[k];
        let fx = j as f64 * std::f64::consts::PI / self.side;
        let fy = l as f64 * std::f64::consts::PI / self.side;
        self.axis_norm(j) * self.axis_norm(l) * (fx * p.x).cos() * (fy * p.y).cos()
    }

    fn gradient(&self, k: usize, p: V2) -> V2 {
        let (j, l) = self.modes[k];
        let fx = j as f64 * std::f64::consts::PI / self.side;
        let fy = l as f64 * std::f64::consts::PI / self.side;
        let n = self.axis_norm(j) * self.axis_norm(l);
        V2::new(
            -n * fx * (fx * p.x).sin() * (fy * p.y).cos(),
            -n * fy * (fx * p.x).cos() * (fy * p.y).sin(),
        )
    }

    fn constant_coefficients(&self) -> Option<DVector<f64>> {
        let mut c = DVector::zeros(self.modes.len());
        let k0 = self.modes.iter().position(|&(j, l)| j == 0 && l == 0)?;
        c[k0] = self.side; // 1 / (axis_norm(0)^2)
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn orthonormal_under_quadrature() {
        let b = CosineBasis::new(9, 1.0);
        let n = 64;
        let h = 1.0 / n as f64;
        for i in 0..9 {
            for j in i..9 {
                let mut acc = 0.0;
                for ix in 0..n {
                    for iy in 0..n {
                        let p = V2::new((ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h);
                        acc += h * h * b.value(i, p) * b.value(j, p);
                    }
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(acc, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn constant_representation() {
        let b = CosineBasis::new(5, 2.0);
        let c = b.constant_coefficients().unwrap();
        assert_relative_eq!(b.eval(&c, V2::new(0.3, 1.7)), 1.0, epsilon = 1e-13);
    }
}
