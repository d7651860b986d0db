//! Discontinuous Galerkin time basis: Lagrange polynomials through the
//! right Gauss-Radau points of a slab.

use super::lagrange::LagrangeBasis;
use super::quadrature::{gauss_radau_right, Rule1d};

/// Degree-k time basis on the reference slab [-1, 1] together with the two
/// slab coupling matrices. Rows index the test function, columns the trial
/// function.
#[derive(Debug, Clone)]
pub struct TimeBasis {
    pub k: usize,
    pub radau: Rule1d,
    pub lagrange: LagrangeBasis,
    /// derivative plus upwind jump coupling; independent of the step size
    pub w1: Vec<Vec<f64>>,
    /// basis values at the left end of the slab
    pub at_start: Vec<f64>,
}

impl TimeBasis {
    pub fn new(k: usize) -> Self {
        let radau = gauss_radau_right(k + 1);
        let lagrange = LagrangeBasis::new(radau.points.clone());
        let n = k + 1;
        let at_start: Vec<f64> = (0..n).map(|m| lagrange.value(m, -1.0)).collect();
        let mut w1 = vec![vec![0.0; n]; n];
        for m in 0..n {
            for mp in 0..n {
                // the quadrature collapses onto the collocation node of the test function
                w1[m][mp] = radau.weights[m] * lagrange.derivative(mp, radau.points[m])
                    + at_start[mp] * at_start[m];
            }
        }
        Self { k, radau, lagrange, w1, at_start }
    }

    pub fn n_points(&self) -> usize {
        self.k + 1
    }

    /// Diagonal of the mass coupling for a slab of length `tau`.
    pub fn w0(&self, tau: f64) -> Vec<f64> {
        self.radau.weights.iter().map(|w| 0.5 * tau * w).collect()
    }

    /// Physical Radau times of the slab (t0, t0 + tau].
    pub fn times(&self, t0: f64, tau: f64) -> Vec<f64> {
        self.radau
            .points
            .iter()
            .map(|x| t0 + 0.5 * (x + 1.0) * tau)
            .collect()
    }

    /// Basis values at reference time `x`.
    pub fn values(&self, x: f64) -> Vec<f64> {
        self.lagrange.values(x)
    }

    /// Time derivatives at reference time `x` for a slab of length `tau`.
    pub fn time_derivatives(&self, x: f64, tau: f64) -> Vec<f64> {
        self.lagrange
            .derivatives(x)
            .into_iter()
            .map(|d| 2.0 * d / tau)
            .collect()
    }

    /// Slab matrix of the scalar test equation y' = lambda y, z = tau * lambda.
    pub fn scalar_slab_matrix(&self, z: f64) -> Vec<Vec<f64>> {
        let n = self.n_points();
        let mut a = self.w1.clone();
        for m in 0..n {
            a[m][m] -= z * 0.5 * self.radau.weights[m];
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::femcore::quadrature::gauss_legendre;

    fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
            a.swap(c, p);
            b.swap(c, p);
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for j in c..n {
                    a[r][j] -= f * a[c][j];
                }
                b[r] -= f * b[c];
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|j| a[r][j] * x[j]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }

    #[test]
    fn coupling_matches_independent_gauss_integration() {
        for k in 0..5 {
            let tb = TimeBasis::new(k);
            let g = gauss_legendre(k + 2);
            for m in 0..=k {
                for mp in 0..=k {
                    let q = g.integrate(|x| tb.lagrange.derivative(mp, x) * tb.lagrange.value(m, x));
                    let expect = q + tb.lagrange.value(mp, -1.0) * tb.lagrange.value(m, -1.0);
                    assert!((tb.w1[m][mp] - expect).abs() < 1e-12, "k={k}");
                }
            }
        }
    }

    #[test]
    fn constants_only_see_the_jump() {
        for k in 0..5 {
            let tb = TimeBasis::new(k);
            for m in 0..=k {
                let s: f64 = tb.w1[m].iter().sum();
                assert!((s - tb.at_start[m]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scalar_decay_reproduces_radau_iia_stability() {
        // y' = lambda y, one slab from y0 = 1; the end value is the
        // subdiagonal Pade approximant of exp(z)
        let z = -0.7;
        let r0 = 1.0 / (1.0 - z);
        let r1 = (1.0 + z / 3.0) / (1.0 - 2.0 * z / 3.0 + z * z / 6.0);
        let r2 = (1.0 + 2.0 * z / 5.0 + z * z / 20.0)
            / (1.0 - 3.0 * z / 5.0 + 3.0 * z * z / 20.0 - z * z * z / 60.0);
        for (k, expect) in [(0, r0), (1, r1), (2, r2)] {
            let tb = TimeBasis::new(k);
            let y = solve_dense(tb.scalar_slab_matrix(z), tb.at_start.clone());
            assert!((y[k] - expect).abs() < 1e-13, "k={k}: {} vs {expect}", y[k]);
        }
    }

    #[test]
    fn physical_times_end_at_slab_end() {
        let tb = TimeBasis::new(2);
        let t = tb.times(1.0, 0.1);
        assert!((t[2] - 1.1).abs() < 1e-15);
        assert!(t[0] > 1.0);
        let w: f64 = tb.w0(0.1).iter().sum();
        assert!((w - 0.1).abs() < 1e-15);
    }
}
