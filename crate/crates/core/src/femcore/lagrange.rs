//! Lagrange and Legendre bases in one variable.

use super::quadrature::legendre;

/// Lagrange interpolation basis on a fixed set of distinct nodes.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    denom: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(nodes: Vec<f64>) -> Self {
        let n = nodes.len();
        let denom = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| nodes[i] - nodes[j])
                    .product::<f64>()
            })
            .collect();
        Self { nodes, denom }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Value of basis function `i` at `x`.
    pub fn value(&self, i: usize, x: f64) -> f64 {
        let mut v = 1.0;
        for (j, &xj) in self.nodes.iter().enumerate() {
            if j != i {
                v *= x - xj;
            }
        }
        v / self.denom[i]
    }

    /// Derivative of basis function `i` at `x`.
    pub fn derivative(&self, i: usize, x: f64) -> f64 {
        let n = self.nodes.len();
        let mut sum = 0.0;
        for l in 0..n {
            if l == i {
                continue;
            }
            let mut p = 1.0;
            for j in 0..n {
                if j != i && j != l {
                    p *= x - self.nodes[j];
                }
            }
            sum += p;
        }
        sum / self.denom[i]
    }

    /// All basis values at `x`.
    pub fn values(&self, x: f64) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i, x)).collect()
    }

    /// All basis derivatives at `x`.
    pub fn derivatives(&self, x: f64) -> Vec<f64> {
        (0..self.len()).map(|i| self.derivative(i, x)).collect()
    }
}

/// Legendre polynomial of degree `n` and its derivative; used as a
/// hierarchical basis for the discontinuous pressure space.
pub fn legendre_mode(n: usize, x: f64) -> (f64, f64) {
    legendre(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::femcore::quadrature::gauss_lobatto;

    #[test]
    fn kronecker_property_and_partition_of_unity() {
        let basis = LagrangeBasis::new(gauss_lobatto(5).points);
        for i in 0..5 {
            for j in 0..5 {
                let v = basis.value(i, basis.nodes()[j]);
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        for &x in &[-0.9, -0.1, 0.37, 0.8] {
            let s: f64 = basis.values(x).iter().sum();
            let ds: f64 = basis.derivatives(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-13);
            assert!(ds.abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let basis = LagrangeBasis::new(vec![-1.0, -0.2, 0.5, 1.0]);
        let h = 1e-6;
        for i in 0..4 {
            for &x in &[-0.7, 0.1, 0.9] {
                let fd = (basis.value(i, x + h) - basis.value(i, x - h)) / (2.0 * h);
                assert!((fd - basis.derivative(i, x)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let basis = LagrangeBasis::new(gauss_lobatto(4).points);
        let f = |x: f64| 2.0 * x * x * x - x + 0.5;
        let df = |x: f64| 6.0 * x * x - 1.0;
        let coeffs: Vec<f64> = basis.nodes().iter().map(|&x| f(x)).collect();
        for &x in &[-0.33, 0.25, 0.71] {
            let v: f64 = (0..4).map(|i| coeffs[i] * basis.value(i, x)).sum();
            let d: f64 = (0..4).map(|i| coeffs[i] * basis.derivative(i, x)).sum();
            assert!((v - f(x)).abs() < 1e-13);
            assert!((d - df(x)).abs() < 1e-12);
        }
    }
}
