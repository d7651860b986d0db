//! Sparse direct factorization of a slab matrix.

use crate::error::{Error, Result};
use crate::sparse::Csr;
use faer::prelude::*;
use faer::sparse::linalg::solvers::Lu;

/// Sparse LU factors of a square matrix, reusable for many right-hand sides.
pub struct DirectSolver {
    n: usize,
    lu: Lu<usize, f64>,
}

impl std::fmt::Debug for DirectSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirectSolver").field("n", &self.n).finish()
    }
}

impl DirectSolver {
    pub fn new(a: &Csr) -> Result<Self> {
        if a.nrows != a.ncols {
            return Err(Error::Dimension(format!("{} x {} matrix is not square", a.nrows, a.ncols)));
        }
        let lu = a
            .to_faer()
            .sp_lu()
            .map_err(|e| Error::Factorization(format!("{e:?}")))?;
        Ok(Self { n: a.nrows, lu })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = Mat::<f64>::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_in_place(x.as_mut());
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::TripletBuilder;

    #[test]
    fn solves_a_nonsymmetric_tridiagonal_system() {
        let n = 50;
        let mut b = TripletBuilder::new(n, n);
        for i in 0..n {
            b.push(i, i, 4.0);
            if i > 0 {
                b.push(i, i - 1, -1.0);
            }
            if i + 1 < n {
                b.push(i, i + 1, -2.0);
            }
        }
        let a = b.build();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let rhs = a.matvec(&x);
        let s = DirectSolver::new(&a).unwrap();
        let y = s.solve(&rhs);
        for i in 0..n {
            assert!((x[i] - y[i]).abs() < 1e-12);
        }
    }
}
