//! Dense spectral checks for small meshes.

use super::forms::FormMatrices;
use crate::sparse::Csr;
use faer::{Mat, Side};

fn min_eigenvalue_symmetrized(a: &Csr) -> f64 {
    let n = a.nrows;
    let m = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (a.get(i, j) + a.get(j, i)));
    let ev = m
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("symmetric eigenvalue solver converges");
    ev.into_iter().fold(f64::INFINITY, f64::min)
}

/// Smallest eigenvalues of the symmetric parts of A and B. Negative or
/// vanishing values indicate that a penalty parameter is too small (or that
/// the boundary conditions leave a kernel, e.g. rigid motions).
pub fn coercivity_diagnostic(forms: &FormMatrices) -> (f64, f64) {
    (min_eigenvalue_symmetrized(&forms.a), min_eigenvalue_symmetrized(&forms.b))
}
