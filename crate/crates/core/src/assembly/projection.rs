//! L2 projections onto the discrete spaces.

use super::data::{ProblemData, SlabState};
use super::forms::{cell_scaling, LocalTables};
use crate::femcore::{MixedSpace, ScalarSpace, Tabulation};
use crate::meshkit::MeshLevel;
use crate::sparse::{Csr, TripletBuilder};

/// Unweighted mass matrix of a scalar space.
pub fn scalar_mass(mesh: &MeshLevel, space: &ScalarSpace, tab: &Tabulation, weights: &[f64]) -> Csr {
    let (_, det) = cell_scaling(mesh);
    let n = space.n_local();
    let mut b = TripletBuilder::with_capacity(space.n_dofs, space.n_dofs, mesh.n_cells() * n * n);
    let mut loc = vec![0.0; n * n];
    for ci in 0..mesh.n_cells() {
        loc.iter_mut().for_each(|v| *v = 0.0);
        for (q, &wq) in weights.iter().enumerate() {
            let w = wq * det;
            for i in 0..n {
                for j in 0..n {
                    loc[i * n + j] += w * tab.val(q, i) * tab.val(q, j);
                }
            }
        }
        let d = space.cell_dofs(ci);
        for i in 0..n {
            for j in 0..n {
                b.push(d[i], d[j], loc[i * n + j]);
            }
        }
    }
    b.build()
}

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite
/// systems; returns the number of iterations.
pub fn conjugate_gradient(a: &Csr, b: &[f64], x: &mut [f64], rtol: f64, max_iter: usize) -> usize {
    let n = b.len();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let mut r = b.to_vec();
    a.mul_add(-1.0, x, &mut r);
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return 0;
    }
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for it in 0..max_iter {
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= rtol * bnorm {
            return it;
        }
        let ap = a.matvec(&p);
        let alpha = rz / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    max_iter
}

/// L2 projection of the initial data onto the discrete spaces.
pub fn project_initial_data(mesh: &MeshLevel, space: &MixedSpace, data: &dyn ProblemData, t0: f64) -> SlabState {
    let dim = mesh.dim;
    let tables = LocalTables::new(space, dim, space.r + 2);
    let (_, det) = cell_scaling(mesh);
    let nvl = space.v.scalar.n_local();
    let nql = space.q.n_local();
    let nn = space.v.scalar.n_dofs;
    let mut bu = vec![vec![0.0; nn]; dim];
    let mut bv = vec![vec![0.0; nn]; dim];
    let mut bp = vec![0.0; space.q.n_dofs];
    for ci in 0..mesh.n_cells() {
        let sn = space.v.scalar.cell_dofs(ci);
        let qd = space.q.cell_dofs(ci);
        for q in 0..tables.quad.len() {
            let x = mesh.map_to_physical(ci, &tables.quad.points[q]);
            let w = tables.quad.weights[q] * det;
            let u0 = data.initial_u(&x);
            let v0 = data.initial_v(&x);
            let p0 = data.initial_p(&x);
            for i in 0..nvl {
                let phi = tables.v.val(q, i);
                for c in 0..dim {
                    bu[c][sn[i]] += w * u0[c] * phi;
                    bv[c][sn[i]] += w * v0[c] * phi;
                }
            }
            for s in 0..nql {
                bp[qd[s]] += w * p0 * tables.q.val(q, s);
            }
        }
    }
    let mv = scalar_mass(mesh, &space.v.scalar, &tables.v, &tables.quad.weights);
    let mq = scalar_mass(mesh, &space.q, &tables.q, &tables.quad.weights);
    let mut state = SlabState::zeros(t0, space.v.n_dofs(), space.q.n_dofs);
    for c in 0..dim {
        for (rhs, out) in [(&bu[c], &mut state.u), (&bv[c], &mut state.v)] {
            let mut x = vec![0.0; nn];
            conjugate_gradient(&mv, rhs, &mut x, 1e-14, 10 * nn + 100);
            for (node, val) in x.into_iter().enumerate() {
                out[node * dim + c] = val;
            }
        }
    }
    conjugate_gradient(&mq, &bp, &mut state.p, 1e-14, 10 * space.q.n_dofs + 100);
    state
}
