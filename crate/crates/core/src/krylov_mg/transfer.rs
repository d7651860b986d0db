//! Grid transfer between consecutive levels of a mesh hierarchy.
//!
//! Continuous fields are prolongated by nodal interpolation, discontinuous
//! pressures by the exact local L2 projection onto the children (the
//! coarse polynomial restricted to a child lies in the fine space).
//! Restriction is the transpose. Time is not coarsened, so each Radau
//! point block is transferred independently.

use crate::assembly::slab::{FIELD_P, FIELD_U, FIELD_V};
use crate::femcore::{tensor_gauss, MixedSpace, ScalarSpace};
use crate::meshkit::MeshLevel;
use crate::sparse::{Csr, TripletBuilder};

/// Prolongation of one scalar space.
pub fn scalar_prolongation(coarse_mesh: &MeshLevel, coarse: &ScalarSpace, fine_mesh: &MeshLevel, fine: &ScalarSpace) -> Csr {
    let nc = coarse.n_local();
    let nf = fine.n_local();
    let mut vals = vec![0.0; nc];
    let mut grads = vec![[0.0; 3]; nc];
    let mut b = TripletBuilder::new(fine.n_dofs, coarse.n_dofs);
    if fine.continuous {
        let pts = fine.ref_space.node_points();
        let mut done = vec![false; fine.n_dofs];
        for (fi, cell) in fine_mesh.cells.iter().enumerate() {
            let parent = cell.parent.expect("fine cell has a parent");
            let cd = coarse.cell_dofs(parent);
            for (i, &dof) in fine.cell_dofs(fi).iter().enumerate() {
                if done[dof] {
                    continue;
                }
                done[dof] = true;
                let x = fine_mesh.map_to_physical(fi, &pts[i]);
                let xi = coarse_mesh.map_to_reference(parent, &x);
                coarse.ref_space.eval(&xi, &mut vals, &mut grads);
                for (j, &v) in vals.iter().enumerate() {
                    if v.abs() > 1e-13 {
                        b.push(dof, cd[j], v);
                    }
                }
            }
        }
    } else {
        let quad = tensor_gauss(fine_mesh.dim, fine.ref_space.degree + 1);
        let mut fv = vec![0.0; nf];
        let mut fg = vec![[0.0; 3]; nf];
        for (fi, cell) in fine_mesh.cells.iter().enumerate() {
            let parent = cell.parent.expect("fine cell has a parent");
            let cd = coarse.cell_dofs(parent);
            let fd = fine.cell_dofs(fi);
            let mut mass = vec![0.0; nf];
            let mut mixed = vec![0.0; nf * nc];
            for (xq, &w) in quad.points.iter().zip(&quad.weights) {
                fine.ref_space.eval(xq, &mut fv, &mut fg);
                let x = fine_mesh.map_to_physical(fi, xq);
                let xi = coarse_mesh.map_to_reference(parent, &x);
                coarse.ref_space.eval(&xi, &mut vals, &mut grads);
                for s in 0..nf {
                    mass[s] += w * fv[s] * fv[s];
                    for t in 0..nc {
                        mixed[s * nc + t] += w * fv[s] * vals[t];
                    }
                }
            }
            // the discontinuous basis is orthogonal, so the local mass is diagonal
            for s in 0..nf {
                for t in 0..nc {
                    let v = mixed[s * nc + t] / mass[s];
                    if v.abs() > 1e-13 {
                        b.push(fd[s], cd[t], v);
                    }
                }
            }
        }
    }
    b.build()
}

/// Transfer between a coarse and the next finer level of mixed spaces.
#[derive(Debug, Clone)]
pub struct Transfer {
    pub dim: usize,
    /// scalar node prolongation of the vector fields
    pub p_v: Csr,
    pub p_q: Csr,
    pub r_v: Csr,
    pub r_q: Csr,
    coarse_sizes: (usize, usize),
    fine_sizes: (usize, usize),
}

impl Transfer {
    pub fn new(coarse_mesh: &MeshLevel, coarse: &MixedSpace, fine_mesh: &MeshLevel, fine: &MixedSpace) -> Self {
        let p_v = scalar_prolongation(coarse_mesh, &coarse.v.scalar, fine_mesh, &fine.v.scalar);
        let p_q = scalar_prolongation(coarse_mesh, &coarse.q, fine_mesh, &fine.q);
        Self {
            dim: coarse_mesh.dim,
            r_v: p_v.transpose(),
            r_q: p_q.transpose(),
            p_v,
            p_q,
            coarse_sizes: (coarse.v.n_dofs(), coarse.q.n_dofs),
            fine_sizes: (fine.v.n_dofs(), fine.q.n_dofs),
        }
    }

    fn block(sizes: (usize, usize)) -> usize {
        2 * sizes.0 + sizes.1
    }

    /// Apply a scalar operator to every component of an interleaved vector
    /// field: y[node*dim + c] += (m x_c)[node].
    fn vector_apply(m: &Csr, dim: usize, x: &[f64], y: &mut [f64]) {
        for row in 0..m.nrows {
            let (cols, vals) = m.row(row);
            for c in 0..dim {
                let mut s = 0.0;
                for (&j, &v) in cols.iter().zip(vals) {
                    s += v * x[j * dim + c];
                }
                y[row * dim + c] += s;
            }
        }
    }

    fn map(&self, mv: &Csr, mq: &Csr, from: (usize, usize), to: (usize, usize), x: &[f64]) -> Vec<f64> {
        let (nbf, nbt) = (Self::block(from), Self::block(to));
        let nt = x.len() / nbf;
        let mut y = vec![0.0; nt * nbt];
        for m in 0..nt {
            let xs = &x[m * nbf..(m + 1) * nbf];
            let ys = &mut y[m * nbt..(m + 1) * nbt];
            for f in [FIELD_V, FIELD_U] {
                let (xo, yo) = (f * from.0, f * to.0);
                Self::vector_apply(mv, self.dim, &xs[xo..xo + from.0], &mut ys[yo..yo + to.0]);
            }
            let (xo, yo) = (FIELD_P * from.0, FIELD_P * to.0);
            mq.mul_add(1.0, &xs[xo..xo + from.1], &mut ys[yo..yo + to.1]);
        }
        y
    }

    /// Coarse slab vector to fine slab vector.
    pub fn prolongate(&self, coarse: &[f64]) -> Vec<f64> {
        self.map(&self.p_v, &self.p_q, self.coarse_sizes, self.fine_sizes, coarse)
    }

    /// Fine slab vector to coarse slab vector (transpose of prolongation).
    pub fn restrict(&self, fine: &[f64]) -> Vec<f64> {
        self.map(&self.r_v, &self.r_q, self.fine_sizes, self.coarse_sizes, fine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::femcore::Pair;
    use crate::meshkit::{DomainSpec, MeshHierarchy};
    use proptest::prelude::*;

    fn interpolate(mesh: &MeshLevel, space: &ScalarSpace, f: impl Fn(&[f64; 3]) -> f64) -> Vec<f64> {
        // nodal values for continuous spaces, local L2 projection for discontinuous ones
        let mut out = vec![0.0; space.n_dofs];
        if space.continuous {
            for (i, x) in space.node_coords.iter().enumerate() {
                out[i] = f(x);
            }
            return out;
        }
        let quad = tensor_gauss(mesh.dim, space.ref_space.degree + 2);
        let n = space.n_local();
        let (mut v, mut g) = (vec![0.0; n], vec![[0.0; 3]; n]);
        for ci in 0..mesh.n_cells() {
            let mut mass = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            for (xq, &w) in quad.points.iter().zip(&quad.weights) {
                space.ref_space.eval(xq, &mut v, &mut g);
                let val = f(&mesh.map_to_physical(ci, xq));
                for s in 0..n {
                    mass[s] += w * v[s] * v[s];
                    rhs[s] += w * v[s] * val;
                }
            }
            for (s, &d) in space.cell_dofs(ci).iter().enumerate() {
                out[d] = rhs[s] / mass[s];
            }
        }
        out
    }

    #[test]
    fn polynomials_are_prolongated_exactly() {
        // total degree 2, contained in both Q3 and P2
        let f = |x: &[f64; 3]| 0.3 + x[0] - 2.0 * x[1] * x[0] + x[2] * x[1] * 0.5;
        for spec in [DomainSpec::unit_square(2), DomainSpec::lshape3d()] {
            let h = MeshHierarchy::build(&spec, 1).unwrap();
            let (cm, fm) = (&h.levels[0], &h.levels[1]);
            for pair in [Pair::Qq, Pair::Qpdisc] {
                let cs = MixedSpace::new(cm, 3, pair);
                let fs = MixedSpace::new(fm, 3, pair);
                for (c, fsp) in [(&cs.v.scalar, &fs.v.scalar), (&cs.q, &fs.q)] {
                    let p = scalar_prolongation(cm, c, fm, fsp);
                    let y = p.matvec(&interpolate(cm, c, f));
                    let exact = interpolate(fm, fsp, f);
                    for (a, b) in y.iter().zip(&exact) {
                        assert!((a - b).abs() < 1e-12, "{pair:?}: {a} vs {b}");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn restriction_is_the_transpose(seed in 0u64..10_000, qq in proptest::bool::ANY) {
            let pair = if qq { Pair::Qq } else { Pair::Qpdisc };
            let h = MeshHierarchy::build(&DomainSpec::unit_square(2), 1).unwrap();
            let cs = MixedSpace::new(&h.levels[0], 2, pair);
            let fs = MixedSpace::new(&h.levels[1], 2, pair);
            let t = Transfer::new(&h.levels[0], &cs, &h.levels[1], &fs);
            let nt = 2;
            let gen = |n: usize, s: u64| -> Vec<f64> {
                (0..n).map(|i| (((i as u64 + 1) * 2654435761 + s) % 1000) as f64 / 500.0 - 1.0).collect()
            };
            let xc = gen(nt * cs.block_size(), seed);
            let yf = gen(nt * fs.block_size(), seed + 17);
            let lhs: f64 = t.prolongate(&xc).iter().zip(&yf).map(|(a, b)| a * b).sum();
            let rhs: f64 = xc.iter().zip(&t.restrict(&yf)).map(|(a, b)| a * b).sum();
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }
    }
}
