//! Spatial bilinear forms: masses, elasticity with Nitsche terms, the
//! pressure-displacement coupling and the pressure diffusion operator.

use super::params::{FaceSizeMode, Material, NitscheParams};
use crate::femcore::{face_gauss, tensor_gauss, MixedSpace, Pair, QuadratureNd, Tabulation};
use crate::meshkit::{Face, MeshLevel, PBc, UBc};
use crate::sparse::{Csr, TripletBuilder};

/// Assembled spatial matrices of one mesh level.
#[derive(Debug, Clone)]
pub struct FormMatrices {
    /// rho-weighted vector mass, R x R
    pub mass_v: Csr,
    /// elasticity with Nitsche and slip terms, R x R
    pub a: Csr,
    /// coupling C(chi, q) with pressure rows, S x R
    pub c: Csr,
    /// volume part -alpha (div chi, q) of `c`
    pub c_vol: Csr,
    /// transpose of `c`, R x S
    pub ct: Csr,
    /// c0-weighted pressure mass, S x S
    pub mass_q: Csr,
    /// pressure diffusion (Nitsche or interior penalty), S x S
    pub b: Csr,
}

impl FormMatrices {
    pub fn n_v(&self) -> usize {
        self.mass_v.nrows
    }

    pub fn n_q(&self) -> usize {
        self.mass_q.nrows
    }
}

/// Reference tabulations shared by the cells of a level.
pub(crate) struct LocalTables {
    pub quad: QuadratureNd,
    pub v: Tabulation,
    pub q: Tabulation,
    /// face rules and tabulations indexed by 2 * axis + (positive as usize)
    pub face_quad: Vec<QuadratureNd>,
    pub face_v: Vec<Tabulation>,
    pub face_q: Vec<Tabulation>,
}

impl LocalTables {
    pub fn new(space: &MixedSpace, dim: usize, npts: usize) -> Self {
        let quad = tensor_gauss(dim, npts);
        let v = Tabulation::new(&space.v.scalar.ref_space, &quad);
        let q = Tabulation::new(&space.q.ref_space, &quad);
        let mut face_quad = Vec::new();
        let mut face_v = Vec::new();
        let mut face_q = Vec::new();
        for axis in 0..dim {
            for positive in [false, true] {
                let fq = face_gauss(dim, npts, axis, positive);
                face_v.push(Tabulation::new(&space.v.scalar.ref_space, &fq));
                face_q.push(Tabulation::new(&space.q.ref_space, &fq));
                face_quad.push(fq);
            }
        }
        Self { quad, v, q, face_quad, face_v, face_q }
    }
}

pub(crate) fn face_slot(axis: usize, positive: bool) -> usize {
    2 * axis + positive as usize
}

/// Penalty length of a face.
pub fn face_size(mesh: &MeshLevel, _face: &Face, mode: FaceSizeMode) -> f64 {
    match mode {
        // all cells of a level are congruent, so the mean of the two
        // adjacent measures is the cell measure
        FaceSizeMode::Measure => mesh.cell_measure(),
        FaceSizeMode::Diameter => mesh.diameter(),
    }
}

/// Physical gradient from a reference gradient.
#[inline]
pub(crate) fn phys_grad(g: &[f64; 3], jac: &[f64; 3]) -> [f64; 3] {
    [g[0] * jac[0], g[1] * jac[1], g[2] * jac[2]]
}

#[inline]
pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn matvec3(k: &[[f64; 3]; 3], g: &[f64; 3]) -> [f64; 3] {
    [dot(&k[0], g), dot(&k[1], g), dot(&k[2], g)]
}

/// Component `b` of the traction C eps(phi e_c) n of a scalar shape function
/// with physical gradient `g`.
#[inline]
pub(crate) fn traction(mat: &Material, g: &[f64; 3], n: &[f64; 3], b: usize, c: usize) -> f64 {
    let delta = if b == c { 1.0 } else { 0.0 };
    mat.mu * (delta * dot(g, n) + g[b] * n[c]) + mat.lambda * g[c] * n[b]
}

/// Per-cell geometric factors: reference-to-physical gradient scaling and
/// volume Jacobian.
pub(crate) fn cell_scaling(mesh: &MeshLevel) -> ([f64; 3], f64) {
    let mut jac = [0.0; 3];
    let mut det = 1.0;
    for a in 0..mesh.dim {
        jac[a] = 2.0 / mesh.h[a];
        det *= 0.5 * mesh.h[a];
    }
    (jac, det)
}

pub(crate) fn face_jacobian(mesh: &MeshLevel, axis: usize) -> f64 {
    (0..mesh.dim).filter(|&b| b != axis).map(|b| 0.5 * mesh.h[b]).product()
}

/// Assemble all spatial forms of one level.
pub fn assemble_forms(mesh: &MeshLevel, space: &MixedSpace, mat: &Material, nit: &NitscheParams) -> FormMatrices {
    let dim = mesh.dim;
    let r = space.r;
    let tables = LocalTables::new(space, dim, r + 1);
    let (jac, det) = cell_scaling(mesh);
    let nvl = space.v.scalar.n_local();
    let nql = space.q.n_local();
    let n_v = space.v.n_dofs();
    let n_q = space.q.n_dofs;
    let kt = &mat.permeability;

    let cells = mesh.n_cells();
    let mut mv = TripletBuilder::with_capacity(n_v, n_v, cells * nvl * nvl * dim);
    let mut aa = TripletBuilder::with_capacity(n_v, n_v, cells * nvl * nvl * dim * dim);
    let mut cv = TripletBuilder::with_capacity(n_q, n_v, cells * nql * nvl * dim);
    let mut cb = TripletBuilder::new(n_q, n_v);
    let mut mq = TripletBuilder::with_capacity(n_q, n_q, cells * nql * nql);
    let mut bb = TripletBuilder::with_capacity(n_q, n_q, cells * nql * nql);

    let mut gv = vec![[0.0; 3]; nvl];
    let mut gq = vec![[0.0; 3]; nql];
    let mut loc_a = vec![0.0; (nvl * dim) * (nvl * dim)];
    let mut loc_m = vec![0.0; nvl * nvl];
    let mut loc_c = vec![0.0; nql * nvl * dim];
    let mut loc_mq = vec![0.0; nql * nql];
    let mut loc_b = vec![0.0; nql * nql];
    let nvd = nvl * dim;

    for ci in 0..cells {
        loc_a.iter_mut().for_each(|x| *x = 0.0);
        loc_m.iter_mut().for_each(|x| *x = 0.0);
        loc_c.iter_mut().for_each(|x| *x = 0.0);
        loc_mq.iter_mut().for_each(|x| *x = 0.0);
        loc_b.iter_mut().for_each(|x| *x = 0.0);
        for q in 0..tables.quad.len() {
            let w = tables.quad.weights[q] * det;
            for i in 0..nvl {
                gv[i] = phys_grad(tables.v.grad(q, i), &jac);
            }
            for i in 0..nql {
                gq[i] = phys_grad(tables.q.grad(q, i), &jac);
            }
            for i in 0..nvl {
                let vi = tables.v.val(q, i);
                for j in 0..nvl {
                    let vj = tables.v.val(q, j);
                    loc_m[i * nvl + j] += w * mat.rho * vi * vj;
                    let gg = dot(&gv[i], &gv[j]);
                    for b in 0..dim {
                        for c in 0..dim {
                            let delta = if b == c { gg } else { 0.0 };
                            loc_a[(i * dim + b) * nvd + j * dim + c] += w
                                * (mat.lambda * gv[j][c] * gv[i][b] + mat.mu * (delta + gv[j][b] * gv[i][c]));
                        }
                    }
                }
            }
            for s in 0..nql {
                let qs = tables.q.val(q, s);
                for j in 0..nvl {
                    for c in 0..dim {
                        loc_c[s * nvd + j * dim + c] -= w * mat.alpha * gv[j][c] * qs;
                    }
                }
                let kg = matvec3(kt, &gq[s]);
                for t in 0..nql {
                    let qt = tables.q.val(q, t);
                    loc_mq[s * nql + t] += w * mat.c0 * qs * qt;
                    loc_b[s * nql + t] += w * dot(&kg, &gq[t]);
                }
            }
        }
        let vd = space.v.cell_dofs(ci);
        let sn = space.v.scalar.cell_dofs(ci);
        let qd = space.q.cell_dofs(ci);
        for i in 0..nvl {
            for j in 0..nvl {
                for c in 0..dim {
                    mv.push(sn[i] * dim + c, sn[j] * dim + c, loc_m[i * nvl + j]);
                }
            }
        }
        for (li, &gi) in vd.iter().enumerate() {
            for (lj, &gj) in vd.iter().enumerate() {
                aa.push(gi, gj, loc_a[li * nvd + lj]);
            }
        }
        for (s, &gs) in qd.iter().enumerate() {
            for (lj, &gj) in vd.iter().enumerate() {
                cv.push(gs, gj, loc_c[s * nvd + lj]);
            }
            for (t, &gt) in qd.iter().enumerate() {
                mq.push(gs, gt, loc_mq[s * nql + t]);
                bb.push(gs, gt, loc_b[s * nql + t]);
            }
        }
    }

    for face in &mesh.faces {
        let hf = face_size(mesh, face, nit.face_size);
        let fdet = face_jacobian(mesh, face.axis);
        let n = face.normal();
        let slot = face_slot(face.axis, face.positive);
        let fq = &tables.face_quad[slot];
        let tv = &tables.face_v[slot];
        let tq = &tables.face_q[slot];
        match face.tag {
            Some(tag) => {
                let ci = face.cell;
                let vd = space.v.cell_dofs(ci);
                let qd = space.q.cell_dofs(ci);
                match tag.u {
                    UBc::Dirichlet | UBc::Directional => {
                        let slip = tag.u == UBc::Directional;
                        for q in 0..fq.len() {
                            let w = fq.weights[q] * fdet;
                            for i in 0..nvl {
                                gv[i] = phys_grad(tv.grad(q, i), &jac);
                            }
                            for i in 0..nvl {
                                let vi = tv.val(q, i);
                                for b in 0..dim {
                                    for j in 0..nvl {
                                        let vj = tv.val(q, j);
                                        for c in 0..dim {
                                            let val = if slip {
                                                let sj: f64 = (0..dim).map(|e| traction(mat, &gv[j], &n, e, c) * n[e]).sum();
                                                let si: f64 = (0..dim).map(|e| traction(mat, &gv[i], &n, e, b) * n[e]).sum();
                                                -sj * vi * n[b] - vj * n[c] * si + nit.gamma_a / hf * vi * n[b] * vj * n[c]
                                            } else {
                                                let pen = if b == c { nit.gamma_a / hf * vi * vj } else { 0.0 };
                                                -traction(mat, &gv[j], &n, b, c) * vi - traction(mat, &gv[i], &n, c, b) * vj + pen
                                            };
                                            aa.push(vd[i * dim + b], vd[j * dim + c], w * val);
                                        }
                                    }
                                }
                            }
                            if !slip {
                                for s in 0..nql {
                                    let qs = tq.val(q, s);
                                    for j in 0..nvl {
                                        let vj = tv.val(q, j);
                                        for c in 0..dim {
                                            cb.push(qd[s], vd[j * dim + c], w * mat.alpha * vj * n[c] * qs);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    UBc::Neumann => {}
                }
                if tag.p == PBc::Dirichlet {
                    let pen = match space.pair {
                        Pair::Qq => nit.gamma_b,
                        Pair::Qpdisc => nit.gamma,
                    };
                    for q in 0..fq.len() {
                        let w = fq.weights[q] * fdet;
                        for s in 0..nql {
                            gq[s] = phys_grad(tq.grad(q, s), &jac);
                        }
                        for s in 0..nql {
                            let qs = tq.val(q, s);
                            let fs = dot(&matvec3(kt, &gq[s]), &n);
                            for t in 0..nql {
                                let qt = tq.val(q, t);
                                let ft = dot(&matvec3(kt, &gq[t]), &n);
                                bb.push(qd[s], qd[t], w * (-ft * qs - qt * fs + pen / hf * qt * qs));
                            }
                        }
                    }
                }
            }
            None if space.pair == Pair::Qpdisc => {
                let nb = face.neighbor.expect("interior face has a neighbor");
                let other = face_slot(face.axis, !face.positive);
                let tq_m = &tables.face_q[other];
                let dp = space.q.cell_dofs(face.cell);
                let dm = space.q.cell_dofs(nb);
                let mut gm = vec![[0.0; 3]; nql];
                for q in 0..fq.len() {
                    let w = fq.weights[q] * fdet;
                    for s in 0..nql {
                        gq[s] = phys_grad(tq.grad(q, s), &jac);
                        gm[s] = phys_grad(tq_m.grad(q, s), &jac);
                    }
                    // sides: 0 = owner (+), 1 = neighbor (-)
                    for side_a in 0..2 {
                        let (ta, ga, da, sa) = if side_a == 0 { (tq, &gq, dp, 1.0) } else { (tq_m, &gm, dm, -1.0) };
                        for side_b in 0..2 {
                            let (tb, gb, db, sb) = if side_b == 0 { (tq, &gq, dp, 1.0) } else { (tq_m, &gm, dm, -1.0) };
                            for a in 0..nql {
                                let psi = ta.val(q, a);
                                let fpsi = 0.5 * dot(&matvec3(kt, &ga[a]), &n);
                                for b in 0..nql {
                                    let qb = tb.val(q, b);
                                    let fq_b = 0.5 * dot(&matvec3(kt, &gb[b]), &n);
                                    let val = -fq_b * sa * psi - sb * qb * fpsi + nit.gamma / hf * sb * qb * sa * psi;
                                    bb.push(da[a], db[b], w * val);
                                }
                            }
                        }
                    }
                }
            }
            None => {}
        }
    }

    let c_vol = cv.build();
    let c = c_vol.add(&cb.build());
    let ct = c.transpose();
    FormMatrices { mass_v: mv.build(), a: aa.build(), c, c_vol, ct, mass_q: mq.build(), b: bb.build() }
}
