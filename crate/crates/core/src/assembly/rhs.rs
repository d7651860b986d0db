//! Right-hand sides of the slab systems.

use super::data::{ProblemData, SlabState};
use super::forms::{cell_scaling, dot, face_jacobian, face_size, face_slot, matvec3, phys_grad, traction, FormMatrices, LocalTables};
use super::params::{Material, NitscheParams};
use super::slab::{Formulation, FIELD_P, FIELD_U, FIELD_V};
use crate::error::{Error, Result};
use crate::femcore::{MixedSpace, Pair, TimeBasis};
use crate::meshkit::{MeshLevel, PBc, UBc};

fn finite3(v: [f64; 3], what: &'static str, x: &[f64; 3], t: f64) -> Result<[f64; 3]> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(Error::NonFiniteData { what, x: *x, t })
    }
}

fn finite(v: f64, what: &'static str, x: &[f64; 3], t: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteData { what, x: *x, t })
    }
}

/// Evaluates the load functionals of one level.
pub struct RhsAssembler<'a> {
    pub mesh: &'a MeshLevel,
    pub space: &'a MixedSpace,
    pub mat: &'a Material,
    pub nit: &'a NitscheParams,
    tables: LocalTables,
}

impl<'a> RhsAssembler<'a> {
    pub fn new(mesh: &'a MeshLevel, space: &'a MixedSpace, mat: &'a Material, nit: &'a NitscheParams) -> Self {
        // one extra point per direction for non-polynomial data
        let tables = LocalTables::new(space, mesh.dim, space.r + 2);
        Self { mesh, space, mat, nit, tables }
    }

    /// Momentum functional F(t) and mass functional G(t) at one time.
    pub fn functionals(&self, data: &dyn ProblemData, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let mesh = self.mesh;
        let space = self.space;
        let mat = self.mat;
        let dim = mesh.dim;
        let tb = &self.tables;
        let (jac, det) = cell_scaling(mesh);
        let nvl = space.v.scalar.n_local();
        let nql = space.q.n_local();
        let mut f = vec![0.0; space.v.n_dofs()];
        let mut g = vec![0.0; space.q.n_dofs];

        for ci in 0..mesh.n_cells() {
            let vd = space.v.cell_dofs(ci);
            let qd = space.q.cell_dofs(ci);
            for q in 0..tb.quad.len() {
                let x = mesh.map_to_physical(ci, &tb.quad.points[q]);
                let w = tb.quad.weights[q] * det;
                let bf = finite3(data.body_force(&x, t), "body force", &x, t)?;
                let src = finite(data.source(&x, t), "source", &x, t)?;
                for i in 0..nvl {
                    let vi = tb.v.val(q, i);
                    for c in 0..dim {
                        f[vd[i * dim + c]] += w * mat.rho * bf[c] * vi;
                    }
                }
                for s in 0..nql {
                    g[qd[s]] += w * src * tb.q.val(q, s);
                }
            }
        }

        let mut gv = vec![[0.0; 3]; nvl];
        for face in mesh.faces.iter() {
            let Some(tag) = face.tag else { continue };
            let ci = face.cell;
            let vd = space.v.cell_dofs(ci);
            let qd = space.q.cell_dofs(ci);
            let slot = face_slot(face.axis, face.positive);
            let fq = &tb.face_quad[slot];
            let tv = &tb.face_v[slot];
            let tq = &tb.face_q[slot];
            let fdet = face_jacobian(mesh, face.axis);
            let hf = face_size(mesh, face, self.nit.face_size);
            let n = face.normal();
            for q in 0..fq.len() {
                let x = mesh.map_to_physical(ci, &fq.points[q]);
                let w = fq.weights[q] * fdet;
                for i in 0..nvl {
                    gv[i] = phys_grad(tv.grad(q, i), &jac);
                }
                match tag.u {
                    UBc::Neumann => {
                        let tn = finite3(data.traction(&x, t), "traction", &x, t)?;
                        for i in 0..nvl {
                            let vi = tv.val(q, i);
                            for c in 0..dim {
                                f[vd[i * dim + c]] -= w * tn[c] * vi;
                            }
                        }
                    }
                    UBc::Dirichlet => {
                        let ud = finite3(data.u_dirichlet(&x, t), "displacement boundary value", &x, t)?;
                        let vdir = finite3(data.v_dirichlet(&x, t), "velocity boundary value", &x, t)?;
                        for i in 0..nvl {
                            let vi = tv.val(q, i);
                            for b in 0..dim {
                                // -<u_D, C eps(phi e_b) n> + gamma_a / h_F <u_D, phi e_b>
                                let mut s = self.nit.gamma_a / hf * ud[b] * vi;
                                for c in 0..dim {
                                    s -= ud[c] * traction(mat, &gv[i], &n, c, b);
                                }
                                f[vd[i * dim + b]] += w * s;
                            }
                        }
                        let vn: f64 = (0..dim).map(|c| vdir[c] * n[c]).sum();
                        for s in 0..nql {
                            g[qd[s]] -= w * mat.alpha * vn * tq.val(q, s);
                        }
                    }
                    UBc::Directional => {
                        let ud = finite3(data.u_dirichlet(&x, t), "displacement boundary value", &x, t)?;
                        let un: f64 = (0..dim).map(|c| ud[c] * n[c]).sum();
                        if un != 0.0 {
                            for i in 0..nvl {
                                let vi = tv.val(q, i);
                                for b in 0..dim {
                                    let si: f64 = (0..dim).map(|e| traction(mat, &gv[i], &n, e, b) * n[e]).sum();
                                    f[vd[i * dim + b]] += w * (-un * si + self.nit.gamma_a / hf * un * vi * n[b]);
                                }
                            }
                        }
                    }
                }
                match tag.p {
                    PBc::Neumann => {
                        let pn = finite(data.p_flux(&x, t), "pressure flux", &x, t)?;
                        for s in 0..nql {
                            g[qd[s]] -= w * pn * tq.val(q, s);
                        }
                    }
                    PBc::Dirichlet => {
                        let pd = finite(data.p_dirichlet(&x, t), "pressure boundary value", &x, t)?;
                        let pen = match space.pair {
                            Pair::Qq => self.nit.gamma_b,
                            Pair::Qpdisc => self.nit.gamma,
                        };
                        for s in 0..nql {
                            let gs = phys_grad(tq.grad(q, s), &jac);
                            let fs = dot(&matvec3(&mat.permeability, &gs), &n);
                            g[qd[s]] += w * (-pd * fs + pen / hf * pd * tq.val(q, s));
                        }
                    }
                }
            }
        }
        Ok((f, g))
    }

    /// Normal displacement trace -alpha <u_D(t) . n, psi> on Dirichlet faces.
    pub fn dirichlet_normal_trace(&self, data: &dyn ProblemData, t: f64) -> Result<Vec<f64>> {
        let mesh = self.mesh;
        let tb = &self.tables;
        let mut g = vec![0.0; self.space.q.n_dofs];
        for face in mesh.faces.iter() {
            let Some(tag) = face.tag else { continue };
            if tag.u != UBc::Dirichlet {
                continue;
            }
            let qd = self.space.q.cell_dofs(face.cell);
            let slot = face_slot(face.axis, face.positive);
            let fq = &tb.face_quad[slot];
            let fdet = face_jacobian(mesh, face.axis);
            let n = face.normal();
            for q in 0..fq.len() {
                let x = mesh.map_to_physical(face.cell, &fq.points[q]);
                let ud = finite3(data.u_dirichlet(&x, t), "displacement boundary value", &x, t)?;
                let un: f64 = (0..mesh.dim).map(|c| ud[c] * n[c]).sum();
                for s in 0..qd.len() {
                    g[qd[s]] -= fq.weights[q] * fdet * self.mat.alpha * un * tb.face_q[slot].val(q, s);
                }
            }
        }
        Ok(g)
    }

    /// Full slab right-hand side for the slab (t0, t0 + tau].
    pub fn slab_rhs(
        &self,
        data: &dyn ProblemData,
        forms: &FormMatrices,
        tb: &TimeBasis,
        formulation: Formulation,
        prev: &SlabState,
        tau: f64,
    ) -> Result<Vec<f64>> {
        let n_v = self.space.v.n_dofs();
        let n_q = self.space.q.n_dofs;
        let nb = 2 * n_v + n_q;
        let nt = tb.n_points();
        let t0 = prev.t;
        let w0 = tb.w0(tau);
        let times = tb.times(t0, tau);
        let mut rhs = vec![0.0; nt * nb];

        let mu_prev = forms.mass_v.matvec(&prev.u);
        let mv_prev = forms.mass_v.matvec(&prev.v);
        let mp_prev = forms.mass_q.matvec(&prev.p);
        let ds_prev = if formulation == Formulation::Ds {
            let mut d = self.dirichlet_normal_trace(data, t0)?;
            forms.c_vol.mul_add(-1.0, &prev.u, &mut d);
            Some(d)
        } else {
            None
        };
        let ov = FIELD_V * n_v;
        let ou = FIELD_U * n_v;
        let op = FIELD_P * n_v;
        for m in 0..nt {
            let (f, g) = self.functionals(data, times[m])?;
            let jump = tb.at_start[m];
            let blk = &mut rhs[m * nb..(m + 1) * nb];
            // row offsets coincide with the column offsets of V, U, P
            for i in 0..n_v {
                blk[ov + i] = jump * mu_prev[i];
                blk[ou + i] = w0[m] * f[i] + jump * mv_prev[i];
            }
            for i in 0..n_q {
                blk[op + i] = w0[m] * g[i] + jump * mp_prev[i];
            }
            if let Some(d) = &ds_prev {
                for i in 0..n_q {
                    blk[op + i] += jump * d[i];
                }
            }
        }
        Ok(rhs)
    }
}
