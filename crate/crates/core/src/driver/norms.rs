//! Space-time error norms and orders of convergence.

use crate::assembly::forms::{cell_scaling, phys_grad};
use crate::assembly::slab::{FIELD_P, FIELD_U, FIELD_V};
use crate::assembly::{ExactSolution, Level};
use crate::femcore::{gauss_legendre, tensor_gauss, QuadratureNd, Tabulation, TimeBasis};
use rayon::prelude::*;

/// Errors of (grad u, v, p) in one norm.
pub type FieldErrors = [f64; 3];

/// Errors of the three fields in L2(L2), sampled Linf(L2) and at the time nodes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport {
    pub l2l2: FieldErrors,
    pub linf: FieldErrors,
    pub lnodes: FieldErrors,
}

/// Experimental orders log2(e_{i-1} / e_i); `None` where undefined.
pub fn compute_eoc(errors: &[f64]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| {
            if w[0] > 0.0 && w[1] > 0.0 && w[0].is_finite() && w[1].is_finite() {
                Some((w[0] / w[1]).log2())
            } else {
                None
            }
        })
        .collect()
}

/// Accumulates errors slab by slab.
pub struct ErrorIntegrator<'a> {
    level: &'a Level,
    exact: &'a dyn ExactSolution,
    quad: QuadratureNd,
    v_tab: Tabulation,
    q_tab: Tabulation,
    /// reference times (in [-1, 1]) of the L2 rule, the samples and the end point
    l2_rule: (Vec<f64>, Vec<f64>),
    samples: Vec<f64>,
    /// Lagrange values of the Radau basis at l2 nodes, samples, end point
    basis_l2: Vec<Vec<f64>>,
    basis_samples: Vec<Vec<f64>>,
    l2_sq: [f64; 3],
    report: ErrorReport,
}

impl<'a> ErrorIntegrator<'a> {
    /// `time_points` is the Gauss rule size used for L2 in time and
    /// `samples` the number of Gauss sample times per slab for Linf.
    pub fn new(level: &'a Level, tb: &TimeBasis, exact: &'a dyn ExactSolution, time_points: usize, samples: usize) -> Self {
        let quad = tensor_gauss(level.mesh.dim, level.space.r + 2);
        let v_tab = Tabulation::new(&level.space.v.scalar.ref_space, &quad);
        let q_tab = Tabulation::new(&level.space.q.ref_space, &quad);
        let rule = gauss_legendre(time_points);
        let samples: Vec<f64> = if samples == 0 { Vec::new() } else { gauss_legendre(samples).points.clone() };
        let basis_l2 = rule.points.iter().map(|&x| tb.values(x)).collect();
        let basis_samples = samples.iter().map(|&x| tb.values(x)).collect();
        Self {
            level,
            exact,
            quad,
            v_tab,
            q_tab,
            l2_rule: (rule.points.clone(), rule.weights.clone()),
            samples,
            basis_l2,
            basis_samples,
            l2_sq: [0.0; 3],
            report: ErrorReport::default(),
        }
    }

    /// Add the slab (t0, t0 + tau] with coefficient vector `x`.
    pub fn add_slab(&mut self, t0: f64, tau: f64, x: &[f64]) {
        let level = self.level;
        let mesh = &level.mesh;
        let dim = mesh.dim;
        let nb = level.block_size();
        let n_v = level.space.v.n_dofs();
        let nt = x.len() / nb;
        let (jac, det) = cell_scaling(mesh);
        let nvl = level.space.v.scalar.n_local();
        let nql = level.space.q.n_local();
        let n_l2 = self.l2_rule.0.len();
        let n_s = self.samples.len();
        let time_of = |xr: f64| t0 + 0.5 * tau * (1.0 + xr);
        let this = &*self;

        // per cell: weighted l2 sums, per-sample squared norms, end-point squared norm
        let per_cell: Vec<([f64; 3], Vec<[f64; 3]>, [f64; 3])> = (0..mesh.n_cells())
            .into_par_iter()
            .map(|ci| {
                let vd = level.space.v.cell_dofs(ci);
                let qd = level.space.q.cell_dofs(ci);
                let mut l2 = [0.0; 3];
                let mut samp = vec![[0.0; 3]; n_s];
                let mut end = [0.0; 3];
                let mut gu = vec![[[0.0; 3]; 3]; nt];
                let mut vv = vec![[0.0; 3]; nt];
                let mut pp = vec![0.0; nt];
                for q in 0..this.quad.len() {
                    let xq = mesh.map_to_physical(ci, &this.quad.points[q]);
                    let wq = this.quad.weights[q] * det;
                    for m in 0..nt {
                        let blk = &x[m * nb..(m + 1) * nb];
                        let (ou, ov, op) = (FIELD_U * n_v, FIELD_V * n_v, FIELD_P * n_v);
                        gu[m] = [[0.0; 3]; 3];
                        vv[m] = [0.0; 3];
                        pp[m] = 0.0;
                        for i in 0..nvl {
                            let phi = this.v_tab.val(q, i);
                            let g = phys_grad(this.v_tab.grad(q, i), &jac);
                            for c in 0..dim {
                                let dof = vd[i * dim + c];
                                let uc = blk[ou + dof];
                                for a in 0..dim {
                                    gu[m][c][a] += uc * g[a];
                                }
                                vv[m][c] += blk[ov + dof] * phi;
                            }
                        }
                        for s in 0..nql {
                            pp[m] += blk[op + qd[s]] * this.q_tab.val(q, s);
                        }
                    }
                    let err = |l: &[f64], t: f64| -> [f64; 3] {
                        let eg = this.exact.grad_u(&xq, t);
                        let ev = this.exact.v(&xq, t);
                        let ep = this.exact.p(&xq, t);
                        let (mut e0, mut e1) = (0.0, 0.0);
                        for c in 0..dim {
                            for a in 0..dim {
                                let h: f64 = (0..nt).map(|m| l[m] * gu[m][c][a]).sum();
                                e0 += (eg[c][a] - h).powi(2);
                            }
                            let h: f64 = (0..nt).map(|m| l[m] * vv[m][c]).sum();
                            e1 += (ev[c] - h).powi(2);
                        }
                        let h: f64 = (0..nt).map(|m| l[m] * pp[m]).sum();
                        [e0, e1, (ep - h).powi(2)]
                    };
                    for j in 0..n_l2 {
                        let e = err(&this.basis_l2[j], time_of(this.l2_rule.0[j]));
                        let w = 0.5 * tau * this.l2_rule.1[j] * wq;
                        for f in 0..3 {
                            l2[f] += w * e[f];
                        }
                    }
                    for s in 0..n_s {
                        let e = err(&this.basis_samples[s], time_of(this.samples[s]));
                        for f in 0..3 {
                            samp[s][f] += wq * e[f];
                        }
                    }
                    let mut last = vec![0.0; nt];
                    last[nt - 1] = 1.0;
                    let e = err(&last, t0 + tau);
                    for f in 0..3 {
                        end[f] += wq * e[f];
                    }
                }
                (l2, samp, end)
            })
            .collect();

        let mut samp_tot = vec![[0.0; 3]; n_s];
        let mut end_tot = [0.0; 3];
        for (l2, samp, end) in per_cell {
            for f in 0..3 {
                self.l2_sq[f] += l2[f];
                end_tot[f] += end[f];
                for s in 0..n_s {
                    samp_tot[s][f] += samp[s][f];
                }
            }
        }
        for f in 0..3 {
            self.report.lnodes[f] = self.report.lnodes[f].max(end_tot[f].sqrt());
            for s in samp_tot.iter() {
                self.report.linf[f] = self.report.linf[f].max(s[f].sqrt());
            }
        }
    }

    pub fn report(&self) -> ErrorReport {
        let mut r = self.report;
        for f in 0..3 {
            r.l2l2[f] = self.l2_sq[f].sqrt();
        }
        r
    }
}
