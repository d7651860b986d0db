//! Goal quantities on the monitored boundary and the discrete energy.

use crate::assembly::forms::{face_jacobian, face_slot};
use crate::assembly::{FormMatrices, SlabState};
use crate::error::{Error, Result};
use crate::femcore::{face_gauss, MixedSpace, Tabulation};
use crate::meshkit::MeshLevel;

/// Evaluates the normal displacement and pressure integrals over the
/// monitored faces.
pub struct GoalEvaluator {
    faces: Vec<usize>,
    v_tabs: Vec<Tabulation>,
    q_tabs: Vec<Tabulation>,
    weights: Vec<Vec<f64>>,
    area: f64,
}

impl GoalEvaluator {
    pub fn new(mesh: &MeshLevel, space: &MixedSpace) -> Result<Self> {
        let faces: Vec<usize> = (0..mesh.faces.len())
            .filter(|&i| mesh.faces[i].tag.is_some_and(|t| t.monitor))
            .collect();
        if faces.is_empty() {
            return Err(Error::Mesh("no monitored boundary faces".into()));
        }
        let npts = space.r + 1;
        let mut v_tabs = Vec::new();
        let mut q_tabs = Vec::new();
        let mut weights = Vec::new();
        for axis in 0..mesh.dim {
            for positive in [false, true] {
                let fq = face_gauss(mesh.dim, npts, axis, positive);
                v_tabs.push(Tabulation::new(&space.v.scalar.ref_space, &fq));
                q_tabs.push(Tabulation::new(&space.q.ref_space, &fq));
                weights.push(fq.weights.iter().map(|w| w * face_jacobian(mesh, axis)).collect());
            }
        }
        let area = faces.iter().map(|&f| mesh.face_measure(&mesh.faces[f])).sum();
        Ok(Self { faces, v_tabs, q_tabs, weights, area })
    }

    /// Total measure of the monitored faces.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// (integral of u . n, integral of p) for coefficient vectors u and p.
    pub fn evaluate(&self, mesh: &MeshLevel, space: &MixedSpace, u: &[f64], p: &[f64]) -> (f64, f64) {
        let dim = mesh.dim;
        let (mut bu, mut bp) = (0.0, 0.0);
        for &fi in &self.faces {
            let face = &mesh.faces[fi];
            let slot = face_slot(face.axis, face.positive);
            let n = face.normal();
            let vd = space.v.cell_dofs(face.cell);
            let qd = space.q.cell_dofs(face.cell);
            let (tv, tq) = (&self.v_tabs[slot], &self.q_tabs[slot]);
            for (q, &w) in self.weights[slot].iter().enumerate() {
                let mut un = 0.0;
                for i in 0..space.v.scalar.n_local() {
                    let phi = tv.val(q, i);
                    for c in 0..dim {
                        un += u[vd[i * dim + c]] * phi * n[c];
                    }
                }
                let pv: f64 = qd.iter().enumerate().map(|(s, &d)| p[d] * tq.val(q, s)).sum();
                bu += w * un;
                bp += w * pv;
            }
        }
        (bu, bp)
    }
}

/// E = u^T A u + v^T M v + p^T M_Q p at one time node.
pub fn discrete_energy(state: &SlabState, forms: &FormMatrices) -> f64 {
    let quad = |m: &crate::sparse::Csr, x: &[f64]| -> f64 { m.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum() };
    quad(&forms.a, &state.u) + quad(&forms.mass_v, &state.v) + quad(&forms.mass_q, &state.p)
}
