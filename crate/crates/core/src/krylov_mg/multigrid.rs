//! Geometric multigrid V-cycle in space for the slab systems, used as a
//! preconditioner of FGMRES.

use super::fgmres::{fgmres, FgmresParams, Preconditioner};
use super::transfer::Transfer;
use super::vanka::{patch_dofs, PatchKind, PatchSolver, VankaSmoother};
use super::DirectSolver;
use crate::assembly::{Formulation, Level, SlabOperator};
use crate::driver::march::{SlabSolver, SolveStats};
use crate::error::Result;
use crate::femcore::TimeBasis;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Smoother and cycle parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MgParams {
    pub omega: f64,
    /// smoothing sweeps before and after the coarse correction
    pub sweeps: usize,
    pub patch: PatchKind,
    pub patch_solver: PatchSolver,
}

impl Default for MgParams {
    fn default() -> Self {
        Self { omega: 0.7, sweeps: 4, patch: PatchKind::Vertex, patch_solver: PatchSolver::TimeDiagonal }
    }
}

/// Slab operators, smoothers and transfers on all levels; level 0 is
/// solved directly.
pub struct Multigrid {
    pub ops: Vec<SlabOperator>,
    smoothers: Vec<VankaSmoother>,
    transfers: Vec<Transfer>,
    coarse: DirectSolver,
}

impl std::fmt::Debug for Multigrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Multigrid").field("levels", &self.ops.len()).field("smoothers", &self.smoothers).finish()
    }
}

impl Multigrid {
    /// `levels` are ordered coarse to fine.
    pub fn new(levels: &[&Level], tb: &TimeBasis, tau: f64, formulation: Formulation, params: &MgParams) -> Result<Self> {
        let ops: Vec<SlabOperator> = levels.iter().map(|l| SlabOperator::new(&l.forms, tb, tau, formulation)).collect();
        let coarse = DirectSolver::new(&ops[0].to_csr())?;
        let mut smoothers = Vec::with_capacity(levels.len().saturating_sub(1));
        let mut transfers = Vec::with_capacity(levels.len().saturating_sub(1));
        for l in 1..levels.len() {
            let dofs = patch_dofs(&levels[l].mesh, &levels[l].space, params.patch);
            smoothers.push(VankaSmoother::new(&ops[l], dofs, params.omega, params.sweeps, params.patch_solver)?);
            transfers.push(Transfer::new(&levels[l - 1].mesh, &levels[l - 1].space, &levels[l].mesh, &levels[l].space));
        }
        Ok(Self { ops, smoothers, transfers, coarse })
    }

    pub fn finest(&self) -> &SlabOperator {
        self.ops.last().expect("at least one level")
    }

    pub fn n_levels(&self) -> usize {
        self.ops.len()
    }

    /// One V-cycle for A_l d = b on level `l` from a zero initial guess.
    pub fn vcycle(&self, l: usize, b: &[f64]) -> Vec<f64> {
        if l == 0 {
            return self.coarse.solve(b);
        }
        let op = &self.ops[l];
        let smoother = &self.smoothers[l - 1];
        let transfer = &self.transfers[l - 1];
        let mut d = vec![0.0; b.len()];
        smoother.smooth(op, b, &mut d);
        let mut r = vec![0.0; b.len()];
        op.apply(&d, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let correction = transfer.prolongate(&self.vcycle(l - 1, &transfer.restrict(&r)));
        for (di, ci) in d.iter_mut().zip(&correction) {
            *di += ci;
        }
        smoother.smooth(op, b, &mut d);
        d
    }
}

/// V-cycle on the finest level as a preconditioner.
pub struct VCycle<'a>(pub &'a Multigrid);

impl Preconditioner for VCycle<'_> {
    fn apply(&mut self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(&self.0.vcycle(self.0.n_levels() - 1, r));
    }
}

/// FGMRES with the multigrid preconditioner.
pub struct GmgSlabSolver {
    pub mg: Multigrid,
    pub params: FgmresParams,
}

impl GmgSlabSolver {
    pub fn new(mg: Multigrid, params: FgmresParams) -> Self {
        Self { mg, params }
    }
}

impl SlabSolver for GmgSlabSolver {
    fn solve(&mut self, rhs: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        let start = Instant::now();
        let res = fgmres(self.mg.finest(), &mut VCycle(&self.mg), rhs, &self.params);
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok((res.x, SolveStats { iterations: res.iterations, initial_residual: res.history[0], residual: res.residual, converged: res.converged, wall_ms }))
    }
}
