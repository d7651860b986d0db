//! Slab-by-slab time marching.

use crate::assembly::slab::{FIELD_P, FIELD_U, FIELD_V};
use crate::assembly::{Formulation, Level, Material, NitscheParams, ProblemData, RhsAssembler, SlabOperator, SlabState};
use crate::error::{Error, Result};
use crate::femcore::TimeBasis;
use crate::krylov_mg::DirectSolver;
use crate::sparse::Csr;
use std::time::Instant;

/// Outcome of one slab solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveStats {
    pub iterations: usize,
    /// residual norm of the zero initial guess, i.e. |F_n|
    pub initial_residual: f64,
    pub residual: f64,
    pub converged: bool,
    pub wall_ms: f64,
}

/// Solver of the slab system A_n X = F_n.
pub trait SlabSolver {
    fn solve(&mut self, rhs: &[f64]) -> Result<(Vec<f64>, SolveStats)>;
}

/// Sparse LU of the assembled slab matrix, factored once, with a few steps of
/// iterative refinement against the assembled matrix.
pub struct DirectSlabSolver {
    a: Csr,
    lu: DirectSolver,
    refinements: usize,
}

impl DirectSlabSolver {
    pub fn new(op: &SlabOperator) -> Result<Self> {
        let a = op.to_csr();
        let lu = DirectSolver::new(&a)?;
        Ok(Self { a, lu, refinements: 3 })
    }

    fn residual(&self, rhs: &[f64], x: &[f64]) -> Vec<f64> {
        let ax = self.a.matvec(x);
        rhs.iter().zip(&ax).map(|(b, y)| b - y).collect()
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl SlabSolver for DirectSlabSolver {
    fn solve(&mut self, rhs: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        let start = Instant::now();
        let mut x = self.lu.solve(rhs);
        let mut r = self.residual(rhs, &x);
        let mut res = norm(&r);
        let mut steps = 0;
        while steps < self.refinements && res > 0.0 {
            let dx = self.lu.solve(&r);
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
            let tr = self.residual(rhs, &trial);
            let tres = norm(&tr);
            if tres >= res {
                break;
            }
            x = trial;
            r = tr;
            res = tres;
            steps += 1;
        }
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok((x, SolveStats { iterations: steps, initial_residual: norm(rhs), residual: res, converged: true, wall_ms }))
    }
}

/// Trace of a slab solution at its right end point.
pub fn end_state(level: &Level, x: &[f64], t: f64) -> SlabState {
    let nb = level.block_size();
    let n_v = level.space.v.n_dofs();
    let n_q = level.space.q.n_dofs;
    let last = &x[x.len() - nb..];
    SlabState {
        t,
        u: last[FIELD_U * n_v..FIELD_U * n_v + n_v].to_vec(),
        v: last[FIELD_V * n_v..FIELD_V * n_v + n_v].to_vec(),
        p: last[FIELD_P * n_v..FIELD_P * n_v + n_q].to_vec(),
    }
}

/// Everything an observer sees after one slab.
pub struct SlabRecord<'a> {
    pub index: usize,
    pub t0: f64,
    pub tau: f64,
    pub x: &'a [f64],
    pub end: &'a SlabState,
    pub stats: SolveStats,
}

/// Fixed ingredients of a time march on one level.
pub struct Marcher<'a> {
    pub level: &'a Level,
    pub tb: TimeBasis,
    pub op: SlabOperator,
    pub formulation: Formulation,
    rhs: RhsAssembler<'a>,
}

impl<'a> Marcher<'a> {
    pub fn new(level: &'a Level, mat: &'a Material, nit: &'a NitscheParams, k: usize, tau: f64, formulation: Formulation) -> Self {
        let tb = TimeBasis::new(k);
        let op = SlabOperator::new(&level.forms, &tb, tau, formulation);
        let rhs = RhsAssembler::new(&level.mesh, &level.space, mat, nit);
        Self { level, tb, op, formulation, rhs }
    }

    pub fn tau(&self) -> f64 {
        self.op.tau
    }

    pub fn slab_rhs(&self, data: &dyn ProblemData, prev: &SlabState) -> Result<Vec<f64>> {
        self.rhs.slab_rhs(data, &self.level.forms, &self.tb, self.formulation, prev, self.op.tau)
    }

    /// March `n_slabs` slabs from `init`; slab n covers
    /// (t_start + n tau, t_start + (n+1) tau]. Returns the final trace.
    pub fn run(
        &self,
        data: &dyn ProblemData,
        init: SlabState,
        n_slabs: usize,
        solver: &mut dyn SlabSolver,
        mut observer: impl FnMut(&SlabRecord) -> Result<()>,
    ) -> Result<SlabState> {
        let t_start = init.t;
        let tau = self.op.tau;
        let mut state = init;
        for n in 0..n_slabs {
            let t0 = t_start + n as f64 * tau;
            state.t = t0;
            let rhs = self.slab_rhs(data, &state)?;
            let (x, stats) = solver.solve(&rhs)?;
            if !stats.converged {
                return Err(Error::NotConverged { slab: n, iterations: stats.iterations, residual: stats.residual });
            }
            let end = end_state(self.level, &x, t_start + (n + 1) as f64 * tau);
            observer(&SlabRecord { index: n, t0, tau, x: &x, end: &end, stats })?;
            state = end;
        }
        Ok(state)
    }
}
