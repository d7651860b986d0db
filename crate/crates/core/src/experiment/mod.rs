//! Runs described by a [`RunConfig`]: convergence studies on manufactured
//! solutions and the loaded L-shape with goal quantities.

pub mod output;

pub use output::{read_measurements, write_convergence, write_productivity, write_vtk, ConvergenceRow, EnergyCounter};

use crate::assembly::projection::project_initial_data;
use crate::assembly::{ExactSolution, Level, ProblemData, SlabState};
use crate::config::{ProblemKind, RunConfig, SolverKind};
use crate::driver::{
    discrete_energy, perf_model, DirectSlabSolver, ErrorIntegrator, ErrorReport, GoalEvaluator, InitialFromExact, LShapeLoad,
    Manufactured, Marcher, Measurement, SlabSolver, SolveStats,
};
use crate::error::{Error, Result};
use crate::krylov_mg::{GmgSlabSolver, Multigrid};
use crate::meshkit::{DomainSpec, MeshHierarchy};
use std::path::Path;
use std::time::Instant;

/// Problem data of a run.
pub enum Problem {
    Manufactured(Manufactured),
    Load(LShapeLoad),
}

impl Problem {
    pub fn from_config(cfg: &RunConfig) -> Self {
        let mat = cfg.material();
        match cfg.problem {
            ProblemKind::Lshape3d => Problem::Load(LShapeLoad { amplitude: cfg.load.amplitude, omega: cfg.load.omega }),
            kind => {
                let m = cfg.manufactured.expect("validated manufactured section");
                Problem::Manufactured(match kind {
                    ProblemKind::Conv1 => Manufactured::conv1(mat, m.omega1, m.omega2, m.direction),
                    _ => Manufactured::conv2(mat, m.omega1, m.omega2),
                })
            }
        }
    }

    pub fn data(&self) -> &dyn ProblemData {
        match self {
            Problem::Manufactured(m) => m,
            Problem::Load(l) => l,
        }
    }

    pub fn exact(&self) -> Option<&dyn ExactSolution> {
        match self {
            Problem::Manufactured(m) => Some(m),
            Problem::Load(_) => None,
        }
    }
}

pub fn domain(cfg: &RunConfig) -> DomainSpec {
    match cfg.problem {
        ProblemKind::Lshape3d => DomainSpec::lshape3d(),
        _ => DomainSpec::unit_square(cfg.base_cells),
    }
}

/// Goal quantities at the end of one slab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalSample {
    pub t: f64,
    pub b_u: f64,
    pub b_p: f64,
}

/// Outcome of one run level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    pub mesh_level: usize,
    pub tau: f64,
    pub h: f64,
    pub dofs_per_slab: usize,
    pub slabs: Vec<SolveStats>,
    pub errors: Option<ErrorReport>,
    pub goal: Vec<GoalSample>,
    pub setup_s: f64,
    pub wall_s: f64,
}

impl LevelResult {
    pub fn mean_iterations(&self) -> f64 {
        if self.slabs.is_empty() {
            return 0.0;
        }
        self.slabs.iter().map(|s| s.iterations as f64).sum::<f64>() / self.slabs.len() as f64
    }

    /// (min, max) of b_u and of b_p.
    pub fn goal_range(&self) -> Option<([f64; 2], [f64; 2])> {
        let first = self.goal.first()?;
        let mut bu = [first.b_u; 2];
        let mut bp = [first.b_p; 2];
        for g in &self.goal {
            bu = [bu[0].min(g.b_u), bu[1].max(g.b_u)];
            bp = [bp[0].min(g.b_p), bp[1].max(g.b_p)];
        }
        Some((bu, bp))
    }
}

/// All levels of a run plus timing and energy of the whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub levels: Vec<LevelResult>,
    pub wall_s: f64,
    pub energy_j: Option<f64>,
    pub threads: usize,
}

impl RunSummary {
    pub fn convergence_rows(&self) -> Vec<ConvergenceRow> {
        self.levels
            .iter()
            .filter_map(|l| l.errors.map(|errors| ConvergenceRow { level: l.level, tau: l.tau, h: l.h, errors }))
            .collect()
    }
}

/// Set the worker count of the rayon pool and the dense kernels. Returns
/// the number of threads in use.
pub fn configure_threads(threads: usize, deterministic: bool) -> usize {
    if threads > 0 {
        // fails only if the global pool already exists, which keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let n = rayon::current_num_threads();
    let par = if deterministic || n == 1 { faer::Par::Seq } else { faer::Par::rayon(n) };
    faer::set_global_parallelism(par);
    n
}

/// Records every solve, including one that did not converge.
struct Recording<'a> {
    inner: &'a mut dyn SlabSolver,
    log: Vec<SolveStats>,
}

impl SlabSolver for Recording<'_> {
    fn solve(&mut self, rhs: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        let (x, stats) = self.inner.solve(rhs)?;
        self.log.push(stats);
        Ok((x, stats))
    }
}

/// Open output files of a run.
struct Sinks {
    solver: csv::Writer<std::fs::File>,
    goal: Option<csv::Writer<std::fs::File>>,
}

/// Run all levels of `cfg`, writing outputs to `cfg.output.dir`. On solver
/// failure the rows gathered so far are written before the error is
/// returned.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let threads = configure_threads(cfg.threads, cfg.deterministic);
    let dir = &cfg.output.dir;
    std::fs::create_dir_all(dir)?;
    let meter = if cfg.output.energy { EnergyCounter::start() } else { None };
    let start = Instant::now();
    let problem = Problem::from_config(cfg);
    let max_mesh = cfg.levels().map(|l| cfg.level_setup(l).0).max().unwrap_or(0);
    let hierarchy = MeshHierarchy::build(&domain(cfg), max_mesh)?;
    let mut sinks = Sinks {
        solver: csv::Writer::from_path(dir.join("solver.csv"))?,
        goal: match problem {
            Problem::Load(_) => Some(csv::Writer::from_path(dir.join("goal.csv"))?),
            Problem::Manufactured(_) => None,
        },
    };
    sinks.solver.write_record(["level", "slab", "t", "iterations", "initial_residual", "residual", "wall_ms", "discrete_energy"])?;
    if let Some(g) = sinks.goal.as_mut() {
        g.write_record(["level", "t", "b_u", "b_p"])?;
    }
    let mut summary = RunSummary { levels: Vec::new(), wall_s: 0.0, energy_j: None, threads };
    let last = cfg.refinements[1];
    let mut outcome = Ok(());
    for l in cfg.levels() {
        match run_level(cfg, &problem, &hierarchy, l, l == last, &mut sinks) {
            Ok(res) => summary.levels.push(res),
            Err(e) => {
                outcome = Err(e);
                break;
            }
        }
        if problem.exact().is_some() {
            write_convergence(&dir.join("convergence.csv"), &summary.convergence_rows())?;
        }
    }
    sinks.solver.flush()?;
    if let Some(g) = sinks.goal.as_mut() {
        g.flush()?;
    }
    summary.wall_s = start.elapsed().as_secs_f64();
    summary.energy_j = meter.and_then(|m| m.joules());
    let perf = perf_model(&[Measurement { nodes: threads, wall: summary.wall_s, energy: summary.energy_j }])?;
    write_productivity(&dir.join("productivity.csv"), &perf)?;
    outcome.map(|_| summary)
}

fn run_level(cfg: &RunConfig, problem: &Problem, hierarchy: &MeshHierarchy, l: usize, finest: bool, sinks: &mut Sinks) -> Result<LevelResult> {
    let setup = Instant::now();
    let (mesh_level, tau) = cfg.level_setup(l);
    let mat = cfg.material();
    let nit = cfg.nitsche_params();
    let mesh = &hierarchy.levels[mesh_level];
    let level = Level::new(mesh, cfg.r, cfg.pair, &mat, &nit);
    let marcher = Marcher::new(&level, &mat, &nit, cfg.k, tau, cfg.formulation);
    let mut inner: Box<dyn SlabSolver> = match cfg.solver {
        SolverKind::Direct => Box::new(DirectSlabSolver::new(&marcher.op)?),
        SolverKind::Gmg => {
            let coarse = cfg.multigrid.coarse_level.min(mesh_level);
            let below: Vec<Level> = hierarchy.levels[coarse..mesh_level].iter().map(|m| Level::new(m, cfg.r, cfg.pair, &mat, &nit)).collect();
            let mut refs: Vec<&Level> = below.iter().collect();
            refs.push(&level);
            let mg = Multigrid::new(&refs, &marcher.tb, tau, cfg.formulation, &cfg.multigrid.params())?;
            Box::new(GmgSlabSolver::new(mg, cfg.fgmres.params()))
        }
    };
    let init = match problem.exact() {
        Some(exact) => project_initial_data(&level.mesh, &level.space, &InitialFromExact { exact, t0: cfg.t_start }, cfg.t_start),
        None => SlabState::zeros(cfg.t_start, level.space.v.n_dofs(), level.space.q.n_dofs),
    };
    let mut integrator = problem.exact().map(|e| ErrorIntegrator::new(&level, &marcher.tb, e, cfg.time_points(), cfg.norms.samples));
    let goal = match problem {
        Problem::Load(_) => Some(GoalEvaluator::new(&level.mesh, &level.space)?),
        Problem::Manufactured(_) => None,
    };
    let setup_s = setup.elapsed().as_secs_f64();
    let n_slabs = cfg.n_slabs(tau);
    let vtk = cfg.output.vtk && finest;
    let mut samples = Vec::new();
    let mut recording = Recording { inner: inner.as_mut(), log: Vec::new() };
    let wall = Instant::now();
    let result = marcher.run(problem.data(), init, n_slabs, &mut recording, |rec| {
        if let Some(integ) = integrator.as_mut() {
            integ.add_slab(rec.t0, rec.tau, rec.x);
        }
        let energy = discrete_energy(rec.end, &level.forms);
        let s = rec.stats;
        sinks.solver.write_record([
            l.to_string(),
            rec.index.to_string(),
            format!("{:.10e}", rec.end.t),
            s.iterations.to_string(),
            format!("{:.6e}", s.initial_residual),
            format!("{:.6e}", s.residual),
            format!("{:.3}", s.wall_ms),
            format!("{energy:.10e}"),
        ])?;
        if let (Some(g), Some(w)) = (goal.as_ref(), sinks.goal.as_mut()) {
            let (b_u, b_p) = g.evaluate(&level.mesh, &level.space, &rec.end.u, &rec.end.p);
            w.write_record([l.to_string(), format!("{:.10e}", rec.end.t), format!("{b_u:.10e}"), format!("{b_p:.10e}")])?;
            samples.push(GoalSample { t: rec.end.t, b_u, b_p });
        }
        if vtk && ((rec.index + 1) % cfg.output.vtk_every.max(1) == 0 || rec.index + 1 == n_slabs) {
            let path = cfg.output.dir.join(format!("solution_l{l}_{:05}.vtk", rec.index + 1));
            write_vtk(&path, &level.mesh, &level.space, &rec.end.u, &rec.end.v, &rec.end.p, rec.end.t)?;
        }
        Ok(())
    });
    if let Err(Error::NotConverged { slab, .. }) = &result {
        if let Some(s) = recording.log.last() {
            sinks.solver.write_record([
                l.to_string(),
                slab.to_string(),
                format!("{:.10e}", cfg.t_start + (*slab + 1) as f64 * tau),
                s.iterations.to_string(),
                format!("{:.6e}", s.initial_residual),
                format!("{:.6e}", s.residual),
                format!("{:.3}", s.wall_ms),
                String::new(),
            ])?;
        }
    }
    result?;
    Ok(LevelResult {
        level: l,
        mesh_level,
        tau,
        h: level.mesh.h[0],
        dofs_per_slab: marcher.op.dim(),
        slabs: recording.log,
        errors: integrator.map(|i| i.report()),
        goal: samples,
        setup_s,
        wall_s: wall.elapsed().as_secs_f64(),
    })
}

/// Evaluate the performance model on a measurements table and write
/// `productivity.csv` into `out`.
pub fn run_perf(measurements: &Path, out: &Path) -> Result<Vec<crate::driver::PerfRow>> {
    let rows = perf_model(&read_measurements(measurements)?)?;
    std::fs::create_dir_all(out)?;
    write_productivity(&out.join("productivity.csv"), &rows)?;
    Ok(rows)
}

/// Human-readable summary lines.
pub fn describe(summary: &RunSummary, mut w: impl std::io::Write) -> std::io::Result<()> {
    for l in &summary.levels {
        write!(w, "level {} (mesh {}, tau {:.4e}, h {:.4e}): {} dofs/slab, {} slabs, mean iterations {:.2}, {:.2}s", l.level, l.mesh_level, l.tau, l.h, l.dofs_per_slab, l.slabs.len(), l.mean_iterations(), l.wall_s)?;
        if let Some(e) = l.errors {
            write!(w, ", L2L2 errors {:.4e} {:.4e} {:.4e}", e.l2l2[0], e.l2l2[1], e.l2l2[2])?;
        }
        if let Some((bu, bp)) = l.goal_range() {
            write!(w, ", b_u in [{:.4e}, {:.4e}], b_p in [{:.4e}, {:.4e}]", bu[0], bu[1], bp[0], bp[1])?;
        }
        writeln!(w)?;
    }
    write!(w, "total {:.2}s on {} threads", summary.wall_s, summary.threads)?;
    if let Some(e) = summary.energy_j {
        write!(w, ", {e:.1} J")?;
    }
    writeln!(w)
}
