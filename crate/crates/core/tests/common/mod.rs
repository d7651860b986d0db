//! Checks shared by the invariant tests and the acceptance report. Each
//! returns a short description of what was measured, or the violation.
#![allow(dead_code)]

use biot_stfem::assembly::diagnostics::coercivity_diagnostic;
use biot_stfem::assembly::projection::project_initial_data;
use biot_stfem::assembly::{Formulation, Level, Material, NitscheParams, ProblemData, SlabOperator, ZeroData};
use biot_stfem::config::RunConfig;
use biot_stfem::driver::{compute_eoc, discrete_energy, DirectSlabSolver, GoalEvaluator, Marcher};
use biot_stfem::experiment::{run, RunSummary};
use biot_stfem::femcore::{gauss_radau_right, MixedSpace, Pair, TimeBasis};
use biot_stfem::krylov_mg::vanka::patch_dofs;
use biot_stfem::krylov_mg::{PatchKind, PatchSolver, Transfer, VankaSmoother};
use biot_stfem::meshkit::{DomainSpec, MeshHierarchy};
use std::path::{Path, PathBuf};

pub type Check = Result<String, String>;

pub fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets").join(format!("{name}.toml"))
}

/// Load a preset, restrict its levels and send outputs to `out`.
pub fn preset_config(name: &str, levels: [usize; 2], out: &Path) -> RunConfig {
    let mut c = RunConfig::load(&preset(name)).expect("preset parses");
    c.refinements = levels;
    c.output.dir = out.to_path_buf();
    c
}

pub fn run_preset(name: &str, levels: [usize; 2], out: &Path) -> RunSummary {
    run(&preset_config(name, levels, out)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Deterministic pseudo-random vector in [-1, 1).
pub fn pseudo_random(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..n)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

fn level_2d(cells: usize, refinements: usize, r: usize, pair: Pair) -> (MeshHierarchy, Vec<Level>) {
    let mat = Material::convergence_default();
    let nit = NitscheParams::defaults(r);
    let h = MeshHierarchy::build(&DomainSpec::unit_square(cells), refinements).unwrap();
    let levels = h.levels.iter().map(|m| Level::new(m, r, pair, &mat, &nit)).collect();
    (h, levels)
}

/// n-point right Radau rule integrates x^d on [-1, 1] exactly for d <= 2n - 2.
pub fn radau_exactness() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..=5 {
        let rule = gauss_radau_right(k + 1);
        for d in 0..=2 * k {
            let exact = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
            let q: f64 = rule.points.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(d as i32)).sum();
            worst = worst.max((q - exact).abs());
        }
    }
    if worst <= 1e-13 {
        Ok(format!("max error {worst:.1e} for k <= 5"))
    } else {
        Err(format!("max error {worst:.1e}"))
    }
}

/// A, B and the masses are symmetric; the stored transpose of C matches C.
pub fn form_symmetry() -> Check {
    let mut worst: f64 = 0.0;
    for pair in [Pair::Qq, Pair::Qpdisc] {
        for r in [2, 3] {
            let (_, lv) = level_2d(3, 0, r, pair);
            let f = &lv[0].forms;
            for m in [&f.a, &f.b, &f.mass_v, &f.mass_q] {
                let scale = m.to_dense().iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
                worst = worst.max(m.asymmetry() / scale);
            }
            let ct = f.c.transpose();
            let scale = ct.to_dense().iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
            let (dc, ds) = (ct.to_dense(), f.ct.to_dense());
            for (ra, rb) in dc.iter().zip(&ds) {
                for (a, b) in ra.iter().zip(rb) {
                    worst = worst.max((a - b).abs() / scale);
                }
            }
        }
    }
    if worst <= 1e-12 {
        Ok(format!("max relative asymmetry {worst:.1e}"))
    } else {
        Err(format!("max relative asymmetry {worst:.1e}"))
    }
}

/// Smallest eigenvalues of A and B at the default penalties.
pub fn coercivity() -> Check {
    let mut out = Vec::new();
    for pair in [Pair::Qq, Pair::Qpdisc] {
        for r in [2, 3] {
            let (_, lv) = level_2d(2, 0, r, pair);
            let (la, lb) = coercivity_diagnostic(&lv[0].forms);
            if !(la > 0.0 && lb > 0.0) {
                return Err(format!("{pair:?} r = {r}: lambda_min(A) = {la:.3e}, lambda_min(B) = {lb:.3e}"));
            }
            out.push(format!("{la:.2e}/{lb:.2e}"));
        }
    }
    Ok(format!("lambda_min(A)/lambda_min(B) = {}", out.join(", ")))
}

fn slab_op(level: &Level, k: usize) -> SlabOperator {
    SlabOperator::new(&level.forms, &TimeBasis::new(k), 0.05, Formulation::Dsa)
}

/// The smoother leaves the exact solution unchanged.
pub fn vanka_fixed_point() -> Check {
    for pair in [Pair::Qq, Pair::Qpdisc] {
        let (_, lv) = level_2d(3, 0, 2, pair);
        let op = slab_op(&lv[0], 1);
        let dofs = patch_dofs(&lv[0].mesh, &lv[0].space, PatchKind::Vertex);
        let sm = VankaSmoother::new(&op, dofs, 0.7, 3, PatchSolver::TimeDiagonal).map_err(|e| e.to_string())?;
        let x = pseudo_random(op.dim(), 3);
        let mut b = vec![0.0; op.dim()];
        op.apply(&x, &mut b);
        let mut d = x.clone();
        sm.smooth(&op, &b, &mut d);
        let diff = d.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if diff > 1e-9 {
            return Err(format!("{pair:?}: smoothing moved the exact solution by {diff:.1e}"));
        }
    }
    Ok("exact solutions are fixed points for both pairs".into())
}

/// Averaging counts equal the number of vertex patches whose cells
/// contain the support point of each unknown, found geometrically.
pub fn averaging_counts() -> Check {
    let (h, lv) = level_2d(4, 0, 2, Pair::Qpdisc);
    let mesh = &h.levels[0];
    let space: &MixedSpace = &lv[0].space;
    let op = slab_op(&lv[0], 1);
    let sm = VankaSmoother::new(&op, patch_dofs(mesh, space, PatchKind::Vertex), 0.7, 1, PatchSolver::TimeDiagonal)
        .map_err(|e| e.to_string())?;
    let counts = sm.counts();
    let dim = mesh.dim;
    let eps = 1e-12;
    let inside = |ci: usize, x: &[f64; 3]| (0..dim).all(|a| x[a] >= mesh.cells[ci].lower[a] - eps && x[a] <= mesh.cells[ci].lower[a] + mesh.h[a] + eps);
    let vertices_around = |cells: &[usize]| {
        let mut v: Vec<usize> = cells.iter().flat_map(|&c| mesh.cells[c].vertices[..1 << dim].to_vec()).collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    let n_v = space.v.n_dofs();
    for (node, x) in space.v.scalar.node_coords.iter().enumerate() {
        let cells: Vec<usize> = (0..mesh.n_cells()).filter(|&c| inside(c, x)).collect();
        let expected = vertices_around(&cells);
        for c in 0..dim {
            for field in [0, 1] {
                let got = counts[field * n_v + node * dim + c];
                if got != expected {
                    return Err(format!("velocity node {node}: count {got}, expected {expected}"));
                }
            }
        }
    }
    for ci in 0..mesh.n_cells() {
        for &q in space.q.cell_dofs(ci) {
            if counts[2 * n_v + q] != 1 << dim {
                return Err(format!("pressure dof {q}: count {}, expected {}", counts[2 * n_v + q], 1 << dim));
            }
        }
    }
    Ok(format!("{} unknowns checked", counts.len()))
}

/// <P x, y> = <x, R y> for random coarse x and fine y.
pub fn transfer_transpose() -> Check {
    let mut worst: f64 = 0.0;
    for pair in [Pair::Qq, Pair::Qpdisc] {
        for spec in [DomainSpec::unit_square(2), DomainSpec::lshape3d()] {
            let h = MeshHierarchy::build(&spec, 1).unwrap();
            let cs = MixedSpace::new(&h.levels[0], 2, pair);
            let fs = MixedSpace::new(&h.levels[1], 2, pair);
            let t = Transfer::new(&h.levels[0], &cs, &h.levels[1], &fs);
            let x = pseudo_random(2 * cs.block_size(), 11);
            let y = pseudo_random(2 * fs.block_size(), 12);
            let lhs: f64 = t.prolongate(&x).iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs: f64 = x.iter().zip(&t.restrict(&y)).map(|(a, b)| a * b).sum();
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
        }
    }
    if worst <= 1e-12 {
        Ok(format!("max relative defect {worst:.1e}"))
    } else {
        Err(format!("max relative defect {worst:.1e}"))
    }
}

/// Smooth nonzero initial state, homogeneous data otherwise.
struct InitialOnly;

impl ProblemData for InitialOnly {
    fn initial_u(&self, x: &[f64; 3]) -> [f64; 3] {
        [(3.0 * x[0]).sin() * x[1], (2.0 * x[1]).cos() * x[0], 0.0]
    }
    fn initial_v(&self, x: &[f64; 3]) -> [f64; 3] {
        [x[0] * x[1], 1.0 - x[0], 0.0]
    }
    fn initial_p(&self, x: &[f64; 3]) -> f64 {
        (4.0 * x[0] * x[1]).sin() + 0.5
    }
}

/// E_n <= E_{n-1} (1 + 1e-10) for homogeneous data, k in {0, 1, 2}, both
/// formulations and both pairs.
pub fn energy_monotonicity() -> Check {
    let mat = Material::convergence_default();
    let r = 2;
    let nit = NitscheParams::defaults(r);
    let h = MeshHierarchy::build(&DomainSpec::unit_square(4), 0).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for pair in [Pair::Qq, Pair::Qpdisc] {
        let level = Level::new(&h.levels[0], r, pair, &mat, &nit);
        let init = project_initial_data(&level.mesh, &level.space, &InitialOnly, 0.0);
        let e0 = discrete_energy(&init, &level.forms);
        for k in 0..=2 {
            for formulation in [Formulation::Dsa, Formulation::Ds] {
                let marcher = Marcher::new(&level, &mat, &nit, k, 0.05, formulation);
                let mut solver = DirectSlabSolver::new(&marcher.op).map_err(|e| e.to_string())?;
                let mut prev = e0;
                let mut failure = None;
                marcher
                    .run(&ZeroData, init.clone(), 20, &mut solver, |rec| {
                        let e = discrete_energy(rec.end, &level.forms);
                        let growth = e / prev - 1.0;
                        worst = worst.max(growth);
                        if growth > 1e-10 && failure.is_none() {
                            failure = Some(format!("{pair:?} k = {k} {formulation:?}: E grew by {growth:.2e} at slab {}", rec.index));
                        }
                        prev = e;
                        Ok(())
                    })
                    .map_err(|e| e.to_string())?;
                if let Some(f) = failure {
                    return Err(f);
                }
                if !(prev < e0) {
                    return Err(format!("{pair:?} k = {k} {formulation:?}: no decay ({e0:.3e} -> {prev:.3e})"));
                }
            }
        }
    }
    Ok(format!("largest relative growth per slab {worst:.1e}"))
}

/// Orders of two runs agree within `tol` for every field and norm.
pub fn same_orders(a: &RunSummary, b: &RunSummary, tol: f64) -> Check {
    let eocs = |s: &RunSummary| -> Vec<Vec<Option<f64>>> {
        let rows = s.convergence_rows();
        let mut out = Vec::new();
        for f in 0..3 {
            for sel in [|e: &biot_stfem::driver::ErrorReport| e.l2l2, |e: &biot_stfem::driver::ErrorReport| e.linf] {
                out.push(compute_eoc(&rows.iter().map(|r| sel(&r.errors)[f]).collect::<Vec<_>>()));
            }
        }
        out
    };
    let (ea, eb) = (eocs(a), eocs(b));
    let mut worst: f64 = 0.0;
    for (x, y) in ea.iter().flatten().zip(eb.iter().flatten()) {
        match (x, y) {
            (Some(x), Some(y)) => worst = worst.max((x - y).abs()),
            _ => return Err("undefined order".into()),
        }
    }
    if worst <= tol {
        Ok(format!("max EOC difference {worst:.3}"))
    } else {
        Err(format!("max EOC difference {worst:.3}"))
    }
}

/// Goal quantities of closed-form fields on the monitored face x = 1.
pub fn goal_quantities() -> Check {
    let h = MeshHierarchy::build(&DomainSpec::lshape3d(), 1).unwrap();
    let mesh = &h.levels[1];
    let space = MixedSpace::new(mesh, 2, Pair::Qpdisc);
    let goal = GoalEvaluator::new(mesh, &space).map_err(|e| e.to_string())?;
    let mut u = vec![0.0; space.v.n_dofs()];
    for (node, x) in space.v.scalar.node_coords.iter().enumerate() {
        u[node * 3] = x[0];
    }
    // the constant is the first Legendre mode of each cell
    let mut p = vec![0.0; space.q.n_dofs];
    for ci in 0..mesh.n_cells() {
        p[space.q.cell_dofs(ci)[0]] = 4.0;
    }
    let (bu, bp) = goal.evaluate(mesh, &space, &u, &p);
    if (bu - 0.25).abs() < 1e-12 && (bp - 1.0).abs() < 1e-12 {
        Ok(format!("b_u = {bu}, b_p = {bp}"))
    } else {
        Err(format!("b_u = {bu} (expected 0.25), b_p = {bp} (expected 1)"))
    }
}
