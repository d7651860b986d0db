//! FGMRES with the geometric multigrid V-cycle on one slab system,
//! compared with the sparse direct solver, for a growing number of levels.
//!
//! cargo run --release --example multigrid_solver -- [max_level] [k] [qq|qpdisc]

use biot_stfem::assembly::{Formulation, Level, Material, NitscheParams};
use biot_stfem::driver::{DirectSlabSolver, SlabSolver};
use biot_stfem::femcore::{Pair, TimeBasis};
use biot_stfem::krylov_mg::{FgmresParams, GmgSlabSolver, MgParams, Multigrid};
use biot_stfem::meshkit::{DomainSpec, MeshHierarchy};

fn main() -> biot_stfem::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let max_level: usize = args.first().map_or(3, |s| s.parse().expect("max_level"));
    let k: usize = args.get(1).map_or(1, |s| s.parse().expect("k"));
    let pair: Pair = args.get(2).map_or(Pair::Qpdisc, |s| s.parse().expect("pair"));
    let r = 2;
    let mat = Material::convergence_default();
    let nit = NitscheParams::defaults(r);
    let hierarchy = MeshHierarchy::build(&DomainSpec::unit_square(2), max_level)?;
    let levels: Vec<Level> = hierarchy.levels.iter().map(|m| Level::new(m, r, pair, &mat, &nit)).collect();
    let tb = TimeBasis::new(k);
    for top in 1..=max_level {
        let tau = 0.1 / 2f64.powi(top as i32);
        let refs: Vec<&Level> = levels[..=top].iter().collect();
        let mg = Multigrid::new(&refs, &tb, tau, Formulation::Dsa, &MgParams::default())?;
        let n = mg.finest().dim();
        let b: Vec<f64> = (0..n).map(|i| ((i * 7919) % 101) as f64 / 50.0 - 1.0).collect();
        let (xd, _) = DirectSlabSolver::new(mg.finest())?.solve(&b)?;
        let mut gmg = GmgSlabSolver::new(mg, FgmresParams { abs_tol: 0.0, rel_tol: 1e-10, max_iter: 100 });
        let (xg, stats) = gmg.solve(&b)?;
        let diff = xd.iter().zip(&xg).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm = xd.iter().map(|a| a * a).sum::<f64>().sqrt();
        println!(
            "{} levels, {n} unknowns: {} iterations, {:.1} ms, relative difference to direct {:.2e}",
            top + 1,
            stats.iterations,
            stats.wall_ms,
            diff / norm
        );
    }
    Ok(())
}
