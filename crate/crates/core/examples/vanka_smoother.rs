//! Residual history of the patchwise Vanka smoother alone and of the
//! V-cycle it drives, on a random right-hand side.
//!
//! cargo run --release --example vanka_smoother -- [level] [sweeps] [omega]

use biot_stfem::assembly::{Formulation, Level, Material, NitscheParams};
use biot_stfem::femcore::{Pair, TimeBasis};
use biot_stfem::krylov_mg::vanka::patch_dofs;
use biot_stfem::krylov_mg::{MgParams, Multigrid, PatchKind, PatchSolver, VankaSmoother};
use biot_stfem::meshkit::{DomainSpec, MeshHierarchy};

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn main() -> biot_stfem::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let lvl: usize = args.first().map_or(2, |s| s.parse().expect("level"));
    let sweeps: usize = args.get(1).map_or(8, |s| s.parse().expect("sweeps"));
    let omega: f64 = args.get(2).map_or(0.7, |s| s.parse().expect("omega"));
    let (r, k) = (2, 1);
    let mat = Material::convergence_default();
    let nit = NitscheParams::defaults(r);
    let hierarchy = MeshHierarchy::build(&DomainSpec::unit_square(2), lvl)?;
    let levels: Vec<Level> = hierarchy.levels.iter().map(|m| Level::new(m, r, Pair::Qpdisc, &mat, &nit)).collect();
    let refs: Vec<&Level> = levels.iter().collect();
    let params = MgParams { omega, ..MgParams::default() };
    let mg = Multigrid::new(&refs, &TimeBasis::new(k), 0.025, Formulation::Dsa, &params)?;
    let op = mg.finest();
    let fine = levels.last().expect("finest level");
    let smoother = VankaSmoother::new(op, patch_dofs(&fine.mesh, &fine.space, PatchKind::Vertex), omega, 1, PatchSolver::TimeDiagonal)?;
    println!("{} patches, largest {} unknowns per Radau point", smoother.n_patches(), smoother.patch_sizes().iter().max().unwrap_or(&0));

    let n = op.dim();
    let b: Vec<f64> = (0..n).map(|i| ((i * 7919) % 101) as f64 / 50.0 - 1.0).collect();
    let mut d = vec![0.0; n];
    let mut ad = vec![0.0; n];
    for s in 1..=sweeps {
        smoother.smooth(op, &b, &mut d);
        op.apply(&d, &mut ad);
        let r: Vec<f64> = b.iter().zip(&ad).map(|(x, y)| x - y).collect();
        println!("sweep {s}: |r| / |b| = {:.3e}", norm(&r) / norm(&b));
    }
    let d = mg.vcycle(mg.n_levels() - 1, &b);
    op.apply(&d, &mut ad);
    let r: Vec<f64> = b.iter().zip(&ad).map(|(x, y)| x - y).collect();
    println!("one V-cycle: |r| / |b| = {:.3e}", norm(&r) / norm(&b));
    Ok(())
}
