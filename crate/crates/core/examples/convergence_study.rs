//! Space-time convergence on the trigonometric manufactured solution:
//! mesh size and time step are halved together and the errors of
//! (grad u, v, p) in L2(L2) are printed with their orders.
//!
//! cargo run --release --example convergence_study -- [levels] [k] [r] [qq|qpdisc]

use biot_stfem::assembly::projection::project_initial_data;
use biot_stfem::assembly::{Formulation, Level, Material, NitscheParams};
use biot_stfem::driver::{compute_eoc, DirectSlabSolver, ErrorIntegrator, InitialFromExact, Manufactured, Marcher};
use biot_stfem::femcore::Pair;
use biot_stfem::meshkit::{DomainSpec, MeshHierarchy};
use std::f64::consts::PI;

fn main() -> biot_stfem::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let levels: usize = args.first().map_or(2, |s| s.parse().expect("levels"));
    let k: usize = args.get(1).map_or(1, |s| s.parse().expect("k"));
    let r: usize = args.get(2).map_or(2, |s| s.parse().expect("r"));
    let pair: Pair = args.get(3).map_or(Pair::Qpdisc, |s| s.parse().expect("pair"));

    let mat = Material::convergence_default();
    let nit = NitscheParams::defaults(r);
    let exact = Manufactured::conv1(mat.clone(), PI, PI, [1.0, 1.0]);
    let hierarchy = MeshHierarchy::build(&DomainSpec::unit_square(4), levels)?;
    let (t0, t1) = (1.0, 2.0);
    let mut errors = Vec::new();
    for (l, mesh) in hierarchy.levels.iter().enumerate() {
        let tau = 0.1 / 2f64.powi(l as i32);
        let level = Level::new(mesh, r, pair, &mat, &nit);
        let marcher = Marcher::new(&level, &mat, &nit, k, tau, Formulation::Dsa);
        let init = project_initial_data(&level.mesh, &level.space, &InitialFromExact { exact: &exact, t0 }, t0);
        let mut solver = DirectSlabSolver::new(&marcher.op)?;
        let mut integ = ErrorIntegrator::new(&level, &marcher.tb, &exact, k + 3, 20);
        let n = ((t1 - t0) / tau).round() as usize;
        marcher.run(&exact, init, n, &mut solver, |rec| {
            integ.add_slab(rec.t0, rec.tau, rec.x);
            Ok(())
        })?;
        let e = integ.report().l2l2;
        println!("level {l}: tau {tau:.4}, {} unknowns per slab, errors {:.4e} {:.4e} {:.4e}", marcher.op.dim(), e[0], e[1], e[2]);
        errors.push(e);
    }
    for (f, name) in ["grad u", "v", "p"].iter().enumerate() {
        let eoc: Vec<String> = compute_eoc(&errors.iter().map(|e| e[f]).collect::<Vec<_>>())
            .iter()
            .map(|o| o.map_or("-".into(), |x| format!("{x:.2}")))
            .collect();
        println!("EOC {name}: {}", eoc.join(" "));
    }
    Ok(())
}
