//! Temporal convergence with a spatially exact solution: only the time step
//! is halved. Errors at the time nodes converge with order 2k + 1, the
//! L2(L2) errors with order k + 1.
//!
//! cargo run --release --example superconvergence -- [levels] [k]

use biot_stfem::assembly::projection::project_initial_data;
use biot_stfem::assembly::{Formulation, Level, Material, NitscheParams};
use biot_stfem::driver::{compute_eoc, DirectSlabSolver, ErrorIntegrator, InitialFromExact, Manufactured, Marcher};
use biot_stfem::femcore::Pair;
use biot_stfem::meshkit::{DomainSpec, MeshHierarchy};
use std::f64::consts::PI;

fn main() -> biot_stfem::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let levels: usize = args.first().map_or(3, |s| s.parse().expect("levels"));
    let k: usize = args.get(1).map_or(1, |s| s.parse().expect("k"));
    let r = 5;
    let mat = Material::convergence_default();
    let nit = NitscheParams::defaults(r);
    let exact = Manufactured::conv2(mat.clone(), 40.0 * PI, 10.0 * PI);
    let hierarchy = MeshHierarchy::build(&DomainSpec::unit_square(4), 0)?;
    let level = Level::new(hierarchy.finest(), r, Pair::Qq, &mat, &nit);
    let t_final = 0.5;
    let (mut nodes, mut l2) = (Vec::new(), Vec::new());
    for l in 0..=levels {
        let tau = 0.02 / 2f64.powi(l as i32);
        let marcher = Marcher::new(&level, &mat, &nit, k, tau, Formulation::Dsa);
        let init = project_initial_data(&level.mesh, &level.space, &InitialFromExact { exact: &exact, t0: 0.0 }, 0.0);
        let mut solver = DirectSlabSolver::new(&marcher.op)?;
        let mut integ = ErrorIntegrator::new(&level, &marcher.tb, &exact, k + 3, 0);
        marcher.run(&exact, init, (t_final / tau).round() as usize, &mut solver, |rec| {
            integ.add_slab(rec.t0, rec.tau, rec.x);
            Ok(())
        })?;
        let rep = integ.report();
        println!("tau {tau:.5}: time nodes {:.3e} {:.3e} {:.3e}, L2(L2) {:.3e} {:.3e} {:.3e}", rep.lnodes[0], rep.lnodes[1], rep.lnodes[2], rep.l2l2[0], rep.l2l2[1], rep.l2l2[2]);
        nodes.push(rep.lnodes);
        l2.push(rep.l2l2);
    }
    let show = |errs: &[[f64; 3]], f: usize| -> String {
        compute_eoc(&errs.iter().map(|e| e[f]).collect::<Vec<_>>()).iter().map(|o| o.map_or("-".into(), |x| format!("{x:.2}"))).collect::<Vec<_>>().join(" ")
    };
    for (f, name) in ["grad u", "v", "p"].iter().enumerate() {
        println!("{name}: EOC at nodes {} | L2(L2) {}", show(&nodes, f), show(&l2, f));
    }
    Ok(())
}
