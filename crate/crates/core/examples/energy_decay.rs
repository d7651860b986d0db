//! Without data the discrete energy A(u, u) + (rho v, v) + (c0 p, p) at the
//! slab end points does not grow; this prints it for both formulations.
//!
//! cargo run --release --example energy_decay -- [k] [slabs]

use biot_stfem::assembly::projection::project_initial_data;
use biot_stfem::assembly::{Formulation, Level, Material, NitscheParams, ProblemData, ZeroData};
use biot_stfem::driver::{discrete_energy, DirectSlabSolver, Marcher};
use biot_stfem::femcore::Pair;
use biot_stfem::meshkit::{DomainSpec, MeshHierarchy};

struct Pulse;

impl ProblemData for Pulse {
    fn initial_u(&self, x: &[f64; 3]) -> [f64; 3] {
        let b = (-40.0 * ((x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2))).exp();
        [b, 0.5 * b, 0.0]
    }
    fn initial_p(&self, x: &[f64; 3]) -> f64 {
        (-40.0 * ((x[0] - 0.3).powi(2) + (x[1] - 0.6).powi(2))).exp()
    }
}

fn main() -> biot_stfem::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let k: usize = args.first().map_or(1, |s| s.parse().expect("k"));
    let slabs: usize = args.get(1).map_or(20, |s| s.parse().expect("slabs"));
    let r = 2;
    let mat = Material::convergence_default();
    let nit = NitscheParams::defaults(r);
    let hierarchy = MeshHierarchy::build(&DomainSpec::unit_square(8), 0)?;
    let level = Level::new(hierarchy.finest(), r, Pair::Qpdisc, &mat, &nit);
    let init = project_initial_data(&level.mesh, &level.space, &Pulse, 0.0);
    for formulation in [Formulation::Dsa, Formulation::Ds] {
        let marcher = Marcher::new(&level, &mat, &nit, k, 0.02, formulation);
        let mut solver = DirectSlabSolver::new(&marcher.op)?;
        let mut energies = vec![discrete_energy(&init, &level.forms)];
        marcher.run(&ZeroData, init.clone(), slabs, &mut solver, |rec| {
            energies.push(discrete_energy(rec.end, &level.forms));
            Ok(())
        })?;
        let monotone = energies.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-10));
        println!("{formulation:?}: E(0) = {:.5e}, E(T) = {:.5e}, non-increasing: {monotone}", energies[0], energies[slabs]);
    }
    Ok(())
}
