//! Loaded three-dimensional L-shape: goal quantities on the free face
//! x = 1 and solver statistics, with optional VTK snapshots.
//!
//! cargo run --release --example lshape_benchmark -- [ref] [t_final] [out_dir]

use biot_stfem::config::RunConfig;
use biot_stfem::experiment::{describe, run};
use std::path::{Path, PathBuf};

fn main() -> biot_stfem::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let refinement: usize = args.first().map_or(1, |s| s.parse().expect("ref"));
    let t_final: f64 = args.get(1).map_or(0.1, |s| s.parse().expect("t_final"));
    let preset = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets/lshape_ref2.toml");
    let mut cfg = RunConfig::load(&preset)?;
    cfg.refinements = [refinement, refinement];
    cfg.multigrid.coarse_level = refinement.saturating_sub(1);
    cfg.t_final = t_final;
    cfg.output.dir = args.get(2).map_or_else(|| PathBuf::from("out/lshape"), PathBuf::from);
    cfg.output.vtk = true;
    cfg.output.vtk_every = 5;
    let summary = run(&cfg)?;
    describe(&summary, std::io::stdout())?;
    for g in &summary.levels[0].goal {
        println!("t = {:.2}: b_u = {:+.5e}, b_p = {:+.5e}", g.t, g.b_u, g.b_p);
    }
    println!("outputs in {}", cfg.output.dir.display());
    Ok(())
}
