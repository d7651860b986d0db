//! Speedup, energy ratio and productivity of a strong-scaling series read
//! from a CSV with columns n, t_wall and optionally E.
//!
//! cargo run --release --example productivity -- [measurements.csv]

use biot_stfem::driver::{most_productive, perf_model, Measurement};
use biot_stfem::experiment::read_measurements;
use std::path::Path;

fn main() -> biot_stfem::Result<()> {
    let rows = match std::env::args().nth(1) {
        Some(path) => read_measurements(Path::new(&path))?,
        None => [(20, 12.00, 98.31), (40, 7.22, 133.49), (80, 4.87, 173.50), (120, 4.23, 220.61), (160, 3.98, 272.48), (200, 3.72, 316.34)]
            .iter()
            .map(|&(nodes, wall, e)| Measurement { nodes, wall, energy: Some(e) })
            .collect(),
    };
    let perf = perf_model(&rows)?;
    println!("{:>5} {:>8} {:>9} {:>6} {:>6} {:>6}", "n", "t_wall", "E", "S", "R", "P");
    for r in &perf {
        let opt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |x| format!("{x:.p$}"));
        println!("{:>5} {:>8.2} {:>9} {:>6.2} {:>6} {:>6}", r.nodes, r.wall, opt(r.energy, 2), r.speedup, opt(r.energy_ratio, 2), opt(r.productivity, 2));
    }
    if let Some(n) = most_productive(&perf) {
        println!("most productive: n = {n}");
    }
    Ok(())
}
