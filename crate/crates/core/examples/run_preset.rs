//! Run a preset file through the library entry point, optionally limited
//! to a range of levels and an end time.
//!
//! cargo run --release --example run_preset -- presets/table1.toml [a..b] [t_final]

use biot_stfem::config::{parse_range, RunConfig};
use biot_stfem::experiment::{describe, run};
use std::path::PathBuf;

fn main() -> biot_stfem::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/presets/table1.toml").into()));
    let mut cfg = RunConfig::load(&path)?;
    if let Some(range) = args.next() {
        cfg.refinements = parse_range(&range).map_err(biot_stfem::Error::Config)?;
    }
    if let Some(t) = args.next() {
        cfg.t_final = t.parse().map_err(|e| biot_stfem::Error::Config(format!("t_final: {e}")))?;
    }
    cfg.validate()?;
    let summary = run(&cfg)?;
    describe(&summary, std::io::stdout())?;
    println!("tables written to {}", cfg.output.dir.display());
    Ok(())
}
