use biot_stfem::config::{parse_range, RunConfig, SolverKind};
use biot_stfem::experiment::{describe, run, run_perf};
use biot_stfem::femcore::Pair;
use biot_stfem::assembly::Formulation;
use biot_stfem::Error;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "biot-stfem", version, about = "Space-time finite elements for dynamic poroelasticity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study or the L-shape benchmark from a TOML file
    Solve(SolveArgs),
    /// Speedup, energy ratio and productivity from a measurements CSV
    Perf {
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long)]
    config: PathBuf,
    /// levels `a..b` (inclusive) or a single level
    #[arg(long, value_parser = parse_range)]
    refinements: Option<[usize; 2]>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    pair: Option<Pair>,
    #[arg(long)]
    formulation: Option<Formulation>,
    #[arg(long)]
    solver: Option<SolverKind>,
    /// absolute FGMRES tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    vtk: bool,
    #[arg(long)]
    energy: bool,
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn configure(a: &SolveArgs) -> Result<RunConfig, Error> {
    let mut c = RunConfig::load(&a.config)?;
    if let Some(v) = a.refinements {
        c.refinements = v;
    }
    if let Some(v) = a.k {
        c.k = v;
    }
    if let Some(v) = a.r {
        c.r = v;
    }
    if let Some(v) = a.pair {
        c.pair = v;
    }
    if let Some(v) = a.formulation {
        c.formulation = v;
    }
    if let Some(v) = a.solver {
        c.solver = v;
    }
    if let Some(v) = a.tol {
        c.fgmres.abs_tol = v;
    }
    if let Some(v) = a.threads {
        c.threads = v;
    }
    if let Some(v) = a.t_final {
        c.t_final = v;
    }
    if let Some(v) = &a.out {
        c.output.dir = v.clone();
    }
    c.deterministic |= a.deterministic;
    c.output.vtk |= a.vtk;
    c.output.energy |= a.energy;
    c.validate()?;
    Ok(c)
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::NotConverged { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(args) => {
            let cfg = match configure(&args) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match run(&cfg) {
                Ok(summary) => {
                    let _ = describe(&summary, std::io::stdout());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code(&e)
                }
            }
        }
        Command::Perf { measurements, out } => match run_perf(&measurements, &out) {
            Ok(rows) => {
                for r in rows {
                    println!("n {:>4}  S {:.2}  R {}  P {}", r.nodes, r.speedup, fmt(r.energy_ratio), fmt(r.productivity));
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into())
}
