//! CSV tables, legacy VTK snapshots and OS energy counters.

use crate::driver::{compute_eoc, ErrorReport, PerfRow};
use crate::error::Result;
use crate::femcore::MixedSpace;
use crate::meshkit::MeshLevel;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Errors of one level of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub tau: f64,
    pub h: f64,
    pub errors: ErrorReport,
}

const FIELDS: [&str; 3] = ["grad_u", "v", "p"];
const NORMS: [&str; 3] = ["L2L2", "Linf", "lnodes"];

fn norm_column(r: &ErrorReport, norm: usize) -> [f64; 3] {
    match norm {
        0 => r.l2l2,
        1 => r.linf,
        _ => r.lnodes,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.10e}")).unwrap_or_default()
}

/// Header of `convergence.csv`.
pub fn convergence_header() -> Vec<String> {
    let mut h = vec!["level".to_string(), "tau".into(), "h".into()];
    for norm in NORMS {
        for f in FIELDS {
            h.push(format!("err_{f}_{norm}"));
            h.push(format!("eoc_{f}_{norm}"));
        }
    }
    h
}

/// Write `convergence.csv`; EOC cells of the first row are empty.
pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(convergence_header())?;
    let mut eocs = [[Vec::new(), Vec::new(), Vec::new()], [Vec::new(), Vec::new(), Vec::new()], [Vec::new(), Vec::new(), Vec::new()]];
    for (norm, per_norm) in eocs.iter_mut().enumerate() {
        for (f, e) in per_norm.iter_mut().enumerate() {
            let errs: Vec<f64> = rows.iter().map(|r| norm_column(&r.errors, norm)[f]).collect();
            *e = std::iter::once(None).chain(compute_eoc(&errs)).collect();
        }
    }
    for (i, r) in rows.iter().enumerate() {
        let mut rec = vec![r.level.to_string(), format!("{:.10e}", r.tau), format!("{:.10e}", r.h)];
        for (norm, per_norm) in eocs.iter().enumerate() {
            for (f, e) in per_norm.iter().enumerate() {
                rec.push(format!("{:.10e}", norm_column(&r.errors, norm)[f]));
                rec.push(opt(e[i]));
            }
        }
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Write `productivity.csv`.
pub fn write_productivity(path: &Path, rows: &[PerfRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "t_wall", "E", "S", "R", "P"])?;
    for r in rows {
        w.write_record([
            r.nodes.to_string(),
            format!("{:.6e}", r.wall),
            opt(r.energy),
            format!("{:.6}", r.speedup),
            r.energy_ratio.map(|x| format!("{x:.6}")).unwrap_or_default(),
            r.productivity.map(|x| format!("{x:.6}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a measurements table with columns `n`, `t_wall` and optionally `E`.
pub fn read_measurements(path: &Path) -> Result<Vec<crate::driver::Measurement>> {
    use crate::error::Error;
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = r.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (n, wall) = match (col("n"), col("t_wall")) {
        (Some(n), Some(w)) => (n, w),
        _ => return Err(Error::Measurements(format!("{}: need columns n and t_wall", path.display()))),
    };
    let energy = col("E");
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("").to_string();
        let bad = |what: &str, v: String| Error::Measurements(format!("row {}: bad {what} '{v}'", line + 1));
        let nodes = field(n).parse::<usize>().map_err(|_| bad("n", field(n)))?;
        let wall = field(wall).parse::<f64>().map_err(|_| bad("t_wall", field(wall)))?;
        let energy = match energy.map(field) {
            Some(s) if !s.is_empty() => Some(s.parse::<f64>().map_err(|_| bad("E", s.clone()))?),
            _ => None,
        };
        out.push(crate::driver::Measurement { nodes, wall, energy });
    }
    Ok(out)
}

/// Legacy ASCII VTK file of displacement, velocity and pressure. Every
/// cell gets its own corner points so discontinuous pressures are shown
/// as they are.
pub fn write_vtk(path: &Path, mesh: &MeshLevel, space: &MixedSpace, u: &[f64], v: &[f64], p: &[f64], t: f64) -> Result<()> {
    let dim = mesh.dim;
    let corners = 1usize << dim;
    let order: &[usize] = if dim == 2 { &[0, 1, 3, 2] } else { &[0, 1, 3, 2, 4, 5, 7, 6] };
    let cell_type = if dim == 2 { 9 } else { 12 };
    let n_nodes = space.v.scalar.n_dofs;
    let split = |x: &[f64]| -> Vec<Vec<f64>> { (0..dim).map(|c| (0..n_nodes).map(|i| x[i * dim + c]).collect()).collect() };
    let (uc, vc) = (split(u), split(v));
    let n_points = mesh.n_cells() * corners;
    let mut pts = String::new();
    let (mut disp, mut vel, mut pres) = (String::new(), String::new(), String::new());
    for ci in 0..mesh.n_cells() {
        for &c in order {
            let mut xi = [0.0; 3];
            for (a, x) in xi.iter_mut().enumerate().take(dim) {
                *x = if (c >> a) & 1 == 1 { 1.0 } else { -1.0 };
            }
            let x = mesh.map_to_physical(ci, &xi);
            let _ = writeln!(pts, "{} {} {}", x[0], x[1], x[2]);
            let mut du = [0.0; 3];
            let mut dv = [0.0; 3];
            for a in 0..dim {
                du[a] = space.v.scalar.eval_local(ci, &uc[a], &xi).0;
                dv[a] = space.v.scalar.eval_local(ci, &vc[a], &xi).0;
            }
            let _ = writeln!(disp, "{} {} {}", du[0], du[1], du[2]);
            let _ = writeln!(vel, "{} {} {}", dv[0], dv[1], dv[2]);
            let _ = writeln!(pres, "{}", space.q.eval_local(ci, p, &xi).0);
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0\nbiot-stfem t = {t}\nASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = write!(s, "POINTS {n_points} double\n{pts}");
    let _ = writeln!(s, "CELLS {} {}", mesh.n_cells(), mesh.n_cells() * (corners + 1));
    for ci in 0..mesh.n_cells() {
        let ids: Vec<String> = (0..corners).map(|j| (ci * corners + j).to_string()).collect();
        let _ = writeln!(s, "{corners} {}", ids.join(" "));
    }
    let _ = writeln!(s, "CELL_TYPES {}", mesh.n_cells());
    for _ in 0..mesh.n_cells() {
        let _ = writeln!(s, "{cell_type}");
    }
    let _ = writeln!(s, "POINT_DATA {n_points}");
    let _ = write!(s, "VECTORS displacement double\n{disp}");
    let _ = write!(s, "VECTORS velocity double\n{vel}");
    let _ = write!(s, "SCALARS pressure double 1\nLOOKUP_TABLE default\n{pres}");
    std::fs::write(path, s)?;
    Ok(())
}

/// Cumulative package energy from the Linux powercap interface.
#[derive(Debug, Clone)]
pub struct EnergyCounter {
    dir: PathBuf,
    start: u64,
    range: u64,
}

impl EnergyCounter {
    /// Start reading the first RAPL package domain; `None` if unavailable.
    pub fn start() -> Option<Self> {
        Self::start_at(Path::new("/sys/class/powercap/intel-rapl:0"))
    }

    pub fn start_at(dir: &Path) -> Option<Self> {
        let read = |f: &str| std::fs::read_to_string(dir.join(f)).ok()?.trim().parse::<u64>().ok();
        let start = read("energy_uj")?;
        let range = read("max_energy_range_uj").unwrap_or(u64::MAX);
        Some(Self { dir: dir.to_path_buf(), start, range })
    }

    /// Joules since `start`, accounting for one counter wrap.
    pub fn joules(&self) -> Option<f64> {
        let now = std::fs::read_to_string(self.dir.join("energy_uj")).ok()?.trim().parse::<u64>().ok()?;
        let uj = if now >= self.start { now - self.start } else { self.range - self.start + now };
        Some(uj as f64 * 1e-6)
    }
}
