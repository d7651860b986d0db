//! Run configuration read from TOML files.

use crate::assembly::params::scalar_tensor;
use crate::assembly::{FaceSizeMode, Formulation, Material, NitscheParams};
use crate::error::{Error, Result};
use crate::femcore::Pair;
use crate::krylov_mg::{FgmresParams, MgParams, PatchKind, PatchSolver};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// u = phi (1, 1), p = phi with phi = sin(w1 t^2) sin(w2 x) sin(w2 y)
    Conv1,
    /// polynomial-in-space solution with separate temporal frequencies
    Conv2,
    /// loaded extruded L-shape with goal quantities on the face x = 1
    Lshape3d,
}

impl std::str::FromStr for ProblemKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "conv1" => Ok(ProblemKind::Conv1),
            "conv2" => Ok(ProblemKind::Conv2),
            "lshape3d" => Ok(ProblemKind::Lshape3d),
            other => Err(format!("unknown problem '{other}' (expected conv1, conv2 or lshape3d)")),
        }
    }
}

/// What is halved from one level to the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefineMode {
    /// mesh size and time step together
    SpaceTime,
    /// time step only, on the level-0 mesh
    Time,
    /// mesh size only, fixed time step
    Space,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// FGMRES preconditioned by the multigrid V-cycle
    #[default]
    Gmg,
    /// sparse LU of the slab matrix
    Direct,
}

impl std::str::FromStr for SolverKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gmg" => Ok(SolverKind::Gmg),
            "direct" => Ok(SolverKind::Direct),
            other => Err(format!("unknown solver '{other}' (expected gmg or direct)")),
        }
    }
}

/// Material coefficients; the elastic part is given either by `young` and
/// `poisson` or by `lambda` and `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub rho: f64,
    pub alpha: f64,
    pub c0: f64,
    /// scalar permeability K = k I
    pub permeability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub young: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

impl MaterialConfig {
    pub fn to_material(&self) -> Result<Material> {
        let (lambda, mu) = match (self.young, self.poisson, self.lambda, self.mu) {
            (Some(e), Some(nu), None, None) => Material::lame(e, nu),
            (None, None, Some(l), Some(m)) => (l, m),
            _ => return Err(Error::Config("material: give either young and poisson or lambda and mu".into())),
        };
        let m = Material { rho: self.rho, alpha: self.alpha, c0: self.c0, lambda, mu, permeability: scalar_tensor(self.permeability) };
        m.validate().map_err(Error::Config)?;
        Ok(m)
    }
}

/// Penalty overrides; unset values use the degree-dependent defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct NitscheConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub face_size: FaceSizeMode,
}

impl NitscheConfig {
    pub fn params(&self, r: usize) -> NitscheParams {
        let mut p = NitscheParams::defaults(r);
        if let Some(g) = self.gamma_a {
            p.gamma_a = g;
        }
        if let Some(g) = self.gamma_b {
            p.gamma_b = g;
        }
        if let Some(g) = self.gamma {
            p.gamma = g;
        }
        p.face_size = self.face_size;
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultigridConfig {
    pub omega: f64,
    pub sweeps: usize,
    pub patch: PatchKind,
    pub patch_solver: PatchSolver,
    /// mesh level solved directly; levels above it are smoothed
    pub coarse_level: usize,
}

impl Default for MultigridConfig {
    fn default() -> Self {
        let p = MgParams::default();
        Self { omega: p.omega, sweeps: p.sweeps, patch: p.patch, patch_solver: p.patch_solver, coarse_level: 0 }
    }
}

impl MultigridConfig {
    pub fn params(&self) -> MgParams {
        MgParams { omega: self.omega, sweeps: self.sweeps, patch: self.patch, patch_solver: self.patch_solver }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FgmresConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for FgmresConfig {
    fn default() -> Self {
        let p = FgmresParams::default();
        Self { abs_tol: p.abs_tol, rel_tol: p.rel_tol, max_iter: p.max_iter }
    }
}

impl FgmresConfig {
    pub fn params(&self) -> FgmresParams {
        FgmresParams { abs_tol: self.abs_tol, rel_tol: self.rel_tol, max_iter: self.max_iter }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormConfig {
    /// Gauss points per slab for L2 in time; unset means k + 3
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_points: Option<usize>,
    /// Gauss sample times per slab for the sampled maximum in time
    pub samples: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self { time_points: None, samples: 100 }
    }
}

/// Frequencies of the manufactured solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedConfig {
    pub omega1: f64,
    pub omega2: f64,
    /// displacement direction of conv1
    #[serde(default = "default_direction")]
    pub direction: [f64; 2],
}

fn default_direction() -> [f64; 2] {
    [1.0, 1.0]
}

/// Traction load of the L-shape problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadConfig {
    pub amplitude: f64,
    pub omega: f64,
}

impl Default for LoadConfig {
    fn default() -> Self {
        let l = crate::driver::LShapeLoad::default();
        Self { amplitude: l.amplitude, omega: l.omega }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub vtk: bool,
    /// write a VTK file every this many slabs of the finest level
    pub vtk_every: usize,
    /// read OS energy counters around the run
    pub energy: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), vtk: false, vtk_every: 10, energy: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemKind,
    /// temporal degree
    pub k: usize,
    /// spatial degree of the displacement and velocity
    pub r: usize,
    pub pair: Pair,
    #[serde(default)]
    pub formulation: Formulation,
    /// first and last level, inclusive
    pub refinements: [usize; 2],
    pub refine: RefineMode,
    /// time step of level 0
    pub tau0: f64,
    pub t_start: f64,
    pub t_final: f64,
    /// cells per direction of the level-0 unit square (ignored for lshape3d)
    #[serde(default = "default_base_cells")]
    pub base_cells: usize,
    #[serde(default)]
    pub solver: SolverKind,
    /// worker threads; 0 uses all available cores
    #[serde(default)]
    pub threads: usize,
    /// run dense kernels single-threaded so results do not depend on the thread count
    #[serde(default)]
    pub deterministic: bool,
    pub material: MaterialConfig,
    #[serde(default)]
    pub nitsche: NitscheConfig,
    #[serde(default)]
    pub multigrid: MultigridConfig,
    #[serde(default)]
    pub fgmres: FgmresConfig,
    #[serde(default)]
    pub norms: NormConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manufactured: Option<ManufacturedConfig>,
    #[serde(default)]
    pub load: LoadConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_base_cells() -> usize {
    4
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.r < 2 {
            return fail(format!("r must be at least 2, got {}", self.r));
        }
        if !(self.tau0 > 0.0) {
            return fail(format!("tau0 must be positive, got {}", self.tau0));
        }
        if !(self.t_final > self.t_start) {
            return fail(format!("t_final {} must exceed t_start {}", self.t_final, self.t_start));
        }
        if self.refinements[0] > self.refinements[1] {
            return fail(format!("empty refinement range {}..{}", self.refinements[0], self.refinements[1]));
        }
        if self.base_cells == 0 {
            return fail("base_cells must be positive".into());
        }
        if self.fgmres.max_iter == 0 {
            return fail("fgmres.max_iter must be positive".into());
        }
        if !(self.multigrid.omega > 0.0) {
            return fail(format!("multigrid.omega must be positive, got {}", self.multigrid.omega));
        }
        if self.norms.time_points == Some(0) {
            return fail("norms.time_points must be positive".into());
        }
        if self.problem != ProblemKind::Lshape3d && self.manufactured.is_none() {
            return fail("manufactured problems need a [manufactured] section".into());
        }
        self.material.to_material()?;
        Ok(())
    }

    pub fn material(&self) -> Material {
        self.material.to_material().expect("validated material")
    }

    pub fn nitsche_params(&self) -> NitscheParams {
        self.nitsche.params(self.r)
    }

    pub fn time_points(&self) -> usize {
        self.norms.time_points.unwrap_or(self.k + 3)
    }

    /// Mesh refinement level and time step of run level `l`.
    pub fn level_setup(&self, l: usize) -> (usize, f64) {
        let halve = |n: usize| self.tau0 / 2f64.powi(n as i32);
        match self.refine {
            RefineMode::SpaceTime => (l, halve(l)),
            RefineMode::Time => (0, halve(l)),
            RefineMode::Space => (l, self.tau0),
        }
    }

    /// Number of slabs covering (t_start, t_final] with step `tau`.
    pub fn n_slabs(&self, tau: f64) -> usize {
        (((self.t_final - self.t_start) / tau) - 1e-9).ceil().max(1.0) as usize
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        self.refinements[0]..=self.refinements[1]
    }
}

/// Parse `a..b` or a single level `a`.
pub fn parse_range(s: &str) -> std::result::Result<[usize; 2], String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad level '{t}': {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok([parse(a)?, parse(b)?])
        }
        None => {
            let a = parse(s)?;
            Ok([a, a])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
problem = "conv1"
k = 2
r = 3
pair = "qpdisc"
refinements = [0, 2]
refine = "space-time"
tau0 = 0.1
t_start = 1.0
t_final = 2.0

[material]
rho = 1.0
alpha = 0.9
c0 = 0.01
permeability = 1.0
young = 100.0
poisson = 0.35

[manufactured]
omega1 = 3.141592653589793
omega2 = 3.141592653589793
"#;

    #[test]
    fn minimal_file_gets_defaults() {
        let c = RunConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.formulation, Formulation::Dsa);
        assert_eq!(c.solver, SolverKind::Gmg);
        assert_eq!(c.fgmres.abs_tol, 1e-8);
        assert_eq!(c.multigrid.sweeps, 4);
        assert_eq!(c.time_points(), 5);
        assert_eq!(c.level_setup(2), (2, 0.025));
        assert_eq!(c.n_slabs(0.025), 40);
        assert!((c.material().lambda - 86.41975308641975).abs() < 1e-10);
    }

    #[test]
    fn round_trip() {
        let c = RunConfig::from_toml(MINIMAL).unwrap();
        let again = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::from_toml(&MINIMAL.replace("r = 3", "r = 1")).is_err());
        assert!(RunConfig::from_toml(&MINIMAL.replace("tau0 = 0.1", "tau0 = 0.0")).is_err());
        assert!(RunConfig::from_toml(&MINIMAL.replace("t_final = 2.0", "t_final = 0.5")).is_err());
        assert!(RunConfig::from_toml(&MINIMAL.replace("k = 2", "k = 2\nbogus = 1")).is_err());
        assert!(RunConfig::from_toml(&MINIMAL.replace("young = 100.0", "lambda = 1.0")).is_err());
    }

    #[test]
    fn presets_round_trip() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
        let mut n = 0;
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            let c = RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c, "{}", path.display());
            n += 1;
        }
        assert_eq!(n, 6);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3"), Ok([1, 3]));
        assert_eq!(parse_range("2..=4"), Ok([2, 4]));
        assert_eq!(parse_range("5"), Ok([5, 5]));
        assert!(parse_range("a..2").is_err());
    }
}
