//! Problem data: forcing, boundary and initial values.

/// Data handles of an initial-boundary value problem. Vector values are
/// padded to three components; only the first `dim` are used. Every method
/// defaults to zero.
pub trait ProblemData: Send + Sync {
    /// body force per unit mass
    fn body_force(&self, _x: &[f64; 3], _t: f64) -> [f64; 3] {
        [0.0; 3]
    }
    /// volumetric fluid source
    fn source(&self, _x: &[f64; 3], _t: f64) -> f64 {
        0.0
    }
    fn u_dirichlet(&self, _x: &[f64; 3], _t: f64) -> [f64; 3] {
        [0.0; 3]
    }
    /// time derivative of the displacement boundary values
    fn v_dirichlet(&self, _x: &[f64; 3], _t: f64) -> [f64; 3] {
        [0.0; 3]
    }
    /// negative total traction on Neumann faces
    fn traction(&self, _x: &[f64; 3], _t: f64) -> [f64; 3] {
        [0.0; 3]
    }
    fn p_dirichlet(&self, _x: &[f64; 3], _t: f64) -> f64 {
        0.0
    }
    /// outward Darcy flux on Neumann faces
    fn p_flux(&self, _x: &[f64; 3], _t: f64) -> f64 {
        0.0
    }
    fn initial_u(&self, _x: &[f64; 3]) -> [f64; 3] {
        [0.0; 3]
    }
    fn initial_v(&self, _x: &[f64; 3]) -> [f64; 3] {
        [0.0; 3]
    }
    fn initial_p(&self, _x: &[f64; 3]) -> f64 {
        0.0
    }
}

/// Exact solution of a manufactured problem.
pub trait ExactSolution: Send + Sync {
    fn u(&self, x: &[f64; 3], t: f64) -> [f64; 3];
    fn v(&self, x: &[f64; 3], t: f64) -> [f64; 3];
    /// grad_u[a][b] = d u_a / d x_b
    fn grad_u(&self, x: &[f64; 3], t: f64) -> [[f64; 3]; 3];
    fn p(&self, x: &[f64; 3], t: f64) -> f64;
}

/// Homogeneous data.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroData;

impl ProblemData for ZeroData {}

/// Coefficient vectors of (u, v, p) at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
}

impl SlabState {
    pub fn zeros(t: f64, n_v: usize, n_q: usize) -> Self {
        Self { t, u: vec![0.0; n_v], v: vec![0.0; n_v], p: vec![0.0; n_q] }
    }
}
