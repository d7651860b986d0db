//! Global degree-of-freedom maps.

use super::element::RefSpace;
use crate::meshkit::MeshLevel;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Velocity/pressure element pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pair {
    /// continuous Q_r / continuous Q_{r-1}
    Qq,
    /// continuous Q_r / discontinuous P_{r-1}
    Qpdisc,
}

impl std::str::FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qq" => Ok(Pair::Qq),
            "qpdisc" => Ok(Pair::Qpdisc),
            other => Err(format!("unknown element pair '{other}' (expected qq or qpdisc)")),
        }
    }
}

/// Scalar finite element space on one mesh level.
#[derive(Debug, Clone)]
pub struct ScalarSpace {
    pub ref_space: RefSpace,
    pub continuous: bool,
    pub n_dofs: usize,
    n_local: usize,
    cell_dofs: Vec<usize>,
    /// physical node coordinates of a continuous space
    pub node_coords: Vec<[f64; 3]>,
}

impl ScalarSpace {
    /// Continuous tensor Lagrange space of the given degree. Nodes shared by
    /// neighboring cells are identified through integer lattice keys.
    pub fn continuous(mesh: &MeshLevel, degree: usize) -> Self {
        let ref_space = RefSpace::lagrange(mesh.dim, degree);
        let n_local = ref_space.n_local();
        let pts = ref_space.node_points();
        let mut lookup: HashMap<[i64; 3], usize> = HashMap::new();
        let mut node_coords = Vec::new();
        let mut cell_dofs = Vec::with_capacity(mesh.n_cells() * n_local);
        let r = degree as i64;
        for (ci, cell) in mesh.cells.iter().enumerate() {
            for (m, xi) in ref_space.multi.iter().zip(&pts) {
                let mut key = [0i64; 3];
                for a in 0..mesh.dim {
                    key[a] = r * cell.index[a] + m[a] as i64;
                }
                let next = node_coords.len();
                let id = *lookup.entry(key).or_insert(next);
                if id == next {
                    node_coords.push(mesh.map_to_physical(ci, xi));
                }
                cell_dofs.push(id);
            }
        }
        Self { ref_space, continuous: true, n_dofs: node_coords.len(), n_local, cell_dofs, node_coords }
    }

    /// Discontinuous total-degree Legendre space.
    pub fn discontinuous(mesh: &MeshLevel, degree: usize) -> Self {
        let ref_space = RefSpace::legendre(mesh.dim, degree);
        let n_local = ref_space.n_local();
        let n_dofs = mesh.n_cells() * n_local;
        Self {
            ref_space,
            continuous: false,
            n_dofs,
            n_local,
            cell_dofs: (0..n_dofs).collect(),
            node_coords: Vec::new(),
        }
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn cell_dofs(&self, ci: usize) -> &[usize] {
        &self.cell_dofs[ci * self.n_local..(ci + 1) * self.n_local]
    }

    /// Evaluate a finite element function at reference point `xi` of cell `ci`.
    /// Returns the value and the reference gradient.
    pub fn eval_local(&self, ci: usize, coeffs: &[f64], xi: &[f64; 3]) -> (f64, [f64; 3]) {
        let n = self.n_local;
        let mut v = vec![0.0; n];
        let mut g = vec![[0.0; 3]; n];
        self.ref_space.eval(xi, &mut v, &mut g);
        let mut val = 0.0;
        let mut grad = [0.0; 3];
        for (i, &dof) in self.cell_dofs(ci).iter().enumerate() {
            val += coeffs[dof] * v[i];
            for a in 0..3 {
                grad[a] += coeffs[dof] * g[i][a];
            }
        }
        (val, grad)
    }
}

/// Vector-valued continuous space with `dim` components per node;
/// global dof = node * dim + component.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    pub scalar: ScalarSpace,
    pub dim: usize,
}

impl VectorSpace {
    pub fn new(mesh: &MeshLevel, degree: usize) -> Self {
        Self { scalar: ScalarSpace::continuous(mesh, degree), dim: mesh.dim }
    }

    pub fn n_dofs(&self) -> usize {
        self.scalar.n_dofs * self.dim
    }

    pub fn n_local(&self) -> usize {
        self.scalar.n_local() * self.dim
    }

    /// Local dof `i * dim + c` maps to global `node_i * dim + c`.
    pub fn cell_dofs(&self, ci: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_local());
        for &node in self.scalar.cell_dofs(ci) {
            for c in 0..self.dim {
                out.push(node * self.dim + c);
            }
        }
        out
    }
}

/// Velocity and pressure spaces of one level.
#[derive(Debug, Clone)]
pub struct MixedSpace {
    pub pair: Pair,
    pub r: usize,
    pub v: VectorSpace,
    pub q: ScalarSpace,
}

impl MixedSpace {
    pub fn new(mesh: &MeshLevel, r: usize, pair: Pair) -> Self {
        let v = VectorSpace::new(mesh, r);
        let q = match pair {
            Pair::Qq => ScalarSpace::continuous(mesh, r - 1),
            Pair::Qpdisc => ScalarSpace::discontinuous(mesh, r - 1),
        };
        Self { pair, r, v, q }
    }

    /// Unknowns per Radau point: velocity, displacement and pressure.
    pub fn block_size(&self) -> usize {
        2 * self.v.n_dofs() + self.q.n_dofs
    }
}
