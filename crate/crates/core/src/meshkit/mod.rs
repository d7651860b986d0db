//! Axis-aligned box meshes with uniform refinement.
//!
//! Every level is a conforming union of congruent boxes on a uniform
//! lattice, so cells, vertices and higher order nodes are identified by
//! integer lattice coordinates. This makes node sharing exact.

mod boundary;

pub use boundary::{BoundaryRule, BoundaryTag, PBc, UBc};

use crate::error::{Error, Result};
use std::collections::HashMap;

/// Coarse description of a computational domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub name: String,
    pub dim: usize,
    pub origin: [f64; 3],
    /// edge lengths of one coarse cell
    pub cell_size: [f64; 3],
    /// lattice positions of the coarse cells
    pub coarse_cells: Vec<[i64; 3]>,
    pub boundary: BoundaryRule,
}

impl DomainSpec {
    /// Unit square split into `n x n` coarse cells with Dirichlet data on
    /// the whole boundary.
    pub fn unit_square(n: usize) -> Self {
        let mut coarse_cells = Vec::new();
        for j in 0..n as i64 {
            for i in 0..n as i64 {
                coarse_cells.push([i, j, 0]);
            }
        }
        let h = 1.0 / n as f64;
        Self {
            name: "unit-square".into(),
            dim: 2,
            origin: [0.0; 3],
            cell_size: [h, h, 1.0],
            coarse_cells,
            boundary: BoundaryRule::AllDirichlet,
        }
    }

    /// Unit cube split into `n^3` coarse cells, Dirichlet everywhere.
    pub fn unit_cube(n: usize) -> Self {
        let mut coarse_cells = Vec::new();
        for l in 0..n as i64 {
            for j in 0..n as i64 {
                for i in 0..n as i64 {
                    coarse_cells.push([i, j, l]);
                }
            }
        }
        let h = 1.0 / n as f64;
        Self {
            name: "unit-cube".into(),
            dim: 3,
            origin: [0.0; 3],
            cell_size: [h; 3],
            coarse_cells,
            boundary: BoundaryRule::AllDirichlet,
        }
    }

    /// Extruded L-shape ([0,1]^2 minus (0.5,1]^2) x [0,0.5] made of three
    /// cubes of edge 0.5.
    pub fn lshape3d() -> Self {
        Self {
            name: "lshape3d".into(),
            dim: 3,
            origin: [0.0; 3],
            cell_size: [0.5; 3],
            coarse_cells: vec![[0, 0, 0], [1, 0, 0], [0, 1, 0]],
            boundary: BoundaryRule::LShapeBenchmark,
        }
    }
}

/// One box cell of a mesh level.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// lattice coordinates in units of the level cell size
    pub index: [i64; 3],
    pub lower: [f64; 3],
    pub parent: Option<usize>,
    /// vertex ids, lexicographic with axis 0 fastest; 2^dim entries used
    pub vertices: [usize; 8],
}

/// Face between two cells or on the boundary. The normal points from
/// `cell` into `neighbor` (or out of the domain) along `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub cell: usize,
    pub axis: usize,
    /// true if the normal is +e_axis
    pub positive: bool,
    pub neighbor: Option<usize>,
    pub tag: Option<BoundaryTag>,
}

impl Face {
    pub fn normal(&self) -> [f64; 3] {
        let mut n = [0.0; 3];
        n[self.axis] = if self.positive { 1.0 } else { -1.0 };
        n
    }

    pub fn is_boundary(&self) -> bool {
        self.neighbor.is_none()
    }
}

/// One refinement level.
#[derive(Debug, Clone)]
pub struct MeshLevel {
    pub dim: usize,
    pub level: usize,
    pub origin: [f64; 3],
    pub h: [f64; 3],
    pub cells: Vec<Cell>,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Face>,
    cell_lookup: HashMap<[i64; 3], usize>,
}

impl MeshLevel {
    fn build(spec: &DomainSpec, level: usize, cells_idx: Vec<([i64; 3], Option<usize>)>) -> Result<Self> {
        let dim = spec.dim;
        let scale = (1i64 << level) as f64;
        let mut h = [1.0; 3];
        for a in 0..dim {
            h[a] = spec.cell_size[a] / scale;
        }
        let mut cell_lookup = HashMap::with_capacity(cells_idx.len());
        let mut vertex_lookup: HashMap<[i64; 3], usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut cells = Vec::with_capacity(cells_idx.len());
        for (ci, (index, parent)) in cells_idx.into_iter().enumerate() {
            if cell_lookup.insert(index, ci).is_some() {
                return Err(Error::Mesh(format!("duplicate cell at lattice position {index:?}")));
            }
            let mut lower = [0.0; 3];
            for a in 0..dim {
                lower[a] = spec.origin[a] + index[a] as f64 * h[a];
            }
            let mut vs = [usize::MAX; 8];
            for (corner, slot) in vs.iter_mut().enumerate().take(1 << dim) {
                let mut key = index;
                for (a, k) in key.iter_mut().enumerate().take(dim) {
                    *k += ((corner >> a) & 1) as i64;
                }
                let next = vertices.len();
                let id = *vertex_lookup.entry(key).or_insert(next);
                if id == next {
                    let mut x = [0.0; 3];
                    for a in 0..dim {
                        x[a] = spec.origin[a] + key[a] as f64 * h[a];
                    }
                    vertices.push(x);
                }
                *slot = id;
            }
            cells.push(Cell { index, lower, parent, vertices: vs });
        }
        let mut mesh = Self {
            dim,
            level,
            origin: spec.origin,
            h,
            cells,
            vertices,
            faces: Vec::new(),
            cell_lookup,
        };
        mesh.build_faces(&spec.boundary);
        Ok(mesh)
    }

    fn build_faces(&mut self, rule: &BoundaryRule) {
        let mut faces = Vec::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            for axis in 0..self.dim {
                for positive in [false, true] {
                    let mut nb = cell.index;
                    nb[axis] += if positive { 1 } else { -1 };
                    match self.cell_lookup.get(&nb) {
                        // interior faces are owned by the cell on the negative side
                        Some(&nj) if positive => faces.push(Face {
                            cell: ci,
                            axis,
                            positive,
                            neighbor: Some(nj),
                            tag: None,
                        }),
                        Some(_) => {}
                        None => {
                            let mut face = Face { cell: ci, axis, positive, neighbor: None, tag: None };
                            let center = self.face_center(&face);
                            face.tag = Some(rule.classify(&center, &face.normal(), self.dim));
                            faces.push(face);
                        }
                    }
                }
            }
        }
        self.faces = faces;
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Cell volume (all cells are congruent).
    pub fn cell_measure(&self) -> f64 {
        self.h[..self.dim].iter().product()
    }

    /// Largest cell diameter.
    pub fn diameter(&self) -> f64 {
        self.h[..self.dim].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn face_measure(&self, face: &Face) -> f64 {
        (0..self.dim).filter(|&b| b != face.axis).map(|b| self.h[b]).product()
    }

    pub fn face_center(&self, face: &Face) -> [f64; 3] {
        let c = &self.cells[face.cell];
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = c.lower[a] + 0.5 * self.h[a];
        }
        x[face.axis] = c.lower[face.axis] + if face.positive { self.h[face.axis] } else { 0.0 };
        x
    }

    pub fn cell_center(&self, ci: usize) -> [f64; 3] {
        let c = &self.cells[ci];
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = c.lower[a] + 0.5 * self.h[a];
        }
        x
    }

    /// Map reference coordinates in [-1,1]^d of cell `ci` to physical space.
    pub fn map_to_physical(&self, ci: usize, xi: &[f64]) -> [f64; 3] {
        let c = &self.cells[ci];
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = c.lower[a] + 0.5 * (xi[a] + 1.0) * self.h[a];
        }
        x
    }

    /// Map a physical point into the reference coordinates of cell `ci`.
    pub fn map_to_reference(&self, ci: usize, x: &[f64]) -> [f64; 3] {
        let c = &self.cells[ci];
        let mut xi = [0.0; 3];
        for a in 0..self.dim {
            xi[a] = 2.0 * (x[a] - c.lower[a]) / self.h[a] - 1.0;
        }
        xi
    }

    /// Cell containing the lattice position, if any.
    pub fn cell_at(&self, index: &[i64; 3]) -> Option<usize> {
        self.cell_lookup.get(index).copied()
    }

    /// Cell containing physical point `x` (ties resolved towards lower index).
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        let mut base = [0i64; 3];
        for a in 0..self.dim {
            base[a] = ((x[a] - self.origin[a]) / self.h[a]).floor() as i64;
        }
        // points on cell boundaries may sit in any adjacent cell
        for shift in 0..(1usize << self.dim) {
            let mut idx = base;
            for a in 0..self.dim {
                idx[a] -= ((shift >> a) & 1) as i64;
            }
            if let Some(c) = self.cell_at(&idx) {
                let xi = self.map_to_reference(c, x);
                if (0..self.dim).all(|a| xi[a] >= -1.0 - 1e-10 && xi[a] <= 1.0 + 1e-10) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Vertex patches: for every vertex, the cells that contain it.
    pub fn vertex_patches(&self) -> Vec<Vec<usize>> {
        let mut patches = vec![Vec::new(); self.n_vertices()];
        for (ci, c) in self.cells.iter().enumerate() {
            for &v in &c.vertices[..1 << self.dim] {
                patches[v].push(ci);
            }
        }
        patches
    }

    /// Verify that the level is a conforming partition: interior faces are
    /// shared by exactly two cells and boundary faces are tagged.
    pub fn check_conformity(&self) -> Result<()> {
        let expected = 2 * self.dim * self.n_cells();
        let interior = self.faces.iter().filter(|f| !f.is_boundary()).count();
        let boundary = self.faces.len() - interior;
        if 2 * interior + boundary != expected {
            return Err(Error::Mesh(format!(
                "face count mismatch: {interior} interior, {boundary} boundary, {} cells",
                self.n_cells()
            )));
        }
        for f in &self.faces {
            if let Some(nb) = f.neighbor {
                let mut idx = self.cells[f.cell].index;
                idx[f.axis] += 1;
                if self.cells[nb].index != idx {
                    return Err(Error::Mesh("neighbor lattice mismatch".into()));
                }
            } else if f.tag.is_none() {
                return Err(Error::Mesh("untagged boundary face".into()));
            }
        }
        Ok(())
    }
}

/// A sequence of uniformly refined levels, coarsest first.
#[derive(Debug, Clone)]
pub struct MeshHierarchy {
    pub spec: DomainSpec,
    pub levels: Vec<MeshLevel>,
}

impl MeshHierarchy {
    /// Build levels 0..=`refinements`. Children of a cell are numbered
    /// lexicographically (axis 0 fastest) and stored contiguously.
    pub fn build(spec: &DomainSpec, refinements: usize) -> Result<Self> {
        if spec.dim != 2 && spec.dim != 3 {
            return Err(Error::Mesh(format!("unsupported dimension {}", spec.dim)));
        }
        if spec.coarse_cells.is_empty() {
            return Err(Error::Mesh("domain has no cells".into()));
        }
        let coarse = spec.coarse_cells.iter().map(|&c| (c, None)).collect();
        let mut levels = vec![MeshLevel::build(spec, 0, coarse)?];
        for l in 1..=refinements {
            let prev = &levels[l - 1];
            let dim = spec.dim;
            let mut children = Vec::with_capacity(prev.n_cells() << dim);
            for (pi, c) in prev.cells.iter().enumerate() {
                for child in 0..(1usize << dim) {
                    let mut idx = [0i64; 3];
                    for a in 0..dim {
                        idx[a] = 2 * c.index[a] + ((child >> a) & 1) as i64;
                    }
                    children.push((idx, Some(pi)));
                }
            }
            levels.push(MeshLevel::build(spec, l, children)?);
        }
        for lvl in &levels {
            lvl.check_conformity()?;
        }
        Ok(Self { spec: spec.clone(), levels })
    }

    pub fn finest(&self) -> &MeshLevel {
        self.levels.last().expect("hierarchy has at least one level")
    }
}
