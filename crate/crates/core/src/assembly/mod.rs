//! Assembly of the spatial forms, the space-time slab operator and the
//! slab right-hand sides.

pub mod data;
pub mod diagnostics;
pub mod forms;
pub mod params;
pub mod projection;
pub mod rhs;
pub mod slab;

pub use data::{ExactSolution, ProblemData, SlabState, ZeroData};
pub use forms::{assemble_forms, FormMatrices};
pub use params::{FaceSizeMode, Material, NitscheParams};
pub use rhs::RhsAssembler;
pub use slab::{Formulation, SlabOperator, SpatialBlocks};

use crate::femcore::{MixedSpace, Pair};
use crate::meshkit::MeshLevel;

/// Spaces and assembled forms of one mesh level.
#[derive(Debug, Clone)]
pub struct Level {
    pub mesh: MeshLevel,
    pub space: MixedSpace,
    pub forms: FormMatrices,
}

impl Level {
    pub fn new(mesh: &MeshLevel, r: usize, pair: Pair, mat: &Material, nit: &NitscheParams) -> Self {
        let space = MixedSpace::new(mesh, r, pair);
        let forms = assemble_forms(mesh, &space, mat, nit);
        Self { mesh: mesh.clone(), space, forms }
    }

    pub fn block_size(&self) -> usize {
        self.space.block_size()
    }
}
