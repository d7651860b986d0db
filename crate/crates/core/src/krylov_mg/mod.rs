//! Krylov solver, geometric multigrid and the Vanka smoother.

pub mod direct;
pub mod fgmres;
pub mod multigrid;
pub mod transfer;
pub mod vanka;

pub use direct::DirectSolver;
pub use multigrid::{GmgSlabSolver, MgParams, Multigrid, VCycle};
pub use fgmres::{fgmres, FgmresParams, FgmresResult, Identity, LinearOperator, Preconditioner};
pub use transfer::Transfer;
pub use vanka::{PatchKind, PatchSolver, VankaSmoother};
