//! Space-time finite element solver for the dynamic Biot system of
//! poroelasticity.
//!
//! Time is discretized by discontinuous Galerkin polynomials of degree `k`
//! collocated at the right Gauss-Radau points, space by continuous `Q_r`
//! displacement and velocity with `P_{r-1}` discontinuous or `Q_{r-1}`
//! continuous pressure. Boundary conditions are imposed weakly with
//! Nitsche terms. Each time slab is solved with flexible GMRES,
//! preconditioned by a geometric multigrid V-cycle whose smoother is a
//! patchwise Vanka iteration, or by a sparse direct solver.

pub mod assembly;
pub mod config;
pub mod error;
pub mod driver;
pub mod experiment;
pub mod femcore;
pub mod krylov_mg;
pub mod meshkit;
pub mod sparse;

pub use error::{Error, Result};
