//! Time marching, manufactured solutions, error norms, goal quantities and
//! performance bookkeeping.

pub mod benchmark;
pub mod goal;
pub mod manufactured;
pub mod march;
pub mod norms;
pub mod perf;

pub use benchmark::LShapeLoad;
pub use goal::{discrete_energy, GoalEvaluator};
pub use manufactured::{Fn1d, InitialFromExact, Manufactured, Profile};
pub use march::{end_state, DirectSlabSolver, Marcher, SlabRecord, SlabSolver, SolveStats};
pub use perf::{most_productive, perf_model, Measurement, PerfRow};
pub use norms::{compute_eoc, ErrorIntegrator, ErrorReport};
