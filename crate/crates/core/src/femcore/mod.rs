//! Reference elements, quadrature, time basis and degree-of-freedom maps.

pub mod element;
pub mod lagrange;
pub mod quadrature;
pub mod space;
pub mod time_basis;

pub use quadrature::{gauss_legendre, gauss_lobatto, gauss_radau_right, Rule1d};
pub use element::{face_gauss, tensor_gauss, QuadratureNd, RefSpace, Tabulation};
pub use space::{MixedSpace, Pair, ScalarSpace, VectorSpace};
pub use time_basis::TimeBasis;
