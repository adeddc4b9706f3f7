//! Exact coefficients and sparse polynomials over a shared indeterminate table.

mod exact;
pub(crate) mod poly;
mod registry;
mod text;

pub use exact::ExactScalar;
pub use poly::{Monomial, ScalarPoly};
pub use registry::{Family, Indices, Kind, Marker, Registry, VarId};
