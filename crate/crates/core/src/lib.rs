//! Numerical verification of Riemannian submersion geometry.
//!
//! Metrics, almost complex structures, submersion maps and Clairaut
//! functions are given as symbolic expressions over one global chart. The
//! crate evaluates the Levi-Civita connection, the O'Neill tensors of the
//! submersion and the vertical/horizontal splittings pointwise, and checks
//! structural identities at seeded sample points and along integrated
//! geodesics.

pub mod clairaut;
pub mod cli;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod hermitian;
pub mod linalg;
pub mod presets;
pub mod report;
pub mod submersion;

pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use geometry::{GeodesicTrajectory, ManifoldSpec, SamplingDomain, VectorField};
pub use hermitian::AlmostComplexField;
pub use linalg::{Matrix, Vector};
pub use report::CheckReport;
pub use submersion::{Frame, SmoothMap, Submersion};
