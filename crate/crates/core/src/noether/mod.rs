//! Noether symmetry conditions for the geodesic Lagrangian: prolongation,
//! residuals, the determining system, the case catalog and the audit.

mod audit;
mod catalog;
mod residual;
mod system;

pub use audit::*;
pub use catalog::*;
pub use residual::*;
pub use system::*;
