//! Exact Lie-algebra computations over finite bases of vector fields.

mod algebra;
mod field;
pub mod linear;

pub use algebra::{
    express, independent, rational_string, structure_constants, BracketEntry, LeviVerdict, LieAlgebra, Sl2Triple,
    StructureExport,
};
pub use field::{commutator, VectorField5};
pub use linear::SubspaceQ;
