//! Audit engine for Noether point symmetries of the Bianchi type II geodesic
//! Lagrangian.
//!
//! The symbolic layer is generic over the coefficient field ([`Scalar`]);
//! the numeric layer is generic over [`num_traits::Float`]. The aliases at
//! the crate root fix the exact rational field and `f64` used by the audit.

pub mod conslaw;
pub mod error;
pub mod geometry;
pub mod liealg;
pub mod noether;
pub mod report;
pub mod scalar;
pub mod symbolic;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact coefficient field of the audit.
pub type Rational = num_rational::BigRational;
pub type Expr = symbolic::Expr<Rational>;
pub type Poly = symbolic::Poly<Rational>;
pub type RuleSet = symbolic::RewriteRuleSet<Rational>;
