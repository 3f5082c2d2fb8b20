//! Metric components, Christoffel symbols, geodesic equations and their
//! numerical integration.

mod integrate;
mod metric;
mod numeric;

pub use integrate::*;
pub use metric::*;
pub use numeric::{ClosedForm, MetricEvaluator, NumericMetric};
