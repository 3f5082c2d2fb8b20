use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown symbol `{name}` at byte {position}")]
    UnknownSymbol { position: usize, name: String },

    #[error("negative power of `{0}` is not allowed")]
    NegativePower(String),

    #[error("cannot invert non-monomial expression `{0}`")]
    NonMonomialInverse(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid rewrite rule: {0}")]
    InvalidRule(String),

    #[error("rewrite rules are cyclic through `{0}`")]
    CyclicRules(String),

    #[error("substitution bindings are cyclic through `{0}`")]
    CyclicBindings(String),

    #[error("first-order total derivative applied to an expression with acceleration `{0}`")]
    AccelerationInJet(String),

    #[error("velocity degree {0} exceeds 3")]
    VelocityDegree(i64),

    #[error("generator coefficient depends on jet variable `{0}`")]
    JetInGenerator(String),

    #[error("component solution is not linear in the parameters: `{0}`")]
    NonlinearSolution(String),

    #[error("bracket [X{i}, X{j}] is not in the span of the basis (residual {residual})")]
    NonClosure { i: usize, j: usize, residual: String },

    #[error("basis is linearly dependent")]
    DependentBasis,

    #[error("invalid metric: {0}")]
    Metric(String),

    #[error("no numeric value for atom `{0}`")]
    Unbound(String),

    #[error("trajectory left the finite range at s = {s}")]
    Diverged { s: f64, state: [f64; 8] },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
