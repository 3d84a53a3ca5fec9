use alloc::string::String;

/// Errors shared by every module of the crate.
///
/// The library treats questionable inputs as hard errors rather than
/// clamping or returning infinities: potentials like `−log z` blow up at
/// their domain boundary, and silently patching an evaluation there would
/// hide quadrature bugs behind plausible-looking numbers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument left the open domain of a scalar potential.
    #[error("argument {value} is outside the potential domain ({lo}, {hi})")]
    OutOfDomain {
        /// The offending argument.
        value: f64,
        /// Lower domain endpoint (may be −∞).
        lo: f64,
        /// Upper domain endpoint (may be +∞).
        hi: f64,
    },

    /// A dual value has no preimage under the potential's derivative.
    #[error("no dual point: {xstar} is outside the range of the derivative")]
    NoDualPoint {
        /// The dual value that could not be inverted.
        xstar: f64,
    },

    /// A constructor or operation precondition failed.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    /// A quadrature node produced a non-finite integrand value.
    #[error("non-finite integrand at quadrature node u = {node}")]
    NonFiniteIntegrand {
        /// The node in (0,1) at which the integrand failed.
        node: f64,
    },

    /// A scalar-potential domain violation occurred inside a quadrature,
    /// reported with the offending node.
    #[error("integrand left the potential domain at node u = {node}: {source}")]
    DomainAtNode {
        /// The node in (0,1) at which the violation occurred.
        node: f64,
        /// The underlying domain error.
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    /// A quantile query landed on a zero-density plateau of a grid density.
    #[error("degenerate quantile at u = {u}: zero-density plateau")]
    DegenerateQuantile {
        /// The probability level that hit the plateau.
        u: f64,
    },

    /// A quantile derivative was not strictly positive where a transport
    /// divergence requires an invertible map.
    #[error("degenerate map: quantile derivative {derivative} at u = {u} is not positive")]
    DegenerateMap {
        /// The probability level of the offending evaluation.
        u: f64,
        /// The non-positive derivative value found there.
        derivative: f64,
    },

    /// A matrix expected to be symmetric positive-definite was not.
    #[error("matrix is not positive-definite: eigenvalue {eigenvalue} (ratio bound {ratio_bound})")]
    NotSpd {
        /// The offending (smallest) eigenvalue.
        eigenvalue: f64,
        /// The smallest admissible value, 1e-10 × the largest eigenvalue.
        ratio_bound: f64,
    },

    /// Two multivariate operands had different dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch {
        /// Dimension of the left operand.
        left: usize,
        /// Dimension of the right operand.
        right: usize,
    },

    /// A classical KL divergence is +∞ because `p` puts mass where `q`
    /// vanishes.
    #[error("infinite divergence: p has mass where q vanishes (near x = {x})")]
    InfiniteDivergence {
        /// A grid point witnessing the support violation.
        x: f64,
    },

    /// A perturbation strength exceeds the bound keeping `id + ε∇Φ` monotone.
    #[error("perturbation ε = {eps} exceeds the monotonicity bound {eps_max}")]
    MonotonicityViolated {
        /// The requested perturbation strength.
        eps: f64,
        /// The largest strength for which the perturbed map stays monotone.
        eps_max: f64,
    },

    /// A text-format density file could not be parsed.
    #[error("parse error on line {line}: {reason}")]
    Parse {
        /// 1-based line number in the input.
        line: usize,
        /// Human-readable description of the problem.
        reason: String,
    },
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
