use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which channel of a fundamental spline an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Even,
    Odd,
    Collapsed,
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Channel::Even => "even",
            Channel::Odd => "odd",
            Channel::Collapsed => "collapsed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid factor specification: {0}")]
    InvalidFactor(String),

    #[error("{transform} transform left its domain at j = {j} (base value {base})")]
    Domain {
        transform: &'static str,
        j: u64,
        base: f64,
    },

    #[error("singular denominator in bump coefficient (r = {r}, alpha = {alpha}, k = {k}); perturb alpha")]
    SingularDenominator { r: u32, alpha: f64, k: u64 },

    #[error("polynomial bump coefficients are tabulated for r in 1..=4 only, got r = {0}")]
    UnsupportedOrder(u32),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid spline configuration: {0}")]
    InvalidConfig(String),

    #[error("sample set has {got} values, grid has {expected} nodes")]
    SampleLength { expected: usize, got: usize },

    #[error("degenerate {channel} denominator at j = {j} (|h| = {value:e}, largest term {scale:e})")]
    DenominatorDegenerate {
        j: usize,
        channel: Channel,
        value: f64,
        scale: f64,
    },

    #[error("truncation incomplete: tail bound {bound:e} exceeds epsilon {epsilon:e} at m_max = {m_max}")]
    TruncationIncomplete {
        bound: f64,
        epsilon: f64,
        m_max: usize,
    },

    #[error("derivative order {order} exceeds smoothness order r = {r}")]
    OrderTooHigh { order: u32, r: u32 },

    #[error("series diverges at this point (order-{order} derivative evaluated on a knot)")]
    SeriesDivergent { order: u32 },

    #[error("kernel matrix is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("adaptive quadrature did not reach {target:e} (estimate {estimate:e}) within {intervals} subintervals")]
    QuadratureNoConvergence {
        target: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("convention scan for {family} is ambiguous: {detail}")]
    AmbiguousConvention { family: &'static str, detail: String },
}
