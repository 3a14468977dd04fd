//! Trigonometric fundamental and interpolation splines.
//!
//! A spline on an odd uniform grid of `N` nodes is the Fourier series whose
//! channel `j ≤ (N−1)/2` collects the aliased frequencies `mN ± j`, each
//! damped by a convergence factor `σ(n) = O(n^{-(1+r)})`. Normalising every
//! channel by its value at the nodes gives cardinal basis functions `st_k`
//! that are `r − 1` times continuously differentiable.
//!
//! ```
//! use trigspline::{FactorSpec64, Indicator, Spline64, SplineConfig64};
//!
//! let cfg = SplineConfig64::simple(
//!     9,
//!     1,
//!     Indicator::Zero,
//!     Indicator::Zero,
//!     FactorSpec64::constant_power(1.0, 1),
//! );
//! let spline = Spline64::new(cfg).unwrap();
//! let at_own_node = spline.fundamental_value(5, 8.0 * std::f64::consts::PI / 9.0).unwrap();
//! assert!((at_own_node.value - 1.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod factors;
pub mod grids;
pub mod oracle;
pub mod polylog;
mod scalar;
pub mod spline;

pub use error::{Channel, Error, Result};
pub use factors::{BaseFamily, DecayBound, Expansion, FactorSpec, ParityKind, PowerWave, Transform};
pub use grids::{grid_nodes, selected_node, GridSpec, Indicator};
pub use oracle::{
    cardinal_by_linear_solve, derivative_jump_estimate, quadrature_fourier_coefficient, BumpKind,
    CardinalOracle, Convention,
};
pub use scalar::Real;
pub use spline::{
    channel_even, channel_odd, fundamental_derivative, fundamental_value, interpolant_value,
    sign_exponent, Branch, EvalReport, FilterMode, FilterVectors, SampleSet, SignVariant, Spline,
    SplineConfig, TruncationControl,
};

pub type FactorSpec64 = FactorSpec<f64>;
pub type FactorSpec32 = FactorSpec<f32>;
pub type SplineConfig64 = SplineConfig<f64>;
pub type SplineConfig32 = SplineConfig<f32>;
pub type Spline64 = Spline<f64>;
pub type Spline32 = Spline<f32>;
pub type SampleSet64 = SampleSet<f64>;
pub type SampleSet32 = SampleSet<f32>;
pub type EvalReport64 = EvalReport<f64>;
pub type EvalReport32 = EvalReport<f32>;
