//! Independent reference computations used to check the closed forms.

mod cardinal;
mod jumps;
mod quadrature;

pub use cardinal::{
    cardinal_by_linear_solve, CardinalOracle, KernelMatrix, CONDITION_LIMIT, ORACLE_DEPTH, ORACLE_TAIL,
};
pub use jumps::{
    calibrate_theta_cont, calibrate_theta_kink, derivative_jump_estimate, jump_of, kink_nodes,
    smooth_reference_jump, DEFAULT_STEP,
};
pub use quadrature::{
    integrate, normalization, quadrature_fourier_coefficient, quadrature_fourier_coefficient_to,
    scan_convention, BumpKind, Convention, ConventionScore, MAX_INTERVALS, QUADRATURE_TARGET,
    SCAN_ALPHAS, SCAN_K, SCAN_TOLERANCE,
};
