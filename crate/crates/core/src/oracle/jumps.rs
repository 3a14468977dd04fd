//! One-sided finite-difference probes of derivative jumps at stitching nodes.

use nalgebra::{Matrix4, Vector4};

use crate::error::Result;
use crate::factors::FactorSpec;
use crate::grids::{GridSpec, Indicator};
use crate::spline::{Spline, SplineConfig};

pub const DEFAULT_STEP: f64 = 1e-3;

/// Weights `w` with `Σ w_i p(s_i) = p^(order)(0)` for every cubic `p`,
/// `s_i = side · i`, `i = 1..4`, in units of the step.
fn stencil(order: u32, side: f64) -> Vector4<f64> {
    let v = Matrix4::from_fn(|m, i| (side * (i + 1) as f64).powi(m as i32));
    let mut rhs = Vector4::zeros();
    if order <= 3 {
        rhs[order as usize] = (1..=order).product::<u32>() as f64;
    }
    v.lu().solve(&rhs).expect("Vandermonde on distinct nodes")
}

/// `|D⁺ − D⁻|` where `D±` extrapolate the `order`-th derivative of
/// `f` to `node` from four samples on either side.
pub fn jump_of(mut f: impl FnMut(f64) -> f64, node: f64, order: u32, h: f64) -> f64 {
    let mut side = |s: f64| {
        let w = stencil(order, s);
        (0..4).map(|i| w[i] * f(node + s * h * (i + 1) as f64)).sum::<f64>() / h.powi(order as i32)
    };
    (side(1.0) - side(-1.0)).abs()
}

impl Spline<f64> {
    /// Jump of the `order`-th derivative of `st_k` across `node`.
    pub fn derivative_jump_estimate(&self, k: usize, node: f64, order: u32, h: f64) -> Result<f64> {
        let mut err = None;
        let j = jump_of(
            |t| match self.fundamental_value(k, t) {
                Ok(r) => r.value,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            },
            node,
            order,
            h,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(j),
        }
    }
}

pub fn derivative_jump_estimate(config: &SplineConfig<f64>, k: usize, node: f64, order: u32, h: f64) -> Result<f64> {
    Spline::new(config.clone())?.derivative_jump_estimate(k, node, order, h)
}

/// Jump measured on `cos(freq·t)`, which has no jump at all: what the
/// stencils report for a smooth function of that bandwidth.
pub fn smooth_reference_jump(freq: f64, node: f64, order: u32, h: f64) -> f64 {
    jump_of(|t| (freq * t).cos(), node, order, h)
}

/// Stitching nodes within one grid step of the center `x_k`: the places
/// where `st_k` has a visible kink when `r = 1`.
pub fn kink_nodes(config: &SplineConfig<f64>, k: usize) -> Vec<f64> {
    let n = config.n;
    let step = std::f64::consts::TAU / n as f64;
    let x = config.interpolation_grid().node::<f64>(k);
    let g = config.stitching_grid();
    (1..=n)
        .map(|i| g.node::<f64>(i))
        .filter(|&s| {
            let d = (s - x).rem_euclid(std::f64::consts::TAU);
            d.min(std::f64::consts::TAU - d) <= step * (1.0 + 1e-12)
        })
        .collect()
}

/// Ten times the largest order-1 jump of `cos t` at the stitching nodes of
/// both grids with `N = 9`.
pub fn calibrate_theta_cont() -> f64 {
    let mut worst = 0.0f64;
    for ind in Indicator::BOTH {
        let g = GridSpec { n: 9, indicator: ind };
        for i in 1..=9 {
            worst = worst.max(smooth_reference_jump(1.0, g.node(i), 1, DEFAULT_STEP));
        }
    }
    10.0 * worst
}

/// Half the smallest order-1 kink of `st_5` at its kink nodes, `N = 9`,
/// `r = 1`, constant-power factor, over all four grid pairs.
pub fn calibrate_theta_kink() -> Result<f64> {
    let mut least = f64::INFINITY;
    for i1 in Indicator::BOTH {
        for i2 in Indicator::BOTH {
            let cfg = SplineConfig::simple(9, 1, i1, i2, FactorSpec::constant_power(1.0, 1));
            let s = Spline::new(cfg.clone())?;
            for node in kink_nodes(&cfg, 5) {
                least = least.min(s.derivative_jump_estimate(5, node, 1, DEFAULT_STEP)?);
            }
        }
    }
    Ok(0.5 * least)
}
