//! Invariant suites behind `validate`.

use std::f64::consts::TAU;

use trigspline::oracle::scan_convention;
use trigspline::{BumpKind, CardinalOracle, Spline64, SplineConfig64};

pub const CARDINAL_TOL: f64 = 1e-8;
pub const PARTITION_TOL: f64 = 1e-8;
pub const SCALE_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-8;
pub const SCALES: [f64; 2] = [1e-3, 1e3];
pub const PARTITION_POINTS: usize = 100;
pub const SCALE_POINTS: usize = 64;
pub const ORACLE_POINTS: usize = 512;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub suite: &'static str,
    /// `Err` holds a numeric failure that stopped the suite.
    pub result: Result<(bool, String), trigspline::Error>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        matches!(self.result, Ok((true, _)))
    }
}

type SuiteResult = trigspline::Result<(bool, String)>;

fn cardinality(cfg: &SplineConfig64) -> SuiteResult {
    let s = Spline64::new(cfg.clone())?;
    let g = cfg.interpolation_grid();
    let mut worst = 0.0f64;
    for k in 1..=cfg.n {
        for i in 1..=cfg.n {
            let v = s.fundamental_value(k, g.node(i))?.value;
            let want = if i == k { 1.0 } else { 0.0 };
            worst = worst.max((v - want).abs());
        }
    }
    Ok((worst <= CARDINAL_TOL, format!("max |st_k(x_i) - delta_ki| = {worst:.3e}")))
}

fn partition(cfg: &SplineConfig64) -> SuiteResult {
    let s = Spline64::new(cfg.clone())?;
    let mut worst = 0.0f64;
    for i in 0..PARTITION_POINTS {
        let t = TAU * (i as f64 + 0.5) / PARTITION_POINTS as f64;
        let mut sum = 0.0;
        for k in 1..=cfg.n {
            sum += s.fundamental_value(k, t)?.value;
        }
        worst = worst.max((sum - 1.0).abs());
    }
    Ok((worst <= PARTITION_TOL, format!("max |sum_k st_k - 1| = {worst:.3e}")))
}

fn scale(cfg: &SplineConfig64) -> SuiteResult {
    let base = Spline64::new(cfg.clone())?;
    let mut worst = 0.0f64;
    for s in SCALES {
        let scaled = Spline64::new(cfg.clone().with_factor(cfg.factor.clone().scaled(s)))?;
        for i in 0..SCALE_POINTS {
            let t = TAU * i as f64 / SCALE_POINTS as f64;
            for k in 1..=cfg.n {
                let d = scaled.fundamental_value(k, t)?.value - base.fundamental_value(k, t)?.value;
                worst = worst.max(d.abs());
            }
        }
    }
    Ok((worst <= SCALE_TOL, format!("max change under scaling = {worst:.3e}")))
}

fn oracle(cfg: &SplineConfig64, k: usize) -> SuiteResult {
    let s = Spline64::new(cfg.clone())?;
    let o = CardinalOracle::new(cfg)?;
    let reference = o.cardinal_on_grid(k, ORACLE_POINTS)?;
    let mut worst = 0.0f64;
    for (i, r) in reference.iter().enumerate() {
        let t = TAU * i as f64 / ORACLE_POINTS as f64;
        worst = worst.max((s.fundamental_value(k, t)?.value - r).abs());
    }
    Ok((worst <= ORACLE_TOL, format!("k = {k}: max gap to linear solve = {worst:.3e}")))
}

fn conventions() -> SuiteResult {
    let mut parts = Vec::new();
    for bump in [BumpKind::SinePower, BumpKind::PolyPower] {
        let (conv, scores) = scan_convention(bump)?;
        let best = scores
            .iter()
            .find(|s| s.convention == conv)
            .map_or(f64::NAN, |s| s.worst_relative);
        parts.push(format!("{}: {conv:?} ({best:.1e})", bump.name()));
    }
    Ok((true, parts.join("; ")))
}

/// Runs every suite on `cfg`, using center `k` for the oracle comparison.
pub fn run_all(cfg: &SplineConfig64, k: usize) -> Vec<Outcome> {
    vec![
        Outcome { suite: "cardinality", result: cardinality(cfg) },
        Outcome { suite: "partition of unity", result: partition(cfg) },
        Outcome { suite: "scale invariance", result: scale(cfg) },
        Outcome { suite: "oracle equivalence", result: oracle(cfg, k) },
        Outcome { suite: "convention scan", result: conventions() },
    ]
}
