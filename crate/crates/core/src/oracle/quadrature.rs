//! Fourier cosine coefficients of compact bumps by adaptive Gauss–Legendre
//! quadrature, and the scan that decides which normalisation a closed form uses.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factors::{bump_poly_coefficient, bump_sine_coefficient};

pub const QUADRATURE_TARGET: f64 = 1e-12;
pub const MAX_INTERVALS: usize = 4096;
pub const SCAN_TOLERANCE: f64 = 1e-6;
pub const SCAN_ALPHAS: [f64; 3] = [0.3, 0.5, 1.0];
pub const SCAN_K: std::ops::RangeInclusive<u64> = 1..=50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BumpKind {
    /// `sin^r(π/2 · (1 − |t|/α))`
    SinePower,
    /// `(1 − (t/α)²)^r`
    PolyPower,
}

impl BumpKind {
    pub fn shape(self, r: u32, alpha: f64, t: f64) -> f64 {
        let u = t.abs() / alpha;
        if u >= 1.0 {
            return 0.0;
        }
        match self {
            BumpKind::SinePower => (FRAC_PI_2 * (1.0 - u)).sin().powi(r as i32),
            BumpKind::PolyPower => (1.0 - u * u).powi(r as i32),
        }
    }

    /// Orders the closed forms cover.
    pub fn orders(self) -> std::ops::RangeInclusive<u32> {
        match self {
            BumpKind::SinePower => 1..=6,
            BumpKind::PolyPower => 1..=4,
        }
    }

    pub fn closed_form(self, r: u32, alpha: f64, k: u64) -> Result<f64> {
        match self {
            BumpKind::SinePower => bump_sine_coefficient(r, alpha, k),
            BumpKind::PolyPower => bump_poly_coefficient(r, alpha, k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BumpKind::SinePower => "sine-power bump",
            BumpKind::PolyPower => "polynomial bump",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// `∫ f(t) cos(kt) dt` with `∫ f = 1`.
    UnitIntegral,
    /// The same integral divided by `π`.
    OverPi,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::UnitIntegral, Convention::OverPi];
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Gauss–Legendre nodes on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for m in 2..=n {
                let mf = m as f64;
                let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn rules() -> &'static (Rule, Rule) {
    static R: OnceLock<(Rule, Rule)> = OnceLock::new();
    R.get_or_init(|| (gauss_legendre(15), gauss_legendre(30)))
}

fn apply(rule: &Rule, f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
}

/// `∫_a^b f` to absolute error `target`, comparing the 15- and 30-point rules
/// and bisecting the worst interval.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, target: f64) -> Result<f64> {
    let (lo, hi) = rules();
    let eval = |a: f64, b: f64| {
        let fine = apply(hi, &f, a, b);
        (fine, (fine - apply(lo, &f, a, b)).abs())
    };
    let (v, e) = eval(a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= target {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNoConvergence {
                target,
                estimate: err,
                intervals: parts.len(),
            });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (a, b, _, _) = parts.swap_remove(worst);
        let m = 0.5 * (a + b);
        let (v1, e1) = eval(a, m);
        let (v2, e2) = eval(m, b);
        parts.push((a, m, v1, e1));
        parts.push((m, b, v2, e2));
    }
}

/// Normalising constant `C_r` with `C_r ∫ shape = 1`.
pub fn normalization(bump: BumpKind, r: u32, alpha: f64) -> Result<f64> {
    let half = integrate(|t| bump.shape(r, alpha, t), 0.0, alpha, QUADRATURE_TARGET * alpha)?;
    Ok(1.0 / (2.0 * half))
}

/// Cosine coefficient of the normalised bump to absolute error `10⁻¹²`.
pub fn quadrature_fourier_coefficient(
    bump: BumpKind,
    r: u32,
    alpha: f64,
    k: u64,
    convention: Convention,
) -> Result<f64> {
    quadrature_fourier_coefficient_to(bump, r, alpha, k, convention, QUADRATURE_TARGET)
}

/// As [`quadrature_fourier_coefficient`] with an explicit absolute target.
pub fn quadrature_fourier_coefficient_to(
    bump: BumpKind,
    r: u32,
    alpha: f64,
    k: u64,
    convention: Convention,
    target: f64,
) -> Result<f64> {
    if r == 0 || !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidFactor(format!(
            "quadrature needs r >= 1 and 0 < alpha < pi, got r = {r}, alpha = {alpha}"
        )));
    }
    let c = normalization(bump, r, alpha)?;
    let kf = k as f64;
    // the shape is even; integrate one side where it is smooth
    let half = integrate(
        |t| bump.shape(r, alpha, t) * (kf * t).cos(),
        0.0,
        alpha,
        target / (2.0 * c),
    )?;
    let v = 2.0 * c * half;
    Ok(match convention {
        Convention::UnitIntegral => v,
        Convention::OverPi => v / PI,
    })
}

/// Largest relative disagreement between closed form and quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct ConventionScore {
    pub convention: Convention,
    pub worst_relative: f64,
    pub worst_at: (u32, f64, u64),
}

/// Compares every covered order over the `(α, k)` scan grid under both
/// conventions and returns the unique convention that agrees to `10⁻⁶`.
pub fn scan_convention(bump: BumpKind) -> Result<(Convention, Vec<ConventionScore>)> {
    let mut scores = Vec::new();
    for conv in Convention::ALL {
        let mut worst = ConventionScore {
            convention: conv,
            worst_relative: 0.0,
            worst_at: (0, 0.0, 0),
        };
        for r in bump.orders() {
            for alpha in SCAN_ALPHAS {
                for k in SCAN_K {
                    let closed = bump.closed_form(r, alpha, k)?;
                    // tight enough that small coefficients keep relative precision
                    let target = (1e-9 * closed.abs()).clamp(1e-15, QUADRATURE_TARGET);
                    let q = quadrature_fourier_coefficient_to(bump, r, alpha, k, conv, target)?;
                    let rel = (q - closed).abs() / closed.abs();
                    if !(rel <= worst.worst_relative) {
                        worst.worst_relative = rel;
                        worst.worst_at = (r, alpha, k);
                    }
                }
            }
        }
        scores.push(worst);
    }
    let matching: Vec<_> = scores
        .iter()
        .filter(|s| s.worst_relative <= SCAN_TOLERANCE)
        .collect();
    match matching.as_slice() {
        [one] => Ok((one.convention, scores.clone())),
        _ => Err(Error::AmbiguousConvention {
            family: bump.name(),
            detail: scores
                .iter()
                .map(|s| format!("{:?}: worst relative {:e} at {:?}", s.convention, s.worst_relative, s.worst_at))
                .collect::<Vec<_>>()
                .join("; "),
        }),
    }
}
