//! Convergence-factor families.
//!
//! A factor `σ(j)` multiplies Fourier channel `j` and decays like
//! `j^-(1+r)`. Every family here can be evaluated at an integer frequency,
//! reports its decay order, gives a monotone tail envelope for rigorous
//! truncation, and splits itself into exactly summable power waves plus a
//! residual with a certified bound (see [`Expansion`]).

mod expansion;
mod families;
mod json;

pub use expansion::{DecayBound, Expansion, PowerWave};
pub use families::{
    base_constant_factor, bump_poly_coefficient, bump_sine_coefficient, composite_factor,
    product_factor, sinc_power_factor, transformed_factor,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Family a [`Transform`] is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseFamily {
    /// `α / j^(1+r)`, constant sign.
    ConstantPower,
    /// `sinc(αj)^(1+r)`, sign changing.
    SincPower,
}

/// Transforms asymptotically equivalent to the identity near zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform<T> {
    Sin,
    Arcsin,
    Tan,
    Arctan,
    /// `ln a · log_a(1 + b)`
    Log { a: T },
    /// `(a^b − 1) / ln a`
    Exp { a: T },
    /// `m((1 + b)^(1/m) − 1)`
    Root { m: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityKind {
    /// `(−1)^j`
    Alternating,
    /// `(1 + (−1)^j) / 2`
    EvenOnly,
}

/// A closed description of one convergence-factor family instance.
///
/// Values are immutable once built and can be evaluated concurrently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "json::FactorRepr<T>",
    into = "json::FactorRepr<T>",
    bound = "T: Real"
)]
pub enum FactorSpec<T> {
    ConstantPower {
        alpha: T,
        r: u32,
    },
    SincPower {
        alpha: T,
        r: u32,
    },
    Transformed {
        transform: Transform<T>,
        base: BaseFamily,
        alpha: T,
        r: u32,
    },
    /// Fourier coefficients of the sine-power bump, `μ_k(r, α)`.
    BumpSine {
        alpha: T,
        r: u32,
    },
    /// Fourier coefficients of the polynomial bump, `v_k(r, α)`, r ≤ 4.
    BumpPoly {
        alpha: T,
        r: u32,
    },
    /// Arbitrary table `head[j-1]` for `j ≤ head.len()`, `tail` beyond.
    Composite {
        head: Vec<T>,
        tail: Box<FactorSpec<T>>,
    },
    Product(Box<FactorSpec<T>>, Box<FactorSpec<T>>),
    /// Sign modulation with decay order 0; only useful inside a product.
    Parity(ParityKind),
    /// `scale · factor`.
    Scaled {
        scale: T,
        factor: Box<FactorSpec<T>>,
    },
}

impl<T: Real> FactorSpec<T> {
    pub fn constant_power(alpha: T, r: u32) -> Self {
        FactorSpec::ConstantPower { alpha, r }
    }

    pub fn sinc_power(alpha: T, r: u32) -> Self {
        FactorSpec::SincPower { alpha, r }
    }

    pub fn transformed(transform: Transform<T>, base: BaseFamily, alpha: T, r: u32) -> Self {
        FactorSpec::Transformed {
            transform,
            base,
            alpha,
            r,
        }
    }

    pub fn bump_sine(alpha: T, r: u32) -> Self {
        FactorSpec::BumpSine { alpha, r }
    }

    pub fn bump_poly(alpha: T, r: u32) -> Self {
        FactorSpec::BumpPoly { alpha, r }
    }

    pub fn composite(head: Vec<T>, tail: FactorSpec<T>) -> Self {
        FactorSpec::Composite {
            head,
            tail: Box::new(tail),
        }
    }

    pub fn product(f1: FactorSpec<T>, f2: FactorSpec<T>) -> Self {
        FactorSpec::Product(Box::new(f1), Box::new(f2))
    }

    /// `(−1)^j · α / j^(1+r)`
    pub fn alternating_power(alpha: T, r: u32) -> Self {
        Self::product(
            Self::constant_power(alpha, r),
            FactorSpec::Parity(ParityKind::Alternating),
        )
    }

    /// `(1 + (−1)^j)/2 · α / j^(1+r)`
    pub fn even_power(alpha: T, r: u32) -> Self {
        Self::product(
            Self::constant_power(alpha, r),
            FactorSpec::Parity(ParityKind::EvenOnly),
        )
    }

    pub fn scaled(self, scale: T) -> Self {
        FactorSpec::Scaled {
            scale,
            factor: Box::new(self),
        }
    }

    /// Short family tag, as used in the JSON form.
    pub fn family(&self) -> &'static str {
        match self {
            FactorSpec::ConstantPower { .. } => "ConstantPower",
            FactorSpec::SincPower { .. } => "SincPower",
            FactorSpec::Transformed { .. } => "Transformed",
            FactorSpec::BumpSine { .. } => "BumpSine",
            FactorSpec::BumpPoly { .. } => "BumpPoly",
            FactorSpec::Composite { .. } => "Composite",
            FactorSpec::Product(..) => "Product",
            FactorSpec::Parity(_) => "Parity",
            FactorSpec::Scaled { .. } => "Scaled",
        }
    }

    /// Check parameter domains.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFactor(msg));
        let positive = |alpha: T| alpha.is_finite() && alpha > T::zero();
        match self {
            FactorSpec::ConstantPower { alpha, r } | FactorSpec::Transformed { alpha, r, .. } => {
                if !positive(*alpha) {
                    return bad(format!("alpha must be positive, got {alpha}"));
                }
                if *r == 0 {
                    return bad("r must be at least 1".into());
                }
                if let FactorSpec::Transformed { transform, .. } = self {
                    match *transform {
                        Transform::Log { a } | Transform::Exp { a } => {
                            if !(a.is_finite() && a > T::zero() && a != T::one()) {
                                return bad(format!("log/exp base must be positive and != 1, got {a}"));
                            }
                        }
                        Transform::Root { m } if m < 2 => {
                            return bad(format!("root index must be >= 2, got {m}"));
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
            FactorSpec::SincPower { alpha, .. } => {
                if !positive(*alpha) {
                    return bad(format!("alpha must be positive, got {alpha}"));
                }
                Ok(())
            }
            FactorSpec::BumpSine { alpha, r } | FactorSpec::BumpPoly { alpha, r } => {
                if !positive(*alpha) || *alpha >= T::PI() {
                    return bad(format!("bump width alpha must lie in (0, pi), got {alpha}"));
                }
                if *r == 0 {
                    return bad("r must be at least 1".into());
                }
                if matches!(self, FactorSpec::BumpPoly { .. }) && *r > 4 {
                    return Err(Error::UnsupportedOrder(*r));
                }
                Ok(())
            }
            FactorSpec::Composite { head, tail } => {
                if head.is_empty() {
                    return bad("composite head must be nonempty".into());
                }
                if head.iter().any(|c| !c.is_finite()) {
                    return bad("composite head values must be finite".into());
                }
                tail.validate()
            }
            FactorSpec::Product(f1, f2) => {
                f1.validate()?;
                f2.validate()
            }
            FactorSpec::Parity(_) => Ok(()),
            FactorSpec::Scaled { scale, factor } => {
                if !scale.is_finite() || *scale == T::zero() {
                    return bad(format!("scale must be finite and nonzero, got {scale}"));
                }
                factor.validate()
            }
        }
    }

    /// `p` such that `σ(j) = O(j^-p)`. Single families have `p = 1 + r`;
    /// products add their operands' orders.
    pub fn decay_order(&self) -> u32 {
        match self {
            FactorSpec::ConstantPower { r, .. }
            | FactorSpec::SincPower { r, .. }
            | FactorSpec::Transformed { r, .. }
            | FactorSpec::BumpSine { r, .. }
            | FactorSpec::BumpPoly { r, .. } => 1 + r,
            FactorSpec::Composite { tail, .. } => tail.decay_order(),
            FactorSpec::Product(f1, f2) => f1.decay_order() + f2.decay_order(),
            FactorSpec::Parity(_) => 0,
            FactorSpec::Scaled { factor, .. } => factor.decay_order(),
        }
    }

    /// `σ(j)` for `j ≥ 1`.
    pub fn value(&self, j: u64) -> Result<T> {
        if j == 0 {
            return Err(Error::InvalidFactor("factors are defined for j >= 1".into()));
        }
        match self {
            FactorSpec::ConstantPower { alpha, r } => Ok(base_constant_factor(*alpha, *r, j)),
            FactorSpec::SincPower { alpha, r } => Ok(sinc_power_factor(*alpha, *r, j)),
            FactorSpec::Transformed {
                transform,
                base,
                alpha,
                r,
            } => transformed_factor(transform, *base, *alpha, *r, j),
            FactorSpec::BumpSine { alpha, r } => bump_sine_coefficient(*r, *alpha, j),
            FactorSpec::BumpPoly { alpha, r } => bump_poly_coefficient(*r, *alpha, j),
            FactorSpec::Composite { head, tail } => composite_factor(head, tail, j),
            FactorSpec::Product(f1, f2) => product_factor(f1, f2, j),
            FactorSpec::Parity(kind) => {
                let odd = j % 2 == 1;
                Ok(match (kind, odd) {
                    (ParityKind::Alternating, true) => -T::one(),
                    (ParityKind::Alternating, false) => T::one(),
                    (ParityKind::EvenOnly, true) => T::zero(),
                    (ParityKind::EvenOnly, false) => T::one(),
                })
            }
            FactorSpec::Scaled { scale, factor } => Ok(*scale * factor.value(j)?),
        }
    }

    /// Upper bound `E(J) ≥ |σ(j)|` for every `j ≥ J`, nonincreasing in `J`.
    ///
    /// Below the point where the analytic certificate applies, the exact
    /// values are scanned. A frequency at which the factor cannot be
    /// evaluated makes the envelope infinite.
    pub fn tail_envelope(&self, from: u64) -> T {
        let bound = self.envelope_bound();
        let from = from.max(1);
        let mut env = bound.at(from.max(bound.start));
        for j in from..bound.start {
            let v = self.value(j).map(|v| v.abs()).unwrap_or(T::infinity());
            env = env.max(v);
        }
        env
    }
}
