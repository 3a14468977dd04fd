//! Fundamental and interpolation splines built from aliased channel sums.

mod engine;

pub use engine::Spline;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factors::FactorSpec;
use crate::grids::{validate_node_count, GridSpec, Indicator};
use crate::scalar::Real;

/// Band weights `Γ = (γ₁, γ₂, γ₃)` for the cosine channels and
/// `H = (η₁, η₂, η₃)` for the sine channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FilterVectors<T> {
    pub gamma: [T; 3],
    pub eta: [T; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    /// `Γ = H = (1, 1, 1)`; channels collapse to `cos(n(t − x))`.
    Simple,
    /// All aliased weights zero: the trigonometric interpolation polynomial.
    Polynomial,
    General,
}

impl<T: Real> FilterVectors<T> {
    pub fn simple() -> Self {
        FilterVectors {
            gamma: [T::one(); 3],
            eta: [T::one(); 3],
        }
    }

    pub fn polynomial() -> Self {
        FilterVectors {
            gamma: [T::one(), T::zero(), T::zero()],
            eta: [T::one(), T::zero(), T::zero()],
        }
    }

    pub fn new(gamma: [T; 3], eta: [T; 3]) -> Self {
        FilterVectors { gamma, eta }
    }

    pub fn mode(&self) -> FilterMode {
        let one = [T::one(); 3];
        if self.gamma == one && self.eta == one {
            FilterMode::Simple
        } else if self.gamma[1..].iter().chain(&self.eta[1..]).all(|&w| w == T::zero()) {
            FilterMode::Polynomial
        } else {
            FilterMode::General
        }
    }
}

impl<T: Real> Default for FilterVectors<T> {
    fn default() -> Self {
        Self::simple()
    }
}

/// Sign bookkeeping for the aliased terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SignVariant {
    /// `(−1)^{m(I₁+I₂)}`, with an extra `(−1)^{1+r}` on the `mN − j` branch.
    #[default]
    ConstantSign,
    /// `(−1)^{m(r+1+I₁+I₂)}` on both branches.
    SignChanging,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Frequencies `mN − j`.
    Minus,
    /// Frequencies `mN + j`.
    Plus,
}

/// Sign of the `m`-th aliased term on `branch`.
pub fn sign_exponent(
    variant: SignVariant,
    r: u32,
    i1: Indicator,
    i2: Indicator,
    m: u64,
    branch: Branch,
) -> i32 {
    let ind = u64::from(i1.bit() + i2.bit());
    let (exp, extra) = match variant {
        SignVariant::ConstantSign => (
            m * ind,
            if branch == Branch::Minus { 1 + u64::from(r) } else { 0 },
        ),
        SignVariant::SignChanging => (m * (u64::from(r) + 1 + ind), 0),
    };
    if (exp + extra) % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound = "T: Real")]
pub struct TruncationControl<T> {
    /// Target bound on the truncation error of each returned value.
    pub epsilon: T,
    /// Largest aliasing depth `m` summed term by term.
    pub m_max: u64,
    /// Sum the asymptotic power waves in closed form.
    pub accelerate: bool,
}

impl<T: Real> Default for TruncationControl<T> {
    fn default() -> Self {
        TruncationControl {
            epsilon: T::lit(1e-10),
            m_max: 1_000_000,
            accelerate: true,
        }
    }
}

/// Everything needed to evaluate one spline family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct SplineConfig<T> {
    /// Stitching grid.
    pub i1: Indicator,
    /// Interpolation grid.
    pub i2: Indicator,
    #[serde(default)]
    pub filters: FilterVectors<T>,
    pub r: u32,
    pub n: usize,
    pub factor: FactorSpec<T>,
    #[serde(default)]
    pub sign_variant: SignVariant,
    #[serde(default)]
    pub truncation: TruncationControl<T>,
}

fn check_heads<T: Real>(f: &FactorSpec<T>, n: usize) -> Result<()> {
    match f {
        FactorSpec::Composite { head, tail } => {
            if head.len() != n {
                return Err(Error::InvalidConfig(format!(
                    "composite head has {} entries, grid has N = {n}",
                    head.len()
                )));
            }
            check_heads(tail, n)
        }
        FactorSpec::Product(a, b) => {
            check_heads(a, n)?;
            check_heads(b, n)
        }
        FactorSpec::Scaled { factor, .. } => check_heads(factor, n),
        _ => Ok(()),
    }
}

impl<T: Real> SplineConfig<T> {
    /// Simple spline with constant-sign bookkeeping and default truncation.
    pub fn simple(n: usize, r: u32, i1: Indicator, i2: Indicator, factor: FactorSpec<T>) -> Self {
        SplineConfig {
            i1,
            i2,
            filters: FilterVectors::simple(),
            r,
            n,
            factor,
            sign_variant: SignVariant::ConstantSign,
            truncation: TruncationControl::default(),
        }
    }

    pub fn with_filters(mut self, filters: FilterVectors<T>) -> Self {
        self.filters = filters;
        self
    }

    pub fn with_sign_variant(mut self, v: SignVariant) -> Self {
        self.sign_variant = v;
        self
    }

    pub fn with_truncation(mut self, t: TruncationControl<T>) -> Self {
        self.truncation = t;
        self
    }

    pub fn with_factor(mut self, f: FactorSpec<T>) -> Self {
        self.factor = f;
        self
    }

    pub fn interpolation_grid(&self) -> GridSpec {
        GridSpec {
            n: self.n,
            indicator: self.i2,
        }
    }

    pub fn stitching_grid(&self) -> GridSpec {
        GridSpec {
            n: self.n,
            indicator: self.i1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_node_count(self.n)?;
        if self.r == 0 {
            return Err(Error::InvalidConfig("r must be at least 1".into()));
        }
        self.factor.validate()?;
        check_heads(&self.factor, self.n)?;
        let d = self.factor.decay_order();
        if d != self.r + 1 {
            return Err(Error::InvalidConfig(format!(
                "factor decays with order {d}, spline needs 1 + r = {}",
                self.r + 1
            )));
        }
        let t = &self.truncation;
        if !(t.epsilon > T::zero() && t.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", t.epsilon)));
        }
        if t.m_max < 1 {
            return Err(Error::InvalidConfig("m_max must be at least 1".into()));
        }
        let w = self.filters.gamma.iter().chain(&self.filters.eta);
        if w.clone().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("filter weights must be finite".into()));
        }
        Ok(())
    }
}

/// Sample values `f_k` on the interpolation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SampleSet<T> {
    pub values: Vec<T>,
}

impl<T: Real> SampleSet<T> {
    pub fn new(values: Vec<T>, n: usize) -> Result<Self> {
        if values.len() != n {
            return Err(Error::SampleLength {
                expected: n,
                got: values.len(),
            });
        }
        Ok(SampleSet { values })
    }

    /// Samples of `f` at the interpolation nodes of `config`.
    pub fn from_fn(config: &SplineConfig<T>, f: impl Fn(T) -> T) -> Self {
        let g = config.interpolation_grid();
        SampleSet {
            values: (1..=g.n).map(|k| f(g.node(k))).collect(),
        }
    }
}

/// A value with the certified bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EvalReport<T> {
    pub value: T,
    pub tail_bound: T,
    /// Aliasing depth summed term by term; 0 when everything was closed form.
    pub terms_used: u64,
    /// Set when `m_max` was reached before the bound met epsilon.
    pub truncation_incomplete: bool,
}

impl<T: Real> EvalReport<T> {
    pub fn exact(value: T) -> Self {
        EvalReport {
            value,
            tail_bound: T::zero(),
            terms_used: 0,
            truncation_incomplete: false,
        }
    }

    /// Turn an incomplete truncation into an error.
    pub fn require_complete(self, epsilon: T, m_max: u64) -> Result<Self> {
        if self.truncation_incomplete {
            return Err(Error::TruncationIncomplete {
                bound: self.tail_bound.as_f64(),
                epsilon: epsilon.as_f64(),
                m_max: m_max as usize,
            });
        }
        Ok(self)
    }
}

/// Even-channel numerator and denominator for frequency `j`, center `k`.
pub fn channel_even<T: Real>(
    config: &SplineConfig<T>,
    j: usize,
    k: usize,
    t: T,
) -> Result<(EvalReport<T>, EvalReport<T>)> {
    Spline::new(config.clone())?.channel_even(j, k, t)
}

/// Odd-channel numerator and denominator for frequency `j`, center `k`.
pub fn channel_odd<T: Real>(
    config: &SplineConfig<T>,
    j: usize,
    k: usize,
    t: T,
) -> Result<(EvalReport<T>, EvalReport<T>)> {
    Spline::new(config.clone())?.channel_odd(j, k, t)
}

/// `st_k(t)`.
pub fn fundamental_value<T: Real>(config: &SplineConfig<T>, k: usize, t: T) -> Result<EvalReport<T>> {
    Spline::new(config.clone())?.fundamental_value(k, t)
}

/// `S(t) = Σ f_k st_k(t)`.
pub fn interpolant_value<T: Real>(
    config: &SplineConfig<T>,
    samples: &SampleSet<T>,
    t: T,
) -> Result<EvalReport<T>> {
    Spline::new(config.clone())?.interpolant_value(samples, t)
}

/// Derivative of order `order` of `st_k` at `t`.
pub fn fundamental_derivative<T: Real>(
    config: &SplineConfig<T>,
    k: usize,
    t: T,
    order: u32,
) -> Result<EvalReport<T>> {
    Spline::new(config.clone())?.fundamental_derivative(k, t, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_exponent_examples() {
        use Indicator::*;
        assert_eq!(sign_exponent(SignVariant::ConstantSign, 1, Zero, Zero, 1, Branch::Minus), 1);
        assert_eq!(sign_exponent(SignVariant::ConstantSign, 2, Zero, One, 1, Branch::Minus), 1);
        assert_eq!(sign_exponent(SignVariant::SignChanging, 1, One, Zero, 2, Branch::Plus), 1);
        assert_eq!(sign_exponent(SignVariant::ConstantSign, 2, Zero, Zero, 1, Branch::Minus), -1);
        assert_eq!(sign_exponent(SignVariant::ConstantSign, 2, Zero, One, 1, Branch::Plus), -1);
        assert_eq!(sign_exponent(SignVariant::SignChanging, 1, One, Zero, 1, Branch::Minus), -1);
    }

    #[test]
    fn filter_modes() {
        assert_eq!(FilterVectors::<f64>::simple().mode(), FilterMode::Simple);
        assert_eq!(FilterVectors::<f64>::polynomial().mode(), FilterMode::Polynomial);
        assert_eq!(FilterVectors::new([2.0, 0.0, 0.0], [0.5, 0.0, 0.0]).mode(), FilterMode::Polynomial);
        assert_eq!(FilterVectors::new([1.0, 1.0, 0.0], [1.0, 1.0, 1.0]).mode(), FilterMode::General);
    }

    #[test]
    fn config_validation() {
        let f = FactorSpec::constant_power(1.0, 1);
        let ok = SplineConfig::simple(9, 1, Indicator::Zero, Indicator::Zero, f.clone());
        assert!(ok.validate().is_ok());
        assert!(SplineConfig::simple(8, 1, Indicator::Zero, Indicator::Zero, f.clone()).validate().is_err());
        assert!(SplineConfig::simple(9, 2, Indicator::Zero, Indicator::Zero, f.clone()).validate().is_err());
        let f0 = FactorSpec::sinc_power(1.0, 0);
        assert!(SplineConfig::simple(9, 0, Indicator::Zero, Indicator::Zero, f0).validate().is_err());
        let comp = FactorSpec::composite(vec![1.0; 3], f.clone());
        assert!(SplineConfig::simple(9, 1, Indicator::Zero, Indicator::Zero, comp).validate().is_err());
        let mut bad = ok.clone();
        bad.truncation.epsilon = 0.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sample_length_checked() {
        assert_eq!(
            SampleSet::new(vec![1.0, 2.0], 3),
            Err(Error::SampleLength { expected: 3, got: 2 })
        );
    }

    #[test]
    fn config_json_defaults() {
        let cfg: SplineConfig<f64> = serde_json::from_str(
            r#"{"i1":0,"i2":1,"r":1,"n":9,"factor":{"family":"ConstantPower","alpha":1.0,"r":1}}"#,
        )
        .unwrap();
        assert_eq!(cfg.filters, FilterVectors::simple());
        assert_eq!(cfg.truncation, TruncationControl::default());
        assert_eq!(cfg.i2, Indicator::One);
        let back: SplineConfig<f64> = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
