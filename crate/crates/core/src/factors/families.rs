//! Closed-form convergence factors, evaluated exactly as printed.

use crate::error::{Error, Result};
use crate::factors::{BaseFamily, FactorSpec, Transform};
use crate::scalar::Real;

/// `α / j^(1+r)`.
pub fn base_constant_factor<T: Real>(alpha: T, r: u32, j: u64) -> T {
    alpha / T::of_u64(j).powi(1 + r as i32)
}

/// `sinc(αj)^(1+r)` with `sinc(x) = sin(x)/x`.
pub fn sinc_power_factor<T: Real>(alpha: T, r: u32, j: u64) -> T {
    let x = alpha * T::of_u64(j);
    let s = if x == T::zero() { T::one() } else { x.sin() / x };
    s.powi(1 + r as i32)
}

pub(crate) fn base_value<T: Real>(base: BaseFamily, alpha: T, r: u32, j: u64) -> T {
    match base {
        BaseFamily::ConstantPower => base_constant_factor(alpha, r, j),
        BaseFamily::SincPower => sinc_power_factor(alpha, r, j),
    }
}

impl<T: Real> Transform<T> {
    /// Apply the transform to a base factor value `b` (taken at frequency `j`,
    /// which is only used for diagnostics).
    pub fn apply(&self, b: T, j: u64) -> Result<T> {
        let domain = |name| Error::Domain {
            transform: name,
            j,
            base: b.as_f64(),
        };
        Ok(match *self {
            Transform::Sin => b.sin(),
            Transform::Arcsin => {
                if b.abs() > T::one() {
                    return Err(domain("arcsin"));
                }
                b.asin()
            }
            Transform::Tan => {
                if b.abs() >= T::FRAC_PI_2() {
                    return Err(domain("tan"));
                }
                b.tan()
            }
            Transform::Arctan => b.atan(),
            // ln a · log_a(1 + b); log_a(1+b) is taken through ln_1p so that
            // the value stays accurate when b is far below machine epsilon.
            Transform::Log { a } => {
                if T::one() + b <= T::zero() {
                    return Err(domain("log"));
                }
                let ln_a = a.ln();
                ln_a * (b.ln_1p() / ln_a)
            }
            Transform::Exp { a } => {
                let ln_a = a.ln();
                (b * ln_a).exp_m1() / ln_a
            }
            Transform::Root { m } => {
                if T::one() + b < T::zero() {
                    return Err(domain("root"));
                }
                let m = T::of_u64(m as u64);
                m * (b.ln_1p() / m).exp_m1()
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Transform::Sin => "sin",
            Transform::Arcsin => "arcsin",
            Transform::Tan => "tan",
            Transform::Arctan => "arctan",
            Transform::Log { .. } => "log",
            Transform::Exp { .. } => "exp",
            Transform::Root { .. } => "root",
        }
    }
}

/// A transform applied to a constant-power or sinc-power base.
pub fn transformed_factor<T: Real>(
    transform: &Transform<T>,
    base: BaseFamily,
    alpha: T,
    r: u32,
    j: u64,
) -> Result<T> {
    transform.apply(base_value(base, alpha, r, j), j)
}

fn double_factorial(n: u32) -> f64 {
    (1..=n).rev().step_by(2).map(f64::from).product()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn check_factor<T: Real>(factor: T, scale: T, r: u32, alpha: T, k: u64) -> Result<()> {
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
    if factor.abs() <= tol * scale {
        return Err(Error::SingularDenominator {
            r,
            alpha: alpha.as_f64(),
            k,
        });
    }
    Ok(())
}

/// Cosine Fourier coefficient `μ_k(r, α)` of the sine-power bump, normalised to
/// unit integral.
pub fn bump_sine_coefficient<T: Real>(r: u32, alpha: T, k: u64) -> Result<T> {
    if r == 0 {
        return Err(Error::InvalidFactor("sine bump needs r >= 1".into()));
    }
    let pi = T::PI();
    let kk = T::of_u64(k);
    if r % 2 == 1 {
        let l = (r - 1) / 2;
        let x = T::lit(4.0) * alpha * alpha * kk * kk;
        let mut den = T::one();
        for i in 0..=l {
            let c = T::of_u64(u64::from(2 * i + 1)).powi(2) * pi * pi;
            let f = x - c;
            check_factor(f, x.max(c), r, alpha, k)?;
            den *= f;
        }
        let sign = if (l + 1).is_multiple_of(2) { T::one() } else { -T::one() };
        let df = T::lit(double_factorial(2 * l + 1));
        Ok(sign * df * df * pi.powi(2 * (l as i32 + 1)) * (alpha * kk).cos() / den)
    } else {
        let l = r / 2;
        let x = alpha * alpha * kk * kk;
        let mut den = T::one();
        for i in 1..=l {
            let c = T::of_u64(u64::from(i * i)) * pi * pi;
            let f = x - c;
            check_factor(f, x.max(c), r, alpha, k)?;
            den *= f;
        }
        let sign = if l.is_multiple_of(2) { T::one() } else { -T::one() };
        let lf = T::lit(factorial(l));
        let ak = alpha * kk;
        Ok(sign * lf * lf * pi.powi(2 * l as i32) / den * (ak.sin() / ak))
    }
}

/// Cosine Fourier coefficient `v_k(r, α)` of the polynomial bump
/// `C(1 − (t/α)²)^r`, carrying the 1/π of the standard cosine coefficient.
pub fn bump_poly_coefficient<T: Real>(r: u32, alpha: T, k: u64) -> Result<T> {
    let kk = T::of_u64(k);
    let x = alpha * kk;
    let (s, c) = x.sin_cos();
    let pi = T::PI();
    let n = T::lit;
    let x2 = x * x;
    Ok(match r {
        1 => n(3.0) * (s - x * c) / (pi * x.powi(3)),
        2 => -n(15.0) * ((x2 - n(3.0)) * s + n(3.0) * x * c) / (pi * alpha.powi(5) * kk.powi(5)),
        3 => {
            n(105.0) * ((n(15.0) - n(6.0) * x2) * s - (n(15.0) - x2) * x * c)
                / (pi * alpha.powi(7) * kk.powi(7))
        }
        4 => {
            n(945.0)
                * ((n(105.0) - n(45.0) * x2 + x2 * x2) * s - (n(105.0) - n(10.0) * x2) * x * c)
                / (pi * alpha.powi(9) * kk.powi(9))
        }
        _ => return Err(Error::UnsupportedOrder(r)),
    })
}

/// Head table for `j ≤ N`, decaying tail family beyond.
pub fn composite_factor<T: Real>(head: &[T], tail: &FactorSpec<T>, j: u64) -> Result<T> {
    match head.get((j as usize).wrapping_sub(1)) {
        Some(&c) if j >= 1 => Ok(c),
        _ => tail.value(j),
    }
}

pub fn product_factor<T: Real>(f1: &FactorSpec<T>, f2: &FactorSpec<T>, j: u64) -> Result<T> {
    Ok(f1.value(j)? * f2.value(j)?)
}
