//! Asymptotic splitting of a factor into power waves plus a bounded residual.
//!
//! `σ(n) = Σ_w Re(A_w e^{iω_w n}) / n^{p_w} + ρ(n)` with `|ρ(n)| ≤ R(n)` for
//! `n ≥ R.start`. The wave part has closed-form aliased sums; only `ρ` is
//! summed term by term.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::factors::{BaseFamily, FactorSpec, ParityKind, Transform};
use crate::scalar::{wrap_angle, Real};

/// `Re(amp · e^{i·freq·n}) / n^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerWave<T> {
    pub amp: Complex<T>,
    pub freq: T,
    pub power: u32,
}

impl<T: Real> PowerWave<T> {
    pub fn value(&self, n: u64) -> T {
        let nn = T::of_u64(n);
        let (s, c) = (self.freq * nn).sin_cos();
        (self.amp.re * c - self.amp.im * s) / nn.powi(self.power as i32)
    }

    /// Frequency folded into `[0, π]`, amplitude conjugated when needed.
    fn normalized(self) -> Self {
        let w = wrap_angle(self.freq);
        if w < T::zero() {
            PowerWave {
                amp: self.amp.conj(),
                freq: -w,
                power: self.power,
            }
        } else {
            PowerWave { freq: w, ..self }
        }
    }
}

/// Power-law bound `min(cap, Σ scale_i · n^{-order_i})`, valid for `n ≥ start`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayBound<T> {
    pub terms: Vec<(T, u32)>,
    pub start: u64,
    pub cap: Option<T>,
}

impl<T: Real> DecayBound<T> {
    pub fn zero() -> Self {
        DecayBound {
            terms: Vec::new(),
            start: 1,
            cap: None,
        }
    }

    pub fn power(scale: T, order: u32) -> Self {
        DecayBound {
            terms: vec![(scale.abs(), order)],
            start: 1,
            cap: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|&(s, _)| s == T::zero())
    }

    pub fn with_start(mut self, start: u64) -> Self {
        self.start = self.start.max(start);
        self
    }

    pub fn with_cap(mut self, cap: T) -> Self {
        self.cap = Some(self.cap.map_or(cap, |c| c.min(cap)));
        self
    }

    fn sum_terms(&self, n: T) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, &(s, o)| acc + s / n.powi(o as i32))
    }

    /// Bound at `n`; only meaningful for `n ≥ start`.
    pub fn at(&self, n: u64) -> T {
        let v = self.sum_terms(T::of_u64(n.max(1)));
        self.cap.map_or(v, |c| v.min(c))
    }

    pub fn scaled(mut self, s: T) -> Self {
        let s = s.abs();
        for t in &mut self.terms {
            t.0 *= s;
        }
        self.cap = self.cap.map(|c| c * s);
        self
    }

    pub fn sum(mut self, other: &Self) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self.start = self.start.max(other.start);
        self.cap = match (self.cap, other.cap) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        self
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(s1, o1) in &self.terms {
            for &(s2, o2) in &other.terms {
                terms.push((s1 * s2, o1 + o2));
            }
        }
        DecayBound {
            terms,
            start: self.start.max(other.start),
            cap: match (self.cap, other.cap) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            },
        }
    }

    /// Smallest order among nonzero terms.
    pub fn min_order(&self) -> Option<u32> {
        self.terms
            .iter()
            .filter(|t| t.0 != T::zero())
            .map(|t| t.1)
            .min()
    }

    /// Bound on `Σ_{m > M} B(mN + c) · (mN + c)^q`.
    ///
    /// Infinite when some omitted index lies below `start` or a term does
    /// not decay fast enough to be summable.
    pub fn class_tail(&self, n_grid: u64, c: i64, m: u64, q: u32) -> T {
        let first = (m as i64 + 1) * n_grid as i64 + c;
        if first < 1 || (first as u64) < self.start {
            return T::infinity();
        }
        let n0 = T::of_i64(first);
        let nn = T::of_u64(n_grid);
        let mut total = T::zero();
        for &(s, o) in &self.terms {
            if s == T::zero() {
                continue;
            }
            if o <= q + 1 {
                return T::infinity();
            }
            let e = (o - q) as i32;
            // first omitted term plus the integral beyond it
            total += s / n0.powi(e) + s / (n0.powi(e - 1) * nn * T::of_u64((e - 1) as u64));
        }
        total
    }
}

/// Wave part plus residual bound of one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<T> {
    pub waves: Vec<PowerWave<T>>,
    pub residual: DecayBound<T>,
}

impl<T: Real> Expansion<T> {
    pub fn exact(waves: Vec<PowerWave<T>>) -> Self {
        Expansion {
            waves: merge(waves),
            residual: DecayBound::zero(),
        }
    }

    /// No waves at all: every term is summed directly.
    pub fn plain(envelope: DecayBound<T>) -> Self {
        Expansion {
            waves: Vec::new(),
            residual: envelope,
        }
    }

    pub fn wave_sum(&self, n: u64) -> T {
        self.waves.iter().fold(T::zero(), |acc, w| acc + w.value(n))
    }

    fn wave_abs_bound(&self) -> DecayBound<T> {
        DecayBound {
            terms: self.waves.iter().map(|w| (w.amp.norm(), w.power)).collect(),
            start: 1,
            cap: None,
        }
    }
}

fn merge<T: Real>(waves: Vec<PowerWave<T>>) -> Vec<PowerWave<T>> {
    let mut out: Vec<PowerWave<T>> = Vec::with_capacity(waves.len());
    for w in waves.into_iter().map(PowerWave::normalized) {
        match out
            .iter_mut()
            .find(|o| o.freq == w.freq && o.power == w.power)
        {
            Some(o) => o.amp += w.amp,
            None => out.push(w),
        }
    }
    out.retain(|w| w.amp.norm() != T::zero());
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// First `n` with `scale · n^{-p} ≤ level`.
fn crossing<T: Real>(scale: T, p: u32, level: T) -> u64 {
    let guess = (scale / level).powf(T::one() / T::of_u64(p as u64));
    let mut n = guess.ceil().to_u64().unwrap_or(1).max(1);
    while n > 1 && scale / T::of_u64(n - 1).powi(p as i32) <= level {
        n -= 1;
    }
    while scale / T::of_u64(n).powi(p as i32) > level {
        n += 1;
    }
    n
}

impl<T: Real> Transform<T> {
    /// `(s, K)` with `|T(b) − b| ≤ K|b|^s` for `|b| ≤ 1/2`.
    fn remainder_constant(&self) -> (u32, T) {
        let half = T::lit(0.5);
        match *self {
            Transform::Sin => (3, T::lit(1.0 / 6.0)),
            Transform::Arcsin => (3, T::lit(2.0 / 9.0)),
            Transform::Tan => (3, T::lit(8.0) * (half.tan() - half)),
            Transform::Arctan => (3, T::lit(1.0 / 3.0)),
            Transform::Log { .. } => (2, T::one()),
            Transform::Exp { a } => {
                let l = a.ln().abs();
                (2, l * (l * half).exp() * half)
            }
            Transform::Root { m } => {
                let inv = T::one() / T::of_u64(u64::from(m));
                (2, half * inv * (T::one() - inv) * T::lit(2.0).powf(T::lit(2.0) - inv))
            }
        }
    }

    /// `L` with `|T(b)| ≤ L|b|` for `|b| ≤ 1/2`.
    fn lipschitz(&self) -> T {
        let half = T::lit(0.5);
        match *self {
            Transform::Sin | Transform::Arctan => T::one(),
            Transform::Arcsin => T::FRAC_PI_3(),
            Transform::Tan => half.tan() / half,
            Transform::Log { .. } => T::lit(2.0) * T::LN_2(),
            Transform::Exp { a } => (a.ln().abs() * half).exp(),
            Transform::Root { m } => {
                T::lit(2.0).powf(T::one() - T::one() / T::of_u64(u64::from(m)))
            }
        }
    }
}

/// Leading coefficient `C_b` of the base envelope `C_b n^{-p}`.
fn base_scale<T: Real>(base: BaseFamily, alpha: T, p: u32) -> T {
    match base {
        BaseFamily::ConstantPower => alpha,
        BaseFamily::SincPower => alpha.powi(-(p as i32)),
    }
}

fn base_expansion<T: Real>(base: BaseFamily, alpha: T, r: u32) -> Expansion<T> {
    let p = r + 1;
    match base {
        BaseFamily::ConstantPower => Expansion::exact(vec![PowerWave {
            amp: Complex::new(alpha, T::zero()),
            freq: T::zero(),
            power: p,
        }]),
        BaseFamily::SincPower => {
            // sin^p x = (2i)^{-p} Σ_q C(p,q)(−1)^q e^{i(p−2q)x}
            let pre = Complex::new(T::zero(), T::lit(2.0)).powi(-(p as i32)) / alpha.powi(p as i32);
            let waves = (0..=p)
                .map(|q| {
                    let c = binomial(p, q) * if q % 2 == 0 { 1.0 } else { -1.0 };
                    PowerWave {
                        amp: pre * T::lit(c),
                        freq: alpha * T::of_i64(i64::from(p) - 2 * i64::from(q)),
                        power: p,
                    }
                })
                .collect();
            Expansion::exact(waves)
        }
    }
}

fn base_envelope<T: Real>(base: BaseFamily, alpha: T, r: u32) -> DecayBound<T> {
    let p = r + 1;
    let b = DecayBound::power(base_scale(base, alpha, p), p);
    match base {
        BaseFamily::ConstantPower => b,
        BaseFamily::SincPower => b.with_cap(T::one()),
    }
}

/// Polynomial-bump closed forms as `D(P(x) sin x + Q(x) x cos x)/(π α^{2r+1} k^{2r+1})`.
fn bump_poly_table(r: u32) -> Option<(f64, &'static [f64], &'static [f64])> {
    Some(match r {
        1 => (3.0, &[1.0], &[-1.0]),
        2 => (-15.0, &[-3.0, 0.0, 1.0], &[3.0]),
        3 => (105.0, &[15.0, 0.0, -6.0], &[-15.0, 0.0, 1.0]),
        4 => (945.0, &[105.0, 0.0, -45.0, 0.0, 1.0], &[-105.0, 0.0, 10.0]),
        _ => return None,
    })
}

/// Signed numerator constant and denominator constants of the sine bump.
fn bump_sine_constants<T: Real>(r: u32) -> (T, Vec<T>) {
    let pi = T::PI();
    if r % 2 == 1 {
        let l = (r - 1) / 2;
        let df: f64 = (1..=2 * l + 1).rev().step_by(2).map(f64::from).product();
        let sign = if (l + 1).is_multiple_of(2) { T::one() } else { -T::one() };
        let a = sign * T::lit(df * df) * pi.powi(2 * (l as i32 + 1));
        let c = (0..=l)
            .map(|i| T::of_u64(u64::from(2 * i + 1)).powi(2) * pi * pi)
            .collect();
        (a, c)
    } else {
        let l = r / 2;
        let f: f64 = (1..=l).map(f64::from).product();
        let sign = if l.is_multiple_of(2) { T::one() } else { -T::one() };
        let a = sign * T::lit(f * f) * pi.powi(2 * l as i32);
        let c = (1..=l).map(|i| T::of_u64(u64::from(i * i)) * pi * pi).collect();
        (a, c)
    }
}

impl<T: Real> FactorSpec<T> {
    /// Certified power-law envelope, used by [`FactorSpec::tail_envelope`].
    pub fn envelope_bound(&self) -> DecayBound<T> {
        match self {
            FactorSpec::ConstantPower { alpha, r } => {
                base_envelope(BaseFamily::ConstantPower, *alpha, *r)
            }
            FactorSpec::SincPower { alpha, r } => base_envelope(BaseFamily::SincPower, *alpha, *r),
            FactorSpec::Transformed {
                transform,
                base,
                alpha,
                r,
            } => {
                let p = r + 1;
                let start = crossing(base_scale(*base, *alpha, p), p, T::lit(0.5));
                base_envelope(*base, *alpha, *r)
                    .scaled(transform.lipschitz())
                    .with_start(start)
            }
            FactorSpec::BumpSine { alpha, r } => {
                let (a, c) = bump_sine_constants::<T>(*r);
                let s = c.iter().fold(T::zero(), |acc, &x| acc + x);
                let k = T::lit(1.65) * a.abs();
                let b = if r % 2 == 1 {
                    let l = (r - 1) / 2;
                    let four = T::lit(4.0) * *alpha * *alpha;
                    DecayBound::power(k / four.powi(l as i32 + 1), 2 * l + 2)
                        .with_start((s.sqrt() / *alpha).ceil().to_u64().unwrap_or(u64::MAX))
                } else {
                    let l = r / 2;
                    DecayBound::power(k / alpha.powi(2 * l as i32 + 1), 2 * l + 1).with_start(
                        (T::lit(2.0) * s.sqrt() / *alpha)
                            .ceil()
                            .to_u64()
                            .unwrap_or(u64::MAX),
                    )
                };
                b.with_cap(T::one())
            }
            FactorSpec::BumpPoly { r, .. } => match self.expansion() {
                Ok(e) if bump_poly_table(*r).is_some() => {
                    e.wave_abs_bound().with_cap(T::FRAC_1_PI())
                }
                _ => DecayBound::zero().with_start(u64::MAX),
            },
            FactorSpec::Composite { head, tail } => {
                tail.envelope_bound().with_start(head.len() as u64 + 1)
            }
            FactorSpec::Product(f1, f2) => f1.envelope_bound().product(&f2.envelope_bound()),
            FactorSpec::Parity(_) => DecayBound::power(T::one(), 0),
            FactorSpec::Scaled { scale, factor } => factor.envelope_bound().scaled(*scale),
        }
    }

    /// Exact wave part and certified residual bound.
    pub fn expansion(&self) -> Result<Expansion<T>> {
        self.validate()?;
        Ok(match self {
            FactorSpec::ConstantPower { alpha, r } => {
                base_expansion(BaseFamily::ConstantPower, *alpha, *r)
            }
            FactorSpec::SincPower { alpha, r } => base_expansion(BaseFamily::SincPower, *alpha, *r),
            FactorSpec::Transformed {
                transform,
                base,
                alpha,
                r,
            } => {
                let p = r + 1;
                let (s, k) = transform.remainder_constant();
                let cb = base_scale(*base, *alpha, p);
                let start = crossing(cb, p, T::lit(0.5));
                Expansion {
                    waves: base_expansion(*base, *alpha, *r).waves,
                    residual: DecayBound::power(k * cb.powi(s as i32), s * p).with_start(start),
                }
            }
            FactorSpec::BumpSine { alpha, r } => {
                let (a, c) = bump_sine_constants::<T>(*r);
                let s = c.iter().fold(T::zero(), |acc, &x| acc + x);
                let k = T::lit(3.3) * a.abs() * s;
                if r % 2 == 1 {
                    let l = (r - 1) / 2;
                    let four = T::lit(4.0) * *alpha * *alpha;
                    let wave = PowerWave {
                        amp: Complex::new(a / four.powi(l as i32 + 1), T::zero()),
                        freq: *alpha,
                        power: 2 * l + 2,
                    };
                    let start = (s.sqrt() / *alpha).ceil().to_u64().unwrap_or(u64::MAX);
                    Expansion {
                        waves: merge(vec![wave]),
                        residual: DecayBound::power(k / four.powi(l as i32 + 2), 2 * l + 4)
                            .with_start(start),
                    }
                } else {
                    let l = r / 2;
                    let wave = PowerWave {
                        amp: Complex::new(T::zero(), -a / alpha.powi(2 * l as i32 + 1)),
                        freq: *alpha,
                        power: 2 * l + 1,
                    };
                    let start = (T::lit(2.0) * s.sqrt() / *alpha)
                        .ceil()
                        .to_u64()
                        .unwrap_or(u64::MAX);
                    Expansion {
                        waves: merge(vec![wave]),
                        residual: DecayBound::power(k / alpha.powi(2 * l as i32 + 3), 2 * l + 3)
                            .with_start(start),
                    }
                }
            }
            FactorSpec::BumpPoly { alpha, r } => {
                let (d, p_coef, q_coef) = bump_poly_table(*r).ok_or(Error::UnsupportedOrder(*r))?;
                let d = T::lit(d) / T::PI();
                let two_r = 2 * *r as i32;
                let mut waves = Vec::new();
                for (a, &pa) in p_coef.iter().enumerate() {
                    if pa != 0.0 {
                        waves.push(PowerWave {
                            amp: Complex::new(T::zero(), -d * T::lit(pa) * alpha.powi(a as i32 - two_r - 1)),
                            freq: *alpha,
                            power: (two_r + 1 - a as i32) as u32,
                        });
                    }
                }
                for (a, &qa) in q_coef.iter().enumerate() {
                    if qa != 0.0 {
                        waves.push(PowerWave {
                            amp: Complex::new(d * T::lit(qa) * alpha.powi(a as i32 - two_r), T::zero()),
                            freq: *alpha,
                            power: (two_r - a as i32) as u32,
                        });
                    }
                }
                Expansion::exact(waves)
            }
            FactorSpec::Composite { head, tail } => {
                let e = tail.expansion()?;
                Expansion {
                    waves: e.waves,
                    residual: e.residual.with_start(head.len() as u64 + 1),
                }
            }
            FactorSpec::Product(f1, f2) => {
                let e1 = f1.expansion()?;
                let e2 = f2.expansion()?;
                let half = T::lit(0.5);
                let mut waves = Vec::with_capacity(2 * e1.waves.len() * e2.waves.len());
                for w1 in &e1.waves {
                    for w2 in &e2.waves {
                        let power = w1.power + w2.power;
                        waves.push(PowerWave {
                            amp: w1.amp * w2.amp * half,
                            freq: w1.freq + w2.freq,
                            power,
                        });
                        waves.push(PowerWave {
                            amp: w1.amp * w2.amp.conj() * half,
                            freq: w1.freq - w2.freq,
                            power,
                        });
                    }
                }
                // σ₁σ₂ − W₁W₂ = ρ₁σ₂ + W₁ρ₂
                let residual = e1
                    .residual
                    .product(&f2.envelope_bound())
                    .sum(&e1.wave_abs_bound().product(&e2.residual));
                let residual = if e1.residual.is_zero() && e2.residual.is_zero() {
                    DecayBound::zero().with_start(e1.residual.start.max(e2.residual.start))
                } else {
                    residual
                };
                Expansion {
                    waves: merge(waves),
                    residual,
                }
            }
            FactorSpec::Parity(kind) => {
                let pi = T::PI();
                let wave = |amp: T, freq: T| PowerWave {
                    amp: Complex::new(amp, T::zero()),
                    freq,
                    power: 0,
                };
                match kind {
                    ParityKind::Alternating => Expansion::exact(vec![wave(T::one(), pi)]),
                    ParityKind::EvenOnly => Expansion::exact(vec![
                        wave(T::lit(0.5), T::zero()),
                        wave(T::lit(0.5), pi),
                    ]),
                }
            }
            FactorSpec::Scaled { scale, factor } => {
                let e = factor.expansion()?;
                Expansion {
                    waves: e
                        .waves
                        .into_iter()
                        .map(|w| PowerWave {
                            amp: w.amp * *scale,
                            ..w
                        })
                        .collect(),
                    residual: e.residual.scaled(*scale),
                }
            }
        })
    }
}
