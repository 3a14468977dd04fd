//! Polylogarithm on the unit circle and sums over residue classes.
//!
//! For `φ ∈ (−π, π]`
//! `Li_p(e^{iφ}) = Σ_{k≠p−1} ζ(p−k)(iφ)^k/k! + (iφ)^{p−1}/(p−1)! · (H_{p−1} − ln(−iφ))`,
//! which converges geometrically with ratio `|φ|/2π ≤ 1/2`.

use num_complex::Complex;

use crate::scalar::{wrap_angle, Real};

const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Riemann zeta at an integer `s ≥ 2` (Euler–Maclaurin after twenty terms).
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta is only needed for s >= 2");
    const K: f64 = 20.0;
    let sf = f64::from(s);
    let mut sum: f64 = (1..20).rev().map(|k| f64::from(k).powf(-sf)).sum();
    sum += K.powf(1.0 - sf) / (sf - 1.0) + 0.5 * K.powf(-sf);
    // rising factorial s(s+1)...(s+2i−2) / (2i)!
    let mut rising = sf;
    let mut fact = 2.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let i = i as f64 + 1.0;
        sum += b / fact * rising * K.powf(-sf - 2.0 * i + 1.0);
        rising *= (sf + 2.0 * i - 1.0) * (sf + 2.0 * i);
        fact *= (2.0 * i + 1.0) * (2.0 * i + 2.0);
    }
    sum
}

/// `ζ(1 − n)` for `n ≥ 1`.
fn zeta_nonpositive(n: u32) -> f64 {
    match n {
        1 => -0.5,
        n if n % 2 == 1 => 0.0,
        n => {
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            // 2 (n−1)! ζ(n) / (2π)^n, built up as a product to stay finite
            let mut v = 2.0 * zeta(n) / std::f64::consts::TAU;
            for i in 1..n {
                v *= f64::from(i) / std::f64::consts::TAU;
            }
            sign * v
        }
    }
}

/// Series for `Li_p(e^{iφ})` at a fixed order `p ≥ 1`.
#[derive(Debug, Clone)]
pub struct Polylog<T> {
    p: u32,
    /// `ζ(p−k)/k!` for `k = 0..`, with the `k = p−1` slot zero.
    coef: Vec<T>,
    log_coef: T,
    harmonic: T,
}

impl<T: Real> Polylog<T> {
    pub fn new(p: u32) -> Self {
        assert!(p >= 1, "polylog order must be positive");
        let terms = p as usize + 64;
        let mut coef = Vec::with_capacity(terms);
        let mut fact = 1.0f64;
        for k in 0..terms as u32 {
            if k > 0 {
                fact *= f64::from(k);
            }
            let c = if k + 1 == p {
                0.0
            } else if k + 2 <= p {
                zeta(p - k) / fact
            } else {
                zeta_nonpositive(k - p + 1) / fact
            };
            coef.push(T::from_f64(c).unwrap_or_else(T::zero));
        }
        let fact_pm1: f64 = (1..p).map(f64::from).product();
        let harmonic: f64 = (1..p).map(|i| 1.0 / f64::from(i)).sum();
        Polylog {
            p,
            coef,
            log_coef: T::lit(1.0 / fact_pm1),
            harmonic: T::lit(harmonic),
        }
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    /// `Li_p(e^{iφ})`; `None` where the series diverges (`p = 1`, `φ ≡ 0`).
    pub fn eval(&self, phi: T) -> Option<Complex<T>> {
        let phi = wrap_angle(phi);
        let z = Complex::new(T::zero(), phi);
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coef.iter().rev() {
            acc = acc * z + Complex::new(c, T::zero());
        }
        if phi == T::zero() {
            return if self.p == 1 { None } else { Some(acc) };
        }
        let ln = Complex::new(phi.abs().ln(), -T::FRAC_PI_2() * phi.signum());
        let zp = z.powu(self.p - 1) * self.log_coef;
        Some(acc + zp * (Complex::new(self.harmonic, T::zero()) - ln))
    }
}

/// `Li_p` sampled at `θ + 2πl/N`, `l = 0..N`, ready for residue-class sums.
#[derive(Debug, Clone)]
pub struct ClassSums<T> {
    n: u64,
    theta: T,
    p: u32,
    li: Vec<Complex<T>>,
}

impl<T: Real> ClassSums<T> {
    pub fn new(poly: &Polylog<T>, theta: T, n: u64) -> Option<Self> {
        let step = T::two_pi() / T::of_u64(n);
        let li = (0..n)
            .map(|l| poly.eval(theta + step * T::of_u64(l)))
            .collect::<Option<Vec<_>>>()?;
        Some(ClassSums {
            n,
            theta,
            p: poly.order(),
            li,
        })
    }

    /// `Σ_{n ≥ 1, n ≡ c (mod N)} e^{iθn} / n^p`, `twiddle[k] = e^{−2πik/N}`.
    pub fn full(&self, c: u64, twiddle: &[Complex<T>]) -> Complex<T> {
        let n = self.n;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (l, li) in self.li.iter().enumerate() {
            acc += *li * twiddle[((l as u64 * c) % n) as usize];
        }
        acc / T::of_u64(n)
    }

    /// `Σ_{m ≥ 1} e^{iθ(mN+c)} / (mN+c)^p` for `−N < c < N`, `c ≠ 0`.
    pub fn aliased(&self, c: i64, twiddle: &[Complex<T>]) -> Complex<T> {
        let n = self.n as i64;
        if c < 0 {
            self.full((n + c) as u64, twiddle)
        } else {
            let cc = T::of_i64(c);
            let first = Complex::from_polar(T::one(), self.theta * cc) / cc.powi(self.p as i32);
            self.full(c as u64, twiddle) - first
        }
    }
}

/// `e^{−2πik/N}` for `k = 0..N`.
pub fn twiddles<T: Real>(n: u64) -> Vec<Complex<T>> {
    let step = T::two_pi() / T::of_u64(n);
    (0..n)
        .map(|k| Complex::from_polar(T::one(), -step * T::of_u64(k)))
        .collect()
}
