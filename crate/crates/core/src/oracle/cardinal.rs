//! Cardinal functions by brute force: deep direct summation of the
//! unnormalised kernel followed by a dense solve for the cardinal weights.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spline::{SignVariant, SplineConfig};

/// Deepest aliasing level summed directly. When the envelope tail is still
/// above [`ORACLE_TAIL`] there, the sum is carried to twice this depth and the
/// two partial sums are Richardson-extrapolated in the depth.
pub const ORACLE_DEPTH: u64 = 100_000;
/// Envelope tail at which summation may stop early.
pub const ORACLE_TAIL: f64 = 1e-14;
pub const CONDITION_LIMIT: f64 = 1e12;

/// `K(t, x) = 1/N + (1/N) Σ_n [d_n cos(n(t − x)) + s_n cos(n(t + x))]`
/// with the raw channel coefficients, never divided by their node sums.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub entries: DMatrix<f64>,
    /// `‖A‖₁ ‖A⁻¹‖₁`
    pub condition: f64,
}

#[derive(Debug, Clone)]
pub struct CardinalOracle {
    config: SplineConfig<f64>,
    /// `diff[n]`, `sum[n]` for `n = 0..`; index 0 unused.
    diff: Vec<f64>,
    sum: Vec<f64>,
    depth: u64,
    /// Prefix length of the shallower sum and the extrapolation weight.
    richardson: Option<(usize, f64)>,
    kernel: KernelMatrix,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

fn nodes(config: &SplineConfig<f64>) -> Vec<f64> {
    let g = config.interpolation_grid();
    (1..=config.n).map(|k| g.node(k)).collect()
}

impl CardinalOracle {
    pub fn new(config: &SplineConfig<f64>) -> Result<Self> {
        config.validate()?;
        let n = config.n as u64;
        let half = (n - 1) / 2;
        let f = &config.factor;
        let env = f.envelope_bound();
        let weight = config
            .filters
            .gamma
            .iter()
            .chain(&config.filters.eta)
            .fold(0.0f64, |a, w| a.max(w.abs()));
        let mut depth = 0;
        while depth < ORACLE_DEPTH {
            depth += 1;
            let tail: f64 = (1..=half as i64)
                .map(|j| env.class_tail(n, -j, depth, 0) + env.class_tail(n, j, depth, 0))
                .sum();
            if 2.0 * weight * tail < ORACLE_TAIL {
                break;
            }
        }

        let richardson = if depth >= ORACLE_DEPTH {
            // tails of order-p terms shrink like depth^(1-p)
            let p = env.min_order().unwrap_or(2).max(2) as i32;
            Some(((depth * n + half) as usize, 1.0 / (2f64.powi(p - 1) - 1.0)))
        } else {
            None
        };
        let depth = if richardson.is_some() { 2 * depth } else { depth };

        let ind = u64::from(config.i1.bit() + config.i2.bit());
        let r = u64::from(config.r);
        let top = ((depth + 1) * n) as usize;
        let mut diff = vec![0.0; top + 1];
        let mut sum = vec![0.0; top + 1];
        let [g1, g2, g3] = config.filters.gamma;
        let [e1, e2, e3] = config.filters.eta;
        let mut put = |idx: u64, a: f64, b: f64| {
            diff[idx as usize] += a + b;
            sum[idx as usize] += a - b;
        };
        for j in 1..=half {
            let s = f.value(j)?;
            put(j, g1 * s, e1 * s);
            for m in 1..=depth {
                let (alt, minus) = match config.sign_variant {
                    SignVariant::ConstantSign => (m * ind, 1 + r),
                    SignVariant::SignChanging => (m * (r + 1 + ind), 0),
                };
                let sp = if alt % 2 == 0 { 1.0 } else { -1.0 };
                let sm = if (alt + minus) % 2 == 0 { 1.0 } else { -1.0 };
                let lo = f.value(m * n - j)? * sm;
                let hi = f.value(m * n + j)? * sp;
                put(m * n - j, g2 * lo, e2 * lo);
                put(m * n + j, g3 * hi, e3 * hi);
            }
        }

        let mut oracle = CardinalOracle {
            config: config.clone(),
            diff,
            sum,
            depth,
            richardson,
            kernel: KernelMatrix {
                entries: DMatrix::zeros(0, 0),
                condition: 0.0,
            },
            lu: DMatrix::<f64>::identity(1, 1).lu(),
        };
        // Nodes sit on multiples of π/N, so the node kernel folds modulo 2N.
        let lattice = 2 * n;
        let folded = oracle.fold(lattice);
        let idx: Vec<u64> = (0..n).map(|i| 2 * i + u64::from(config.i2.bit())).collect();
        let a = DMatrix::from_fn(n as usize, n as usize, |i, k| {
            oracle.lattice_kernel(&folded, lattice, idx[i], idx[k])
        });
        let lu = a.clone().lu();
        let inv = lu
            .try_inverse()
            .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
        let condition = a.column_iter().map(|c| c.abs().sum()).fold(0.0, f64::max)
            * inv.column_iter().map(|c| c.abs().sum()).fold(0.0, f64::max);
        if !(condition <= CONDITION_LIMIT) {
            return Err(Error::IllConditioned { condition });
        }
        oracle.kernel = KernelMatrix {
            entries: a,
            condition,
        };
        oracle.lu = lu;
        Ok(oracle)
    }

    pub fn kernel_matrix(&self) -> &KernelMatrix {
        &self.kernel
    }

    /// Aliasing depth actually summed.
    pub fn depth(&self) -> u64 {
        self.depth
    }

    /// Whether the depth cap was hit and the sums were extrapolated.
    pub fn extrapolated(&self) -> bool {
        self.richardson.is_some()
    }

    /// Combines the deep sum with the shallow prefix sum `shallow(cut)`.
    fn extrapolate(&self, deep: f64, shallow: impl FnOnce(usize) -> f64) -> f64 {
        match self.richardson {
            Some((cut, w)) => deep + (deep - shallow(cut)) * w,
            None => deep,
        }
    }

    /// Direct-sum kernel at an arbitrary pair of points.
    pub fn kernel(&self, t: f64, x: f64) -> f64 {
        let partial = |upto: usize| {
            let mut acc = 0.0;
            for i in 1..upto {
                let ii = i as f64;
                acc += self.diff[i] * (ii * (t - x)).cos() + self.sum[i] * (ii * (t + x)).cos();
            }
            acc
        };
        let acc = self.extrapolate(partial(self.diff.len()), partial);
        (1.0 + acc) / self.config.n as f64
    }

    /// Coefficients folded modulo `lattice`.
    fn fold(&self, lattice: u64) -> (Vec<f64>, Vec<f64>) {
        let l = lattice as usize;
        let partial = |upto: usize| {
            let mut d = vec![0.0; l];
            let mut s = vec![0.0; l];
            for i in 1..upto {
                d[i % l] += self.diff[i];
                s[i % l] += self.sum[i];
            }
            (d, s)
        };
        let (mut d, mut s) = partial(self.diff.len());
        if let Some((cut, w)) = self.richardson {
            let (d0, s0) = partial(cut);
            for r in 0..l {
                d[r] += (d[r] - d0[r]) * w;
                s[r] += (s[r] - s0[r]) * w;
            }
        }
        (d, s)
    }

    /// Kernel at `t = 2πa/L`, `x = 2πb/L`.
    fn lattice_kernel(&self, folded: &(Vec<f64>, Vec<f64>), lattice: u64, a: u64, b: u64) -> f64 {
        let minus = (a + lattice - b % lattice) % lattice;
        let plus = (a + b) % lattice;
        let step = std::f64::consts::TAU / lattice as f64;
        let mut acc = 0.0;
        for r in 0..lattice {
            acc += folded.0[r as usize] * (step * ((r * minus) % lattice) as f64).cos()
                + folded.1[r as usize] * (step * ((r * plus) % lattice) as f64).cos();
        }
        (1.0 + acc) / self.config.n as f64
    }

    /// Weights `w` with `Σ_k' w_k' K(t_i, x_k') = δ_{ik}`.
    pub fn weights(&self, k: usize) -> Result<Vec<f64>> {
        let n = self.config.n;
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        let mut e = DVector::zeros(n);
        e[k - 1] = 1.0;
        let w = self
            .lu
            .solve(&e)
            .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
        Ok(w.iter().copied().collect())
    }

    /// Cardinal function `k` at one point.
    pub fn cardinal(&self, k: usize, t: f64) -> Result<f64> {
        let w = self.weights(k)?;
        let x = nodes(&self.config);
        Ok(w.iter().zip(&x).map(|(w, x)| w * self.kernel(t, *x)).sum())
    }

    /// Cardinal function `k` at `t_i = 2πi/samples`, `i = 0..samples`.
    pub fn cardinal_on_grid(&self, k: usize, samples: usize) -> Result<Vec<f64>> {
        let w = self.weights(k)?;
        let n = self.config.n as u64;
        let s = samples as u64;
        let lattice = 2 * n * s;
        let folded = self.fold(lattice);
        let i2 = u64::from(self.config.i2.bit());
        let xb: Vec<u64> = (0..n).map(|k| 2 * s * k + i2 * s).collect();
        let step = std::f64::consts::TAU / lattice as f64;
        let table: Vec<f64> = (0..lattice).map(|r| (step * r as f64).cos()).collect();
        let mut minus_cache: HashMap<u64, f64> = HashMap::new();
        let mut plus_cache: HashMap<u64, f64> = HashMap::new();
        let eval = |coef: &[f64], cache: &mut HashMap<u64, f64>, idx: u64| -> f64 {
            *cache.entry(idx).or_insert_with(|| {
                let mut acc = 0.0;
                for (r, c) in coef.iter().enumerate() {
                    if *c != 0.0 {
                        acc += c * table[((r as u64 * idx) % lattice) as usize];
                    }
                }
                acc
            })
        };
        let nf = n as f64;
        Ok((0..s)
            .map(|i| {
                let a = 2 * n * i;
                let mut v = 0.0;
                for (wk, &b) in w.iter().zip(&xb) {
                    let m = (a + lattice - b) % lattice;
                    let p = (a + b) % lattice;
                    let kern = 1.0 + eval(&folded.0, &mut minus_cache, m) + eval(&folded.1, &mut plus_cache, p);
                    v += wk * kern / nf;
                }
                v
            })
            .collect())
    }
}

/// Cardinal function by direct summation and dense solve.
pub fn cardinal_by_linear_solve(config: &SplineConfig<f64>, k: usize, t: f64) -> Result<f64> {
    CardinalOracle::new(config)?.cardinal(k, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::FactorSpec;
    use crate::grids::Indicator;
    use crate::spline::FilterVectors;
    use std::f64::consts::PI;

    /// `Σ_{n≥1} cos(nu)/n²` for `u` in `[0, 2π]`.
    fn bernoulli2(u: f64) -> f64 {
        let u = u.rem_euclid(2.0 * PI);
        PI * PI / 6.0 - PI * u / 2.0 + u * u / 4.0
    }

    #[test]
    fn extrapolated_kernel_matches_closed_form() {
        // all aliases enter with sign +1 and weight 2/n², so the kernel is
        // 1/N + (2/N)(B(u) − B(Nu)/N²)
        let n = 9;
        let cfg = SplineConfig::simple(n, 1, Indicator::Zero, Indicator::Zero, FactorSpec::constant_power(1.0, 1));
        let o = CardinalOracle::new(&cfg).unwrap();
        assert!(o.extrapolated());
        let nf = n as f64;
        let exact = |u: f64| (1.0 + 2.0 * (bernoulli2(u) - bernoulli2(nf * u) / (nf * nf))) / nf;
        for i in 0..n {
            for k in 0..n {
                let u = 2.0 * PI * (i as f64 - k as f64) / nf;
                let got = o.kernel_matrix().entries[(i, k)];
                assert!((got - exact(u)).abs() < 1e-12, "({i},{k}): {got} vs {}", exact(u));
            }
        }
        for &(t, x) in &[(0.3, 1.1), (2.0, 2.0), (5.0, 0.1)] {
            assert!((o.kernel(t, x) - exact(t - x)).abs() < 1e-11);
        }
    }

    fn dirichlet(n: usize, u: f64) -> f64 {
        let h = (n - 1) / 2;
        (1.0 + 2.0 * (1..=h).map(|j| (j as f64 * u).cos()).sum::<f64>()) / n as f64
    }

    #[test]
    fn polynomial_mode_is_dirichlet() {
        let cfg = SplineConfig::simple(7, 1, Indicator::Zero, Indicator::Zero, FactorSpec::constant_power(1.0, 1))
            .with_filters(FilterVectors::polynomial());
        let o = CardinalOracle::new(&cfg).unwrap();
        let w = o.weights(3).unwrap();
        // the kernel is not cardinal by itself; only the interpolant is compared
        assert_eq!(w.len(), 7);
        let x3 = 4.0 * PI / 7.0;
        for &t in &[0.1, 1.0, 2.2, 5.9] {
            assert!((o.cardinal(3, t).unwrap() - dirichlet(7, t - x3)).abs() < 1e-12);
        }
    }

    #[test]
    fn cardinal_at_nodes() {
        let cfg = SplineConfig::simple(5, 2, Indicator::One, Indicator::One, FactorSpec::constant_power(1.0, 2));
        let o = CardinalOracle::new(&cfg).unwrap();
        for i in 1..=5 {
            let t = cfg.interpolation_grid().node::<f64>(i);
            let v = o.cardinal(2, t).unwrap();
            let want = if i == 2 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-10, "i={i}: {v}");
        }
    }

    #[test]
    fn grid_evaluation_matches_pointwise() {
        let cfg = SplineConfig::simple(5, 1, Indicator::Zero, Indicator::One, FactorSpec::sinc_power(0.4, 1));
        let o = CardinalOracle::new(&cfg).unwrap();
        let g = o.cardinal_on_grid(4, 16).unwrap();
        for (i, v) in g.iter().enumerate() {
            let t = 2.0 * PI * i as f64 / 16.0;
            assert!((o.cardinal(4, t).unwrap() - v).abs() < 1e-11, "i={i}");
        }
    }
}
