use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Channel, Error, Result};
use crate::factors::{DecayBound, Expansion, PowerWave};
use crate::polylog::{twiddles, ClassSums, Polylog};
use crate::scalar::Real;
use crate::spline::{EvalReport, FilterMode, SampleSet, SignVariant, SplineConfig};

/// Waves whose power after differentiation exceeds this are summed directly.
const MAX_WAVE_POWER: u32 = 3;
/// Residual tables longer than this are recomputed on the fly.
const TABLE_LIMIT: u64 = 4_000_000;
/// Denominators are converged to this fraction of epsilon, relative.
const DENOMINATOR_SHARE: f64 = 1e-6;
const DEGENERATE_RATIO: f64 = 1e-12;

/// Which waves are summed in closed form for one derivative order.
struct Plan<T> {
    q: u32,
    waves: Vec<PowerWave<T>>,
    residual: DecayBound<T>,
}

struct Order<T> {
    plan: Plan<T>,
    m: u64,
    table: Option<Vec<T>>,
    /// Per `j`: class tails of the minus and plus branch at depth `m`.
    tails: Vec<[T; 2]>,
    complete: bool,
}

struct Denominators<T> {
    /// Per `j`: cosine and sine channel denominators.
    h: Vec<[T; 2]>,
    tau: Vec<[T; 2]>,
    m: u64,
    complete: bool,
}

/// Evaluator for one [`SplineConfig`].
///
/// Channel denominators and per-order truncation depths are computed on
/// first use and shared by every later evaluation, including across
/// threads.
pub struct Spline<T: Real> {
    config: SplineConfig<T>,
    n: u64,
    half: usize,
    /// `e` in the alternation `(−1)^{m e}` shared by both branches.
    alternation: u64,
    /// Constant sign carried by the minus branch.
    minus_sign: T,
    mode: FilterMode,
    expansion: Expansion<T>,
    twiddle: Vec<Complex<T>>,
    polylogs: Vec<Polylog<T>>,
    sigma: Vec<T>,
    orders: Vec<OnceLock<Result<Order<T>>>>,
    denominators: OnceLock<Result<Denominators<T>>>,
}

fn weighted<T: Real>(w: T, tail: T) -> T {
    if w == T::zero() {
        T::zero()
    } else {
        w.abs() * tail
    }
}

/// Smallest `m` in `[lo, hi]` with `ok(m)`, assuming `ok` is monotone.
fn smallest<F: Fn(u64) -> bool>(lo: u64, hi: u64, ok: F) -> Option<u64> {
    if lo > hi || !ok(hi) {
        return None;
    }
    if ok(lo) {
        return Some(lo);
    }
    let mut bad = lo;
    let mut step = 1u64;
    let mut good = loop {
        let probe = bad.saturating_add(step).min(hi);
        if ok(probe) {
            break probe;
        }
        bad = probe;
        step = step.saturating_mul(2);
    };
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if ok(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Some(good)
}

impl<T: Real> Spline<T> {
    pub fn new(config: SplineConfig<T>) -> Result<Self> {
        config.validate()?;
        let n = config.n as u64;
        let half = (config.n - 1) / 2;
        let ind = u64::from(config.i1.bit() + config.i2.bit());
        let r = u64::from(config.r);
        let (alternation, minus_sign) = match config.sign_variant {
            SignVariant::ConstantSign => {
                (ind % 2, if (1 + r) % 2 == 0 { T::one() } else { -T::one() })
            }
            SignVariant::SignChanging => ((r + 1 + ind) % 2, T::one()),
        };
        let expansion = if config.truncation.accelerate {
            config.factor.expansion()?
        } else {
            Expansion::plain(config.factor.envelope_bound())
        };
        let sigma = (1..=half as u64)
            .map(|j| config.factor.value(j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Spline {
            mode: config.filters.mode(),
            n,
            half,
            alternation,
            minus_sign,
            expansion,
            twiddle: twiddles(n),
            polylogs: (1..=MAX_WAVE_POWER).map(Polylog::new).collect(),
            sigma,
            orders: (0..=config.r).map(|_| OnceLock::new()).collect(),
            denominators: OnceLock::new(),
            config,
        })
    }

    pub fn config(&self) -> &SplineConfig<T> {
        &self.config
    }

    fn epsilon(&self) -> T {
        self.config.truncation.epsilon
    }

    fn m_max(&self) -> u64 {
        self.config.truncation.m_max
    }

    fn plan(&self, q: u32) -> Plan<T> {
        let mut waves = Vec::new();
        let mut residual = self.expansion.residual.clone();
        for w in &self.expansion.waves {
            if w.power > q && w.power - q <= MAX_WAVE_POWER {
                waves.push(*w);
            } else {
                residual = residual.sum(&DecayBound::power(w.amp.norm(), w.power));
            }
        }
        Plan { q, waves, residual }
    }

    /// `σ(n)` minus the closed-form part.
    fn residual_value(&self, plan: &Plan<T>, n: u64) -> Result<T> {
        let v = self.config.factor.value(n)?;
        Ok(plan.waves.iter().fold(v, |acc, w| acc - w.value(n)))
    }

    fn tails(&self, plan: &Plan<T>, m: u64) -> Vec<[T; 2]> {
        (1..=self.half as i64)
            .map(|j| {
                [
                    plan.residual.class_tail(self.n, -j, m, plan.q),
                    plan.residual.class_tail(self.n, j, m, plan.q),
                ]
            })
            .collect()
    }

    /// Tails of the cosine and sine channel sums for frequency index `j0`.
    fn channel_tails(&self, t: &[T; 2]) -> [T; 2] {
        let g = &self.config.filters.gamma;
        let e = &self.config.filters.eta;
        [
            weighted(g[1], t[0]) + weighted(g[2], t[1]),
            weighted(e[1], t[0]) + weighted(e[2], t[1]),
        ]
    }

    fn active_branches(&self) -> [bool; 2] {
        let f = &self.config.filters;
        [
            f.gamma[1] != T::zero() || f.eta[1] != T::zero(),
            f.gamma[2] != T::zero() || f.eta[2] != T::zero(),
        ]
    }

    /// Per `j`: `Σ_{m≥1} (−1)^{me} σ(n) n^q cos(nu + qπ/2)` on both branches
    /// (minus branch without its constant sign).
    fn branch_sums(&self, plan: &Plan<T>, m: u64, table: Option<&[T]>, u: T) -> Result<Vec<[T; 2]>> {
        let mut out = vec![[T::zero(); 2]; self.half];
        let active = self.active_branches();
        if !active[0] && !active[1] {
            return Ok(out);
        }
        let q = plan.q;
        let n = self.n;
        let nf = T::of_u64(n);
        let e = T::of_u64(self.alternation);
        let shift = T::PI() * e / nf;
        let iq = Complex::new(T::zero(), T::one()).powu(q);
        let half_t = T::lit(0.5);

        for w in &plan.waves {
            let poly = &self.polylogs[(w.power - q - 1) as usize];
            let plus = ClassSums::new(poly, w.freq + u + shift, n)
                .ok_or(Error::SeriesDivergent { order: q })?;
            let minus = ClassSums::new(poly, w.freq - u + shift, n)
                .ok_or(Error::SeriesDivergent { order: q })?;
            let a_plus = w.amp * iq;
            let a_minus = w.amp * iq.conj();
            for (j0, slot) in out.iter_mut().enumerate() {
                let j = j0 as i64 + 1;
                for (b, c) in [(0usize, -j), (1, j)] {
                    if !active[b] {
                        continue;
                    }
                    let phase = Complex::from_polar(T::one(), -shift * T::of_i64(c));
                    let s = a_plus * plus.aliased(c, &self.twiddle)
                        + a_minus * minus.aliased(c, &self.twiddle);
                    slot[b] += half_t * (phase * s).re;
                }
            }
        }

        if m > 0 {
            let quarter = T::FRAC_PI_2() * T::of_u64(u64::from(q));
            for (j0, slot) in out.iter_mut().enumerate() {
                let j = j0 as u64 + 1;
                for (b, active) in active.iter().enumerate() {
                    if !active {
                        continue;
                    }
                    let mut acc = T::zero();
                    for mm in 1..=m {
                        let idx = if b == 0 { mm * n - j } else { mm * n + j };
                        let res = match table {
                            Some(tab) => tab[(idx - 1) as usize],
                            None => self.residual_value(plan, idx)?,
                        };
                        if res == T::zero() {
                            continue;
                        }
                        let nn = T::of_u64(idx);
                        let mut term = res * (nn * u + quarter).cos();
                        if q > 0 {
                            term *= nn.powi(q as i32);
                        }
                        if self.alternation == 1 && mm % 2 == 1 {
                            acc -= term;
                        } else {
                            acc += term;
                        }
                    }
                    slot[b] += acc;
                }
            }
        }
        Ok(out)
    }

    fn degenerate_scale(&self, j: usize, w: &[T; 3]) -> Result<T> {
        let f = &self.config.factor;
        let n = self.n;
        let j64 = j as u64;
        Ok((w[0] * self.sigma[j - 1])
            .abs()
            .max((w[1] * f.value(n - j64)?).abs())
            .max((w[2] * f.value(n + j64)?).abs()))
    }

    fn compute_denominators(&self) -> Result<Denominators<T>> {
        let plan = self.plan(0);
        let n = self.n;
        let m_max = self.m_max();
        let min_m = (plan.residual.start + self.half as u64).div_ceil(n).saturating_sub(1);
        let min_m = min_m.min(m_max);
        let filters = self.config.filters;
        let eval = |m: u64| -> Result<(Vec<[T; 2]>, Vec<[T; 2]>)> {
            let sums = self.branch_sums(&plan, m, None, T::zero())?;
            let tails = self.tails(&plan, m);
            let mut h = Vec::with_capacity(self.half);
            let mut tau = Vec::with_capacity(self.half);
            for (j0, s) in sums.iter().enumerate() {
                let sig = self.sigma[j0];
                let chan = |w: &[T; 3]| w[0] * sig + w[1] * self.minus_sign * s[0] + w[2] * s[1];
                h.push([chan(&filters.gamma), chan(&filters.eta)]);
                tau.push(self.channel_tails(&tails[j0]));
            }
            Ok((h, tau))
        };

        let share = T::lit(DENOMINATOR_SHARE) * self.epsilon();
        let (mut h, mut tau) = eval(min_m)?;
        let mut m = min_m;
        for _ in 0..8 {
            let fits = |m: u64, h: &[[T; 2]]| {
                let tails = self.tails(&plan, m);
                tails.iter().zip(h).all(|(t, h)| {
                    let tt = self.channel_tails(t);
                    (0..2).all(|c| tt[c] <= share * h[c].abs())
                })
            };
            if (0..self.half).all(|j| (0..2).all(|c| tau[j][c] <= share * (h[j][c].abs() - tau[j][c])))
            {
                break;
            }
            let next = smallest(m, m_max, |mm| fits(mm, &h)).unwrap_or(m_max);
            let next = if next <= m { (m.max(1) * 2).min(m_max) } else { next };
            if next == m {
                break;
            }
            m = next;
            (h, tau) = eval(m)?;
        }
        let complete =
            (0..self.half).all(|j| (0..2).all(|c| tau[j][c] <= share * (h[j][c].abs() - tau[j][c])));

        // Degeneracy is judged only on the channels the evaluation divides by.
        let channels: &[(usize, Channel)] = match self.mode {
            FilterMode::Simple => &[(0, Channel::Collapsed)],
            _ => &[(0, Channel::Even), (1, Channel::Odd)],
        };
        for j in 1..=self.half {
            for &(c, channel) in channels {
                let w = if c == 0 { &filters.gamma } else { &filters.eta };
                let scale = self.degenerate_scale(j, w)?;
                let v = h[j - 1][c];
                if !(v.abs() > T::lit(DEGENERATE_RATIO) * scale && v.abs() > tau[j - 1][c]) {
                    return Err(Error::DenominatorDegenerate {
                        j,
                        channel,
                        value: v.as_f64(),
                        scale: scale.as_f64(),
                    });
                }
            }
        }
        Ok(Denominators {
            h,
            tau,
            m,
            complete,
        })
    }

    fn denominators(&self) -> Result<&Denominators<T>> {
        self.denominators
            .get_or_init(|| self.compute_denominators())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_order(&self, q: u32) -> Result<Order<T>> {
        let den = self.denominators()?;
        let plan = self.plan(q);
        let n = self.n;
        let m_max = self.m_max();
        let target = self.epsilon() * T::lit(0.5);
        let two_over_n = T::lit(2.0) / T::of_u64(n);
        let simple = self.mode == FilterMode::Simple;
        let bound = |m: u64| -> T {
            let tails = self.tails(&plan, m);
            let mut total = T::zero();
            for (j0, t) in tails.iter().enumerate() {
                let tt = self.channel_tails(t);
                let chans = if simple { 1 } else { 2 };
                for c in 0..chans {
                    total += tt[c] / (den.h[j0][c].abs() - den.tau[j0][c]);
                }
            }
            two_over_n * total
        };
        let min_m = (plan.residual.start + self.half as u64).div_ceil(n)
            .saturating_sub(1)
            .min(m_max);
        let (m, complete) = match smallest(min_m, m_max, |m| bound(m) <= target) {
            Some(m) => (m, true),
            None => (m_max, false),
        };
        let table = if m > 0 && (m + 1) * n <= TABLE_LIMIT {
            Some(
                (1..=(m + 1) * n)
                    .map(|i| self.residual_value(&plan, i))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        let tails = self.tails(&plan, m);
        Ok(Order {
            plan,
            m,
            table,
            tails,
            complete,
        })
    }

    fn order(&self, q: u32) -> Result<&Order<T>> {
        if q > self.config.r {
            return Err(Error::OrderTooHigh {
                order: q,
                r: self.config.r,
            });
        }
        self.orders[q as usize]
            .get_or_init(|| self.compute_order(q))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn node(&self, k: usize) -> Result<T> {
        if k == 0 || k > self.config.n {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.config.n,
            });
        }
        Ok(self.config.interpolation_grid().node(k))
    }

    /// `σ(j) j^q cos(ju + qπ/2)`
    fn leading(&self, j: usize, q: u32, u: T) -> T {
        let jj = T::of_u64(j as u64);
        let quarter = T::FRAC_PI_2() * T::of_u64(u64::from(q));
        self.sigma[j - 1] * jj.powi(q as i32) * (jj * u + quarter).cos()
    }

    /// Numerators of both channels for every `j` (general form).
    fn general_numerators(&self, ord: &Order<T>, x: T, t: T) -> Result<Vec<[T; 2]>> {
        let (u1, u2) = (t - x, t + x);
        let a1 = self.branch_sums(&ord.plan, ord.m, ord.table.as_deref(), u1)?;
        let a2 = self.branch_sums(&ord.plan, ord.m, ord.table.as_deref(), u2)?;
        let g = &self.config.filters.gamma;
        let e = &self.config.filters.eta;
        let half_t = T::lit(0.5);
        let q = ord.plan.q;
        Ok((1..=self.half)
            .map(|j| {
                let (l1, l2) = (self.leading(j, q, u1), self.leading(j, q, u2));
                let (s1, s2) = (a1[j - 1], a2[j - 1]);
                let br = |w: &[T; 3], s: [T; 2]| w[1] * self.minus_sign * s[0] + w[2] * s[1];
                let c = half_t * (g[0] * (l1 + l2) + br(g, s1) + br(g, s2));
                let s = half_t * (e[0] * (l1 - l2) + br(e, s1) - br(e, s2));
                [c, s]
            })
            .collect())
    }

    fn assemble(&self, k: usize, t: T, q: u32, collapse: bool) -> Result<EvalReport<T>> {
        let x = self.node(k)?;
        let ord = self.order(q)?;
        let den = self.denominators()?;
        let mut sum = T::zero();
        let mut bound = T::zero();
        let mut add = |num: T, tau_num: T, h: T, tau_h: T| {
            let ratio = num / h;
            sum += ratio;
            bound += (tau_num + ratio.abs() * tau_h) / (h.abs() - tau_h);
        };
        if collapse {
            let u = t - x;
            let a = self.branch_sums(&ord.plan, ord.m, ord.table.as_deref(), u)?;
            for j in 1..=self.half {
                let c = self.leading(j, q, u) + self.minus_sign * a[j - 1][0] + a[j - 1][1];
                let tau = ord.tails[j - 1][0] + ord.tails[j - 1][1];
                add(c, tau, den.h[j - 1][0], den.tau[j - 1][0]);
            }
        } else {
            let nums = self.general_numerators(ord, x, t)?;
            for j in 1..=self.half {
                let tau = self.channel_tails(&ord.tails[j - 1]);
                for c in 0..2 {
                    add(nums[j - 1][c], tau[c], den.h[j - 1][c], den.tau[j - 1][c]);
                }
            }
        }
        let nf = T::of_u64(self.n);
        let constant = if q == 0 { T::one() } else { T::zero() };
        let two = T::lit(2.0);
        let tail_bound = two * bound / nf;
        Ok(EvalReport {
            value: (constant + two * sum) / nf,
            tail_bound,
            terms_used: ord.m,
            truncation_incomplete: !ord.complete
                || !den.complete
                || !(tail_bound <= self.epsilon()),
        })
    }

    fn channel(&self, j: usize, k: usize, t: T, c: usize) -> Result<(EvalReport<T>, EvalReport<T>)> {
        if j == 0 || j > self.half {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.half,
            });
        }
        let x = self.node(k)?;
        let ord = self.order(0)?;
        let den = self.denominators()?;
        let nums = self.general_numerators(ord, x, t)?;
        let tau = self.channel_tails(&ord.tails[j - 1]);
        Ok((
            EvalReport {
                value: nums[j - 1][c],
                tail_bound: tau[c],
                terms_used: ord.m,
                truncation_incomplete: !ord.complete,
            },
            EvalReport {
                value: den.h[j - 1][c],
                tail_bound: den.tau[j - 1][c],
                terms_used: den.m,
                truncation_incomplete: !den.complete,
            },
        ))
    }

    /// `(c_j(t), hc_j)` for center `k`.
    pub fn channel_even(&self, j: usize, k: usize, t: T) -> Result<(EvalReport<T>, EvalReport<T>)> {
        self.channel(j, k, t, 0)
    }

    /// `(s_j(t), hs_j)` for center `k`.
    pub fn channel_odd(&self, j: usize, k: usize, t: T) -> Result<(EvalReport<T>, EvalReport<T>)> {
        self.channel(j, k, t, 1)
    }

    /// `st_k(t)`; simple splines use the collapsed single-channel form.
    pub fn fundamental_value(&self, k: usize, t: T) -> Result<EvalReport<T>> {
        self.assemble(k, t, 0, self.mode == FilterMode::Simple)
    }

    /// `st_k(t)` through separate cosine and sine channels, whatever the filters.
    pub fn fundamental_value_general(&self, k: usize, t: T) -> Result<EvalReport<T>> {
        self.assemble(k, t, 0, false)
    }

    /// Term-wise derivative of `st_k`, `0 ≤ order ≤ r`.
    pub fn fundamental_derivative(&self, k: usize, t: T, order: u32) -> Result<EvalReport<T>> {
        self.assemble(k, t, order, self.mode == FilterMode::Simple)
    }

    fn check_samples(&self, samples: &SampleSet<T>) -> Result<()> {
        if samples.values.len() != self.config.n {
            return Err(Error::SampleLength {
                expected: self.config.n,
                got: samples.values.len(),
            });
        }
        Ok(())
    }

    /// `S^{(order)}(t) = Σ_k f_k st_k^{(order)}(t)`.
    pub fn interpolant_derivative(&self, samples: &SampleSet<T>, t: T, order: u32) -> Result<EvalReport<T>> {
        self.check_samples(samples)?;
        let mut out = EvalReport::exact(T::zero());
        for (k, &f) in samples.values.iter().enumerate() {
            if f == T::zero() {
                continue;
            }
            let st = self.fundamental_derivative(k + 1, t, order)?;
            out.value += f * st.value;
            out.tail_bound += f.abs() * st.tail_bound;
            out.terms_used = out.terms_used.max(st.terms_used);
            out.truncation_incomplete |= st.truncation_incomplete;
        }
        Ok(out)
    }

    pub fn interpolant_value(&self, samples: &SampleSet<T>, t: T) -> Result<EvalReport<T>> {
        self.interpolant_derivative(samples, t, 0)
    }
}
