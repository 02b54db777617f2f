//! First-return partition over the period-2 base interval.
//!
//! The factor map has a period-2 orbit {x₀, x′₀} straddling the cut; the
//! base of the return structure is Δ₀ = [x₀, x′₀). Pulling x₀ back through
//! the left branch gives a sequence xₙ ↓ 0 and rungs Jₙ = [xₙ₊₁, xₙ);
//! mirrored primed sequences climb to 1. The entry set Iₖ ⊂ (a, x′₀) is the
//! right-branch preimage of Jₖ₋₁, so an orbit entering Iₖ walks
//! Iₖ → Jₖ₋₁ → ⋯ → J₀ → Δ₀ and returns in exactly k+1 steps. The measures
//! m(Iₖ) decay like k^(−2−1/α), which makes the return time integrable and
//! pins the polynomial mixing rate.
//!
//! Measures are computed from the one-sided integrals of the cut function
//! rather than endpoint differences of order-1 quantities, so the deep
//! levels keep full relative precision.

use crate::error::{Error, Result};
use crate::fit::log_log_ols;
use crate::map1d::ExpandingMap;
use crate::scalar::Real;
use serde::Serialize;

/// Iteration cap for the period-2 fixed-point search.
const PERIOD2_MAX_ITER: u64 = 1_000_000;

/// Iteration cap for direct return-time orbits.
const RETURN_TIME_CAP: u64 = 10_000_000;

/// Locate the period-2 orbit {x₀, x′₀} with x₀ < a < x′₀.
///
/// x₀ is the fixed point of the two-branch pullback h = Φ ∘ (right inverse),
/// a contraction into (0, a); iteration stops when successive values differ
/// by at most the map's root tolerance.
pub fn find_period2<T: Real>(map: &ExpandingMap<T>) -> Result<(T, T)> {
    if map.cut().is_constant() {
        return Err(Error::UnsupportedCut("tower requires non-constant cut"));
    }
    let tol = map.root_tol();
    let mut x = map.a() * T::half();
    for _ in 0..PERIOD2_MAX_ITER {
        let next = map.inverse_left(map.inverse_right(x)?)?;
        if (next - x).abs() <= tol {
            let x0p = map.inverse_right(next)?;
            return Ok((next, x0p));
        }
        x = next;
    }
    Err(Error::Convergence {
        context: "period-2 search",
        iterations: PERIOD2_MAX_ITER,
    })
}

/// Tail mass above level n with its truncation correction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailMass<T> {
    /// Best estimate: partial sum plus the fitted-tail correction.
    pub value: T,
    /// Σ_{n < l < depth} (l − n)·(m(I_l) + m(I′_l)) over built levels.
    pub partial: T,
    /// Correction for the levels beyond the built depth, integrated from
    /// the fitted power law of the level masses.
    pub truncation: T,
    /// Set when the correction exceeds 10% of the value.
    pub truncation_warning: bool,
}

/// One fitted log-log slope with its theoretical target.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit<T> {
    pub name: &'static str,
    pub slope: T,
    pub expected: T,
    pub residual_rms: T,
}

/// Fitted interval asymptotics against their theoretical exponents.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport<T> {
    pub window: (usize, usize),
    pub fits: Vec<SlopeFit<T>>,
}

impl<T: Real> AsymptoticReport<T> {
    pub fn fit(&self, name: &str) -> Option<&SlopeFit<T>> {
        self.fits.iter().find(|f| f.name == name)
    }

    /// Largest |slope − expected| over all fitted series.
    pub fn worst_deviation(&self) -> T {
        self.fits
            .iter()
            .map(|f| (f.slope - f.expected).abs())
            .fold(T::zero(), T::max)
    }
}

/// Empirical distortion statistic for one entry interval.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistortionStats<T> {
    pub level: usize,
    pub pairs: usize,
    /// max over sampled pairs of |(f^R)′(y)/(f^R)′(z) − 1| / |f^R(y) − f^R(z)|.
    pub max_statistic: T,
    /// Contraction constant of the return map: min{1/f′(x₀), 1/f′(x′₀)}.
    pub beta: T,
}

/// The built return partition: backward orbits, rung and entry-interval
/// measures, and tail-mass data. Immutable after `build`.
#[derive(Debug, Clone)]
pub struct TowerPartition<T> {
    x0: T,
    x0p: T,
    a: T,
    alpha: T,
    alpha_prime: T,
    /// x₀ > x₁ > … > x_depth (left backward orbit).
    xs: Vec<T>,
    /// 1 − x′ₙ, stored directly so the primed side keeps precision near 1.
    ws: Vec<T>,
    /// m(Jₖ) for k < depth.
    mj: Vec<T>,
    /// m(J′ₖ) for k < depth.
    mjp: Vec<T>,
    /// m(Iₖ) for 1 ≤ k < depth (index k−1).
    mi: Vec<T>,
    /// m(I′ₖ) for 1 ≤ k < depth (index k−1).
    mip: Vec<T>,
    /// Suffix sums over levels: s1[l] = Σ_{j ≥ l} tot(j), s2[l] = Σ j·tot(j).
    s1: Vec<T>,
    s2: Vec<T>,
    /// (amplitude, positive decay exponent) of the fitted level-mass tail.
    tail_fit: Option<(T, T)>,
    depth: usize,
    truncated_at: Option<usize>,
}

impl<T: Real> TowerPartition<T> {
    /// Build `depth` levels of the partition.
    ///
    /// Stops early (recording `truncated_at`) once consecutive backward
    /// iterates come within ten root tolerances of each other, where the
    /// interval widths would drown in round-off.
    pub fn build(map: &ExpandingMap<T>, depth: usize) -> Result<Self> {
        if depth < 2 {
            return Err(Error::InvalidConfig("tower depth must be at least 2".into()));
        }
        let (x0, x0p) = find_period2(map)?;
        let cut = map.cut();
        let gap_floor = T::of(10.0) * map.root_tol();
        let mut xs = Vec::with_capacity(depth + 1);
        let mut ws = Vec::with_capacity(depth + 1);
        xs.push(x0);
        ws.push(T::one() - x0p);
        let mut truncated_at = None;
        for n in 1..=depth {
            let xq = xs[n - 1];
            let wq = ws[n - 1];
            let xn = cut.antiderivative_unchecked(xq);
            let wn = wq - cut.tail_integral(wq);
            if xq - xn < gap_floor || wq - wn < gap_floor {
                truncated_at = Some(n - 1);
                break;
            }
            xs.push(xn);
            ws.push(wn);
        }
        let depth = xs.len() - 1;
        if depth < 2 {
            return Err(Error::InvalidConfig(
                "tower truncated before the second level; loosen root_tol".into(),
            ));
        }

        let mj: Vec<T> = xs[..depth].iter().map(|&x| cut.complement_integral(x)).collect();
        let mjp: Vec<T> = ws[..depth].iter().map(|&w| cut.tail_integral(w)).collect();
        // m(I_k) = m(J_{k−1}) − m(J_k): the two preimage components of J_{k−1}
        // split its mass between J_k and I_k, because f preserves Lebesgue
        // measure.
        let mi: Vec<T> = (1..depth).map(|k| mj[k - 1] - mj[k]).collect();
        let mip: Vec<T> = (1..depth).map(|k| mjp[k - 1] - mjp[k]).collect();

        // suffix sums, accumulated tail-first so small terms add first
        let mut s1 = vec![T::zero(); depth + 1];
        let mut s2 = vec![T::zero(); depth + 1];
        for l in (1..depth).rev() {
            let tot = mi[l - 1] + mip[l - 1];
            s1[l] = s1[l + 1] + tot;
            s2[l] = s2[l + 1] + T::of_usize(l) * tot;
        }

        let tail_fit = {
            let lo = std::cmp::max(10, depth / 10);
            let pts: Vec<(T, T)> = (lo..depth)
                .filter(|&l| mi[l - 1] + mip[l - 1] > T::zero())
                .map(|l| {
                    (
                        T::of_usize(l).ln(),
                        (mi[l - 1] + mip[l - 1]).ln(),
                    )
                })
                .collect();
            log_log_ols(&pts).and_then(|fit| {
                let p = -fit.slope;
                if p > T::two() {
                    Some((fit.intercept.exp(), p))
                } else {
                    None
                }
            })
        };

        Ok(TowerPartition {
            x0,
            x0p,
            a: map.a(),
            alpha: cut.alpha(),
            alpha_prime: cut.alpha_prime(),
            xs,
            ws,
            mj,
            mjp,
            mi,
            mip,
            s1,
            s2,
            tail_fit,
            depth,
            truncated_at,
        })
    }

    pub fn x0(&self) -> T {
        self.x0
    }

    pub fn x0p(&self) -> T {
        self.x0p
    }

    /// Number of built levels (xₙ exists for n ≤ depth, Jₖ for k < depth,
    /// Iₖ for 1 ≤ k < depth).
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Level at which the build hit the round-off floor, if it did.
    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated_at
    }

    pub fn m_delta0(&self) -> T {
        self.x0p - self.x0
    }

    pub fn x(&self, n: usize) -> T {
        self.xs[n]
    }

    pub fn xp(&self, n: usize) -> T {
        T::one() - self.ws[n]
    }

    /// 1 − x′ₙ without cancellation.
    pub fn one_minus_xp(&self, n: usize) -> T {
        self.ws[n]
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn one_minus_xps(&self) -> &[T] {
        &self.ws
    }

    pub fn m_j(&self, k: usize) -> T {
        self.mj[k]
    }

    pub fn m_jp(&self, k: usize) -> T {
        self.mjp[k]
    }

    pub fn m_i(&self, k: usize) -> T {
        self.mi[k - 1]
    }

    pub fn m_ip(&self, k: usize) -> T {
        self.mip[k - 1]
    }

    /// Jₖ = [xₖ₊₁, xₖ).
    pub fn j_interval(&self, k: usize) -> (T, T) {
        (self.xs[k + 1], self.xs[k])
    }

    /// J′ₖ = [x′ₖ, x′ₖ₊₁).
    pub fn jp_interval(&self, k: usize) -> (T, T) {
        (T::one() - self.ws[k], T::one() - self.ws[k + 1])
    }

    /// Iₖ = [f⁻¹right(xₖ), f⁻¹right(xₖ₋₁)) ⊂ (a, x′₀).
    pub fn i_interval(&self, k: usize, map: &ExpandingMap<T>) -> Result<(T, T)> {
        if k == 0 || k > self.depth {
            return Err(Error::LevelOutOfRange { level: k, depth: self.depth });
        }
        Ok((map.inverse_right(self.xs[k])?, map.inverse_right(self.xs[k - 1])?))
    }

    /// I′ₖ = [f⁻¹left(x′ₖ₋₁), f⁻¹left(x′ₖ)) ⊂ [x₀, a).
    pub fn ip_interval(&self, k: usize, map: &ExpandingMap<T>) -> Result<(T, T)> {
        if k == 0 || k > self.depth {
            return Err(Error::LevelOutOfRange { level: k, depth: self.depth });
        }
        Ok((
            map.inverse_left(self.xp(k - 1))?,
            map.inverse_left(self.xp(k))?,
        ))
    }

    /// Σ_{l>n} (l − n)·(m(I_l) + m(I′_l)) with a truncation correction from
    /// the fitted tail exponent. This is the mass sitting above height n in
    /// the return structure, the quantity whose decay rate is the mixing
    /// rate.
    pub fn tail_mass(&self, n: usize) -> Result<TailMass<T>> {
        if n == 0 || n >= self.depth {
            return Err(Error::LevelOutOfRange { level: n, depth: self.depth });
        }
        let partial = self.s2[n + 1] - T::of_usize(n) * self.s1[n + 1];
        let truncation = match self.tail_fit {
            Some((c, p)) if p > T::two() => {
                // ∫_L^∞ (l − n) c l^(−p) dl with L = depth (first missing level)
                let el = T::of_usize(self.depth);
                c * (el.powf(T::two() - p) / (p - T::two())
                    - T::of_usize(n) * el.powf(T::one() - p) / (p - T::one()))
            }
            _ => T::zero(),
        };
        let value = partial + truncation;
        let truncation_warning =
            self.tail_fit.is_none() || truncation > T::of(0.1) * value;
        Ok(TailMass {
            value,
            partial,
            truncation,
            truncation_warning,
        })
    }

    /// Log-log slope fits of the level data over [n_lo, n_hi] against the
    /// theoretical exponents −1/α, −(1+1/α), −(2+1/α) (and primed) plus the
    /// mean branch derivative growth (+1).
    pub fn asymptotic_report(&self, n_lo: usize, n_hi: usize) -> Result<AsymptoticReport<T>> {
        if self.depth < 100 {
            return Err(Error::InvalidConfig(
                "asymptotic report needs depth at least 100".into(),
            ));
        }
        if n_lo < 1 || n_lo + 8 > n_hi {
            return Err(Error::InvalidConfig("bad asymptotics window".into()));
        }
        let one = T::one();
        let ia = one / self.alpha;
        let iap = one / self.alpha_prime;
        let mut fits = Vec::new();
        let mut push = |name: &'static str, expected: T, hi: usize, series: &dyn Fn(usize) -> T| {
            let pts: Vec<(T, T)> = (n_lo..=hi.min(n_hi))
                .map(|n| (T::of_usize(n).ln(), series(n)))
                .filter(|&(_, v)| v.is_finite())
                .collect();
            if let Some(fit) = log_log_ols(&pts) {
                fits.push(SlopeFit {
                    name,
                    slope: fit.slope,
                    expected,
                    residual_rms: fit.residual_rms,
                });
            }
        };
        push("x_n", -ia, self.depth, &|n| self.xs[n].ln());
        push("one_minus_xp_n", -iap, self.depth, &|n| self.ws[n].ln());
        push("m_J", -(one + ia), self.depth - 1, &|k| self.mj[k].ln());
        push("m_Jp", -(one + iap), self.depth - 1, &|k| self.mjp[k].ln());
        push("m_I", -(T::two() + ia), self.depth - 1, &|k| self.mi[k - 1].ln());
        push("m_Ip", -(T::two() + iap), self.depth - 1, &|k| self.mip[k - 1].ln());
        // ∫_{I_k} f′ = m(J_{k−1}), so the mean of f′ over I_k is the measure ratio
        push("mean_fprime_I", one, self.depth - 1, &|k| {
            (self.mj[k - 1] / self.mi[k - 1]).ln()
        });
        Ok(AsymptoticReport {
            window: (n_lo, n_hi),
            fits,
        })
    }

    /// First return time to Δ₀ = [x₀, x′₀).
    ///
    /// Locates x among the entry intervals by binary search over their
    /// closed-form endpoints and returns k+1 there; points deeper than the
    /// built levels fall back to direct iteration (capped).
    pub fn return_time(&self, map: &ExpandingMap<T>, x: T) -> Result<u64> {
        if !(x >= self.x0 && x < self.x0p) {
            return Err(Error::Domain {
                name: "x",
                value: x.as_f64(),
                domain: "[x0, x0p)",
            });
        }
        if x > self.a {
            // I_k left endpoints r_k = inverse_right(x_k) decrease in k;
            // find the smallest k with r_k ≤ x, then x ∈ [r_k, r_{k−1}).
            let r = |k: usize| map.inverse_right(self.xs[k]).unwrap_or(self.a);
            if x < r(self.depth) {
                return self.return_time_by_orbit(map, x);
            }
            let mut lo = 0usize; // r(0) = x0p > x
            let mut hi = self.depth; // r(hi) <= x
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if r(mid) <= x {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(hi as u64 + 1)
        } else if x < self.a {
            // I′_k right endpoints l_k = Φ(x′_k) increase in k;
            // find the smallest k with l_k > x, then x ∈ [l_{k−1}, l_k).
            let l = |k: usize| map.inverse_left(self.xp(k)).unwrap_or(self.a);
            if x >= l(self.depth) {
                return self.return_time_by_orbit(map, x);
            }
            let mut lo = 0usize; // l(0) = x0 <= x
            let mut hi = self.depth; // l(hi) > x
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if l(mid) > x {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(hi as u64 + 1)
        } else {
            // x = a maps to the fixed point at 0 and never returns
            self.return_time_by_orbit(map, x)
        }
    }

    fn return_time_by_orbit(&self, map: &ExpandingMap<T>, x: T) -> Result<u64> {
        let mut cur = x;
        for n in 1..=RETURN_TIME_CAP {
            cur = map.forward(cur)?;
            if cur >= self.x0 && cur < self.x0p {
                return Ok(n);
            }
        }
        Err(Error::IterationCap { cap: RETURN_TIME_CAP })
    }

    /// Empirical distortion constant of the return map on I_level.
    ///
    /// Samples evenly spaced points of I_level, forms (f^R)′ by the chain
    /// rule along the R = level+1 orbit steps, and maximizes
    /// |ratio − 1| / |f^R(y) − f^R(z)| over pairs. Uniform boundedness over
    /// levels is the content of the distortion lemma.
    pub fn distortion_check(
        &self,
        map: &ExpandingMap<T>,
        level: usize,
        samples: usize,
    ) -> Result<DistortionStats<T>> {
        if level == 0 || level >= self.depth {
            return Err(Error::LevelOutOfRange { level, depth: self.depth });
        }
        if samples < 2 {
            return Err(Error::InvalidConfig("need at least 2 sample points".into()));
        }
        let (lo, hi) = self.i_interval(level, map)?;
        let steps = level + 1;
        let a = map.a();
        let cut = map.cut();
        let mut final_points = Vec::with_capacity(samples);
        let mut log_derivs = Vec::with_capacity(samples);
        for j in 0..samples {
            let t = lo + (hi - lo) * T::of_usize(j + 1) / T::of_usize(samples + 1);
            let mut cur = t;
            let mut log_dp = T::zero();
            for _ in 0..steps {
                let w = map.step(cur);
                let p = cut.phi_unchecked(w);
                let denom = if cur <= a { p } else { T::one() - p };
                log_dp -= denom.ln();
                cur = w;
            }
            final_points.push(cur);
            log_derivs.push(log_dp);
        }
        let mut max_stat = T::zero();
        let mut pairs = 0usize;
        for j in 0..samples {
            for k in (j + 1)..samples {
                let spread = (final_points[j] - final_points[k]).abs();
                if spread < T::of(1e-14) {
                    continue;
                }
                let ratio = (log_derivs[j] - log_derivs[k]).exp();
                let stat = (ratio - T::one()).abs() / spread;
                max_stat = max_stat.max(stat);
                pairs += 1;
            }
        }
        let beta = (map.derivative(self.x0)?.recip()).min(map.derivative(self.x0p)?.recip());
        Ok(DistortionStats {
            level,
            pairs,
            max_statistic: max_stat,
            beta,
        })
    }
}
