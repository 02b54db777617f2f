//! Decay series and log-log power-law fitting.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::Serialize;

/// Residual RMS above which a power-law fit is flagged as a poor regime.
pub const RMS_WARN: f64 = 0.2;

/// Minimum number of positive points a fit window must contain.
pub const MIN_FIT_POINTS: usize = 8;

/// Provenance of a decay series.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SeriesMeta {
    pub observables: String,
    pub method: String,
    pub samples: u64,
}

/// A decay quantity indexed by the iterate count, with optional standard
/// errors for Monte Carlo estimates.
#[derive(Debug, Clone)]
pub struct DecaySeries<T> {
    ns: Vec<u64>,
    values: Vec<T>,
    std_errs: Option<Vec<T>>,
    pub meta: SeriesMeta,
}

impl<T: Real> DecaySeries<T> {
    pub fn new(ns: Vec<u64>, values: Vec<T>, meta: SeriesMeta) -> Result<Self> {
        Self::build(ns, values, None, meta)
    }

    pub fn with_std_errs(
        ns: Vec<u64>,
        values: Vec<T>,
        std_errs: Vec<T>,
        meta: SeriesMeta,
    ) -> Result<Self> {
        Self::build(ns, values, Some(std_errs), meta)
    }

    fn build(
        ns: Vec<u64>,
        values: Vec<T>,
        std_errs: Option<Vec<T>>,
        meta: SeriesMeta,
    ) -> Result<Self> {
        if ns.len() != values.len() {
            return Err(Error::InvalidConfig("series index/value length mismatch".into()));
        }
        if let Some(se) = &std_errs {
            if se.len() != ns.len() {
                return Err(Error::InvalidConfig("series stderr length mismatch".into()));
            }
        }
        if ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("series indices must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("series values must be finite".into()));
        }
        Ok(DecaySeries { ns, values, std_errs, meta })
    }

    pub fn len(&self) -> usize {
        self.ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ns.is_empty()
    }

    pub fn ns(&self) -> &[u64] {
        &self.ns
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn std_errs(&self) -> Option<&[T]> {
        self.std_errs.as_deref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.ns.iter().copied().zip(self.values.iter().copied())
    }

    /// First index n with value below `floor`.
    pub fn first_n_below(&self, floor: T) -> Option<u64> {
        self.iter().find(|&(_, v)| v < floor).map(|(n, _)| n)
    }

    /// First n where the standard error exceeds half the estimate — the
    /// noise floor of a Monte Carlo series.
    pub fn noise_floor_n(&self) -> Option<u64> {
        let se = self.std_errs.as_ref()?;
        self.ns
            .iter()
            .zip(self.values.iter())
            .zip(se.iter())
            .find(|((&n, v), s)| n > 0 && **s > **v * T::half())
            .map(|((&n, _), _)| n)
    }

    /// Fit window for a discretized series: starts at n = 10 and closes at
    /// the first n whose value drops below `floor` (exclusive), beyond which
    /// the discretization mixes exponentially and corrupts the tail.
    pub fn floor_window(&self, floor: T) -> (u64, u64) {
        let hi = match self.first_n_below(floor) {
            Some(n) if n > 0 => n - 1,
            Some(_) | None => self.ns.last().copied().unwrap_or(0),
        };
        (10, hi)
    }

    /// Fit window for a Monte Carlo series: starts at n = 10 and closes at
    /// the noise floor.
    pub fn noise_window(&self) -> (u64, u64) {
        let hi = match self.noise_floor_n() {
            Some(n) if n > 0 => n - 1,
            Some(_) | None => self.ns.last().copied().unwrap_or(0),
        };
        (10, hi)
    }
}

/// Least-squares power-law fit of a decay series on a log-log grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerLawFit<T> {
    pub exponent: T,
    /// Natural-log intercept: the fitted series is exp(intercept)·n^exponent.
    pub intercept: T,
    pub window: (u64, u64),
    pub residual_rms: T,
    pub points: usize,
    /// Residual RMS above [`RMS_WARN`]: the window is a poor power-law regime.
    pub rms_warning: bool,
}

pub(crate) struct Ols<T> {
    pub slope: T,
    pub intercept: T,
    pub residual_rms: T,
    pub points: usize,
}

/// Ordinary least squares over prepared (ln n, ln v) pairs.
pub(crate) fn log_log_ols<T: Real>(pts: &[(T, T)]) -> Option<Ols<T>> {
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let count = T::of_usize(n);
    let mut sx = T::zero();
    let mut sy = T::zero();
    for &(x, y) in pts {
        sx += x;
        sy += y;
    }
    let mx = sx / count;
    let my = sy / count;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for &(x, y) in pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = T::zero();
    for &(x, y) in pts {
        let r = y - (intercept + slope * x);
        ss += r * r;
    }
    Some(Ols {
        slope,
        intercept,
        residual_rms: (ss / count).sqrt(),
        points: n,
    })
}

/// Fit value ≈ exp(intercept)·n^exponent over n ∈ [n_lo, n_hi], using only
/// strictly positive values. Errors when fewer than [`MIN_FIT_POINTS`]
/// usable points fall in the window.
pub fn fit_power_law<T: Real>(
    series: &DecaySeries<T>,
    n_lo: u64,
    n_hi: u64,
) -> Result<PowerLawFit<T>> {
    let pts: Vec<(T, T)> = series
        .iter()
        .filter(|&(n, v)| n >= n_lo.max(1) && n <= n_hi && v > T::zero())
        .map(|(n, v)| (T::of(n as f64).ln(), v.ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_FIT_POINTS,
            got: pts.len(),
        });
    }
    let ols = log_log_ols(&pts).ok_or(Error::InsufficientPoints {
        needed: MIN_FIT_POINTS,
        got: pts.len(),
    })?;
    Ok(PowerLawFit {
        exponent: ols.slope,
        intercept: ols.intercept,
        window: (n_lo, n_hi),
        residual_rms: ols.residual_rms,
        points: ols.points,
        rms_warning: ols.residual_rms > T::of(RMS_WARN),
    })
}
