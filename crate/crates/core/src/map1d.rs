//! The expanding interval factor.
//!
//! The map f on [0,1) is defined implicitly by the cut antiderivative Φ:
//! Φ(f(x)) = x on the left branch [0, a) and f(x) − Φ(f(x)) = x − a on the
//! right branch (a, 1), where a = Φ(1). Both branches are strictly
//! increasing surjections onto [0,1), f′ ≥ 1 wherever defined, and f
//! preserves Lebesgue measure. The indifferent fixed points sit at 0 and 1.
//!
//! Forward evaluation is a bracketed monotone solve; the branch inverses are
//! closed-form: the left inverse is Φ itself, the right inverse is
//! u + a − Φ(u).

use crate::cut::CutFunction;
use crate::error::{check_unit_half_open, Error, Result};
use crate::roots::solve_increasing;
use crate::scalar::Real;

/// Default absolute tolerance for the implicit forward solves. The residual
/// slope is ≈ 1 near the indifferent fixed points, so this is also the
/// solution accuracy there.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Denominator floor below which the one-sided derivative is reported as +∞.
const DERIVATIVE_FLOOR: f64 = 1e-300;

/// The expanding factor map. Immutable and reentrant.
#[derive(Debug, Clone)]
pub struct ExpandingMap<T> {
    cut: CutFunction<T>,
    a: T,
    root_tol: T,
}

impl<T: Real> ExpandingMap<T> {
    pub fn new(cut: CutFunction<T>) -> Self {
        Self::with_root_tol(cut, T::of(DEFAULT_ROOT_TOL))
    }

    pub fn with_root_tol(cut: CutFunction<T>, root_tol: T) -> Self {
        let a = cut.area();
        ExpandingMap { cut, a, root_tol }
    }

    pub fn cut(&self) -> &CutFunction<T> {
        &self.cut
    }

    /// The cut abscissa a = Φ(1), exactly as the antiderivative computes it.
    pub fn a(&self) -> T {
        self.a
    }

    pub fn root_tol(&self) -> T {
        self.root_tol
    }

    /// f(x) for x ∈ [0, 1). f(a) = 0 by the circle convention.
    pub fn forward(&self, x: T) -> Result<T> {
        check_unit_half_open("x", x)?;
        Ok(self.step(x))
    }

    /// Forward step without the domain check; outputs are clamped into
    /// [0, 1 − ε] so orbits stay in domain.
    pub(crate) fn step(&self, x: T) -> T {
        let w = if x == self.a {
            return T::zero();
        } else if x < self.a {
            self.solve_left(x)
        } else {
            self.solve_right(x)
        };
        w.max(T::zero()).min(T::one() - T::epsilon())
    }

    // Left branch: solve Φ(w) = x. Residual slope Φ′ = φ ∈ (0, 1], and
    // Φ(w) ≤ w gives the bracket [x, 1]. Seeded with one analytic Newton
    // step from the lower end, which is already accurate near the
    // indifferent fixed point where orbits spend most of their time.
    fn solve_left(&self, x: T) -> T {
        if x == T::zero() {
            return T::zero();
        }
        let seed = {
            let slope = self.cut.phi_unchecked(x);
            if slope > T::zero() {
                x + self.cut.complement_integral(x) / slope
            } else {
                T::nan()
            }
        };
        solve_increasing(x, T::one(), seed, self.root_tol, |w| {
            (
                self.cut.antiderivative_unchecked(w) - x,
                self.cut.phi_unchecked(w),
            )
        })
    }

    // Right branch: solve w − Φ(w) = x − a. The residual w − Φ(w) is
    // increasing with slope 1 − φ and bounded by w, giving the bracket
    // [x − a, x]; the Newton seed from the upper end is sharp near 1.
    fn solve_right(&self, x: T) -> T {
        let target = x - self.a;
        let seed = {
            let slope = T::one() - self.cut.phi_unchecked(x);
            if slope > T::zero() {
                x - self.cut.tail_integral(T::one() - x) / slope
            } else {
                T::nan()
            }
        };
        solve_increasing(target, x, seed, self.root_tol, |w| {
            (
                self.cut.complement_integral(w) - target,
                T::one() - self.cut.phi_unchecked(w),
            )
        })
    }

    /// f′(x) = 1/φ(f(x)) on the left branch, 1/(1 − φ(f(x))) on the right.
    /// Returns +∞ once the denominator underflows (approaching the cut);
    /// errors at x ∈ {0, a} and outside (0, 1).
    pub fn derivative(&self, x: T) -> Result<T> {
        if !(x > T::zero() && x < T::one()) {
            return Err(Error::Domain {
                name: "x",
                value: x.as_f64(),
                domain: "(0, 1)",
            });
        }
        if x == self.a {
            return Err(Error::Domain {
                name: "x",
                value: x.as_f64(),
                domain: "(0, 1) minus the cut point",
            });
        }
        let p = self.cut.phi_unchecked(self.step(x));
        let denom = if x < self.a { p } else { T::one() - p };
        if denom < T::of(DERIVATIVE_FLOOR) {
            return Ok(T::infinity());
        }
        Ok(denom.recip())
    }

    /// Left-branch inverse: Φ(u) ∈ [0, a).
    pub fn inverse_left(&self, u: T) -> Result<T> {
        check_unit_half_open("u", u)?;
        Ok(self.cut.antiderivative_unchecked(u))
    }

    /// Right-branch inverse: u + a − Φ(u) ∈ [a, 1).
    pub fn inverse_right(&self, u: T) -> Result<T> {
        check_unit_half_open("u", u)?;
        Ok(u + self.a - self.cut.antiderivative_unchecked(u))
    }

    /// The orbit (x, f(x), …, fⁿ(x)).
    pub fn orbit(&self, x: T, n: usize) -> Result<Vec<T>> {
        check_unit_half_open("x", x)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(x);
        let mut cur = x;
        for _ in 0..n {
            cur = self.step(cur);
            out.push(cur);
        }
        Ok(out)
    }
}
