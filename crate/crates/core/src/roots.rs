//! Bracketed root finding for strictly increasing residuals.

use crate::scalar::Real;

const MAX_ITER: usize = 400;

/// Solve f(w) = 0 for an increasing residual on a valid bracket [lo, hi]
/// (f(lo) ≤ 0 ≤ f(hi); the endpoints are never evaluated). `f` returns the
/// residual and its derivative.
///
/// Newton candidates drive the search from `x0`, every candidate is confined
/// to the current bracket, and a midpoint step is forced whenever the
/// bracket stops halving. Once the Newton step falls below tol/4 a probe at
/// tol/2 pulls in the far endpoint, so termination is always certified by a
/// bracket narrower than `tol`.
///
/// Panics if the iteration budget is exhausted, which a valid bracket on a
/// monotone residual cannot trigger.
pub(crate) fn solve_increasing<T: Real>(
    mut lo: T,
    mut hi: T,
    x0: T,
    tol: T,
    f: impl Fn(T) -> (T, T),
) -> T {
    let half = T::half();
    let quarter_tol = tol * T::of(0.25);
    let half_tol = tol * half;
    let mut x = if x0 > lo && x0 < hi { x0 } else { (lo + hi) * half };
    let mut width_ref = hi - lo;
    let mut stale = 0usize;
    for _ in 0..MAX_ITER {
        let (r, dr) = f(x);
        if r == T::zero() {
            return x;
        }
        if r > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let width = hi - lo;
        if width <= tol {
            return (lo + hi) * half;
        }
        if width <= width_ref * half {
            width_ref = width;
            stale = 0;
        } else {
            stale += 1;
        }
        let mid = lo + width * half;
        let mut next = mid;
        if stale < 3 && dr > T::zero() {
            let cand = x - r / dr;
            if cand > lo && cand < hi {
                next = cand;
                if (cand - x).abs() <= quarter_tol {
                    // Newton has pinned the root; step toward the far
                    // endpoint so the bracket itself certifies `tol`.
                    let probe = if hi - cand > cand - lo {
                        cand + half_tol
                    } else {
                        cand - half_tol
                    };
                    if probe > lo && probe < hi {
                        next = probe;
                    }
                }
            }
        }
        x = next;
    }
    panic!("bracketed solve failed to converge on [{lo}, {hi}]");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_roots_of_monotone_residuals() {
        // w - sin(w)/2 - 0.3 = 0
        let root = solve_increasing(0.0f64, 1.0, 0.5, 1e-13, |w| {
            (w - w.sin() / 2.0 - 0.3, 1.0 - w.cos() / 2.0)
        });
        assert!((root - root.sin() / 2.0 - 0.3).abs() < 1e-12);
    }

    #[test]
    fn survives_flat_derivative_regions() {
        // residual ~ w^3 near the root at 0.2^(1/3): derivative vanishes at 0
        let target = 0.008f64;
        let root = solve_increasing(0.0f64, 1.0, 0.9, 1e-13, |w| (w * w * w - target, 3.0 * w * w));
        assert!((root - 0.2).abs() < 1e-12);
    }

    #[test]
    fn bad_initial_guess_falls_back_to_midpoint() {
        let root = solve_increasing(0.0f64, 1.0, f64::NAN, 1e-13, |w| (w - 0.7, 1.0));
        assert!((root - 0.7).abs() < 1e-12);
    }
}
