//! The two-dimensional baker's map.
//!
//! B(x, y) = (f(x), g(x, y)) where the fibre action is affine:
//! g = φ(f(x))·y left of the cut and y + φ(f(x))·(1−y) right of it, so the
//! left strip lands below the graph of φ and the right strip above it. The
//! Jacobian is lower triangular with determinant 1 (area preservation), and
//! the fibre over x is contracted after n steps by the product of
//! φ̃(fᵏx) = φ(f(fᵏx)) or 1 − φ(f(fᵏx)) along the orbit.

use crate::error::{check_unit_closed, check_unit_half_open, Error, Result};
use crate::map1d::ExpandingMap;
use crate::scalar::Real;

/// Area-preserving skew product over the expanding factor. Immutable; all
/// operations are pure.
#[derive(Debug, Clone)]
pub struct BakerMap<T> {
    factor: ExpandingMap<T>,
}

impl<T: Real> BakerMap<T> {
    pub fn new(factor: ExpandingMap<T>) -> Self {
        BakerMap { factor }
    }

    pub fn factor(&self) -> &ExpandingMap<T> {
        &self.factor
    }

    /// One application of B on [0,1) × [0,1].
    pub fn forward(&self, x: T, y: T) -> Result<(T, T)> {
        check_unit_half_open("x", x)?;
        check_unit_closed("y", y)?;
        Ok(self.step(x, y))
    }

    /// Single step without domain checks. At x = a the convention f(a) = 0
    /// applies together with the left-hand fibre action.
    pub(crate) fn step(&self, x: T, y: T) -> (T, T) {
        let w = self.factor.step(x);
        let p = self.factor.cut().phi_unchecked(w);
        if x <= self.factor.a() {
            (w, p * y)
        } else {
            (w, y + p * (T::one() - y))
        }
    }

    /// Bⁿ(x, y) by composing single steps; the first coordinate is exactly
    /// the factor orbit.
    pub fn iterate(&self, x: T, y: T, n: usize) -> Result<(T, T)> {
        check_unit_half_open("x", x)?;
        check_unit_closed("y", y)?;
        let mut cur = (x, y);
        for _ in 0..n {
            cur = self.step(cur.0, cur.1);
        }
        Ok(cur)
    }

    /// The 2×2 Jacobian DB(x, y), lower triangular with unit determinant:
    /// diag(1/φ(f x), φ(f x)) with lower entry φ′(f x)·y/φ(f x) on the left
    /// branch, and the mirrored form with 1 − φ on the right branch.
    pub fn jacobian(&self, x: T, y: T) -> Result<[[T; 2]; 2]> {
        if !(x > T::zero() && x < T::one()) || x == self.factor.a() {
            return Err(Error::Domain {
                name: "x",
                value: x.as_f64(),
                domain: "(0, 1) minus the cut point",
            });
        }
        if !(y > T::zero() && y < T::one()) {
            return Err(Error::Domain {
                name: "y",
                value: y.as_f64(),
                domain: "(0, 1)",
            });
        }
        let w = self.factor.step(x);
        let p = self.factor.cut().phi_unchecked(w);
        let dp = self.factor.cut().phi_prime(w)?.value;
        if x < self.factor.a() {
            Ok([[p.recip(), T::zero()], [dp * y / p, p]])
        } else {
            let q = T::one() - p;
            Ok([[q.recip(), T::zero()], [dp * (T::one() - y) / q, q]])
        }
    }

    /// ∂y gₙ(x, ·) = Π φ̃(fᵏx) over k < n: the width of the image of the
    /// fibre over x after n steps.
    pub fn fibre_contraction(&self, x: T, n: usize) -> Result<T> {
        check_unit_half_open("x", x)?;
        let a = self.factor.a();
        let mut cur = x;
        let mut product = T::one();
        for _ in 0..n {
            let w = self.factor.step(cur);
            let p = self.factor.cut().phi_unchecked(w);
            product *= if cur <= a { p } else { T::one() - p };
            cur = w;
        }
        Ok(product)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::CutFunction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn classical() -> BakerMap<f64> {
        BakerMap::new(ExpandingMap::new(CutFunction::constant(0.5).unwrap()))
    }

    fn linear() -> BakerMap<f64> {
        BakerMap::new(ExpandingMap::new(CutFunction::linear()))
    }

    fn sym2() -> BakerMap<f64> {
        BakerMap::new(ExpandingMap::new(CutFunction::symmetric_power(2.0).unwrap()))
    }

    /// The skew recursion gₙ(x, y) = φ(fⁿx)·gₙ₋₁ left of the cut,
    /// φ(fⁿx) + (1 − φ(fⁿx))·gₙ₋₁ right of it — evaluated directly as an
    /// oracle for `iterate`.
    fn g_n_by_recursion(bk: &BakerMap<f64>, x: f64, y: f64, n: usize) -> f64 {
        let orbit = bk.factor().orbit(x, n).unwrap();
        let mut g = y;
        for k in 1..=n {
            let p = bk.factor().cut().phi(orbit[k]).unwrap();
            g = if orbit[k - 1] <= bk.factor().a() {
                p * g
            } else {
                p + (1.0 - p) * g
            };
        }
        g
    }

    #[test]
    fn classical_point_values() {
        let b = classical();
        let (x, y) = b.forward(0.3, 0.4).unwrap();
        assert!((x - 0.6).abs() < 1e-12 && (y - 0.2).abs() < 1e-12);
        let (x, y) = b.forward(0.7, 0.4).unwrap();
        assert!((x - 0.4).abs() < 1e-12 && (y - 0.7).abs() < 1e-12);
        let (x, y) = b.iterate(0.3, 0.4, 2).unwrap();
        assert!((x - 0.2).abs() < 1e-12 && (y - 0.6).abs() < 1e-12);
        assert_eq!(b.iterate(0.3, 0.4, 0).unwrap(), (0.3, 0.4));
    }

    #[test]
    fn linear_cut_fibre_action() {
        let b = linear();
        let (x, y) = b.forward(0.375, 1.0).unwrap();
        assert!((x - 0.5).abs() < 1e-11 && (y - 0.5).abs() < 1e-11);
        // output sits below the graph left of the cut, above it right of it
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let x: f64 = rng.gen();
            let y: f64 = rng.gen();
            let (w, g) = b.forward(x, y).unwrap();
            let p = b.factor().cut().phi(w).unwrap();
            if x <= 0.5 {
                assert!(g <= p + 1e-12);
            } else {
                assert!(g >= p - 1e-12);
            }
        }
    }

    #[test]
    fn period_two_base_orbit() {
        let b = linear();
        let x0 = 2f64.sqrt() - 1.0;
        let (x, _) = b.iterate(x0, 0.0, 2).unwrap();
        assert!((x - x0).abs() <= 2.0 * b.factor().root_tol());
    }

    #[test]
    fn iterate_matches_skew_recursion() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for b in [classical(), linear(), sym2()] {
            for _ in 0..50 {
                let x: f64 = rng.gen();
                let y: f64 = rng.gen();
                for n in [1, 2, 7, 20] {
                    let (_, g) = b.iterate(x, y, n).unwrap();
                    let oracle = g_n_by_recursion(&b, x, y, n);
                    assert!((g - oracle).abs() < 1e-12, "n={n} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn semi_conjugacy_is_bitwise() {
        let b = linear();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let x: f64 = rng.gen();
            let y: f64 = rng.gen();
            let orbit = b.factor().orbit(x, 40).unwrap();
            for (n, &ox) in orbit.iter().enumerate() {
                assert_eq!(b.iterate(x, y, n).unwrap().0, ox);
            }
        }
    }

    #[test]
    fn jacobian_values_and_determinant() {
        let b = classical();
        let j = b.jacobian(0.3, 0.4).unwrap();
        assert_eq!(j, [[2.0, 0.0], [0.0, 0.5]]);
        let b = linear();
        let j = b.jacobian(0.375, 0.2).unwrap();
        assert!((j[0][0] - 2.0).abs() < 1e-10);
        assert!((j[1][0] - (-0.4)).abs() < 1e-10);
        assert!((j[1][1] - 0.5).abs() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for b in [linear(), sym2()] {
            for _ in 0..1000 {
                let x: f64 = rng.gen();
                let y: f64 = rng.gen();
                if x == 0.0 || x == b.factor().a() || y == 0.0 {
                    continue;
                }
                let j = b.jacobian(x, y).unwrap();
                let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
                assert!((det - 1.0).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn fibre_contraction_values() {
        let b = classical();
        assert!((b.fibre_contraction(0.37, 3).unwrap() - 0.125).abs() < 1e-12);
        let b = linear();
        assert!((b.fibre_contraction(0.375, 1).unwrap() - 0.5).abs() < 1e-11);
        // weak contraction near the neutral point
        assert!(b.fibre_contraction(1e-6, 5).unwrap() > 0.99);
    }

    #[test]
    fn fibre_contraction_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for b in [linear(), sym2()] {
            for _ in 0..100 {
                let x: f64 = rng.gen();
                let n = rng.gen_range(1..=50);
                let (_, g1) = b.iterate(x, 1.0, n).unwrap();
                let (_, g0) = b.iterate(x, 0.0, n).unwrap();
                let width = (g1 - g0).abs();
                let contraction = b.fibre_contraction(x, n).unwrap();
                assert!((width - contraction).abs() <= 1e-10, "x={x} n={n}");
            }
        }
    }

    #[test]
    fn fibres_map_increasingly() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let b = linear();
        for _ in 0..500 {
            let x: f64 = rng.gen();
            let mut y1: f64 = rng.gen();
            let mut y2: f64 = rng.gen();
            if y1 > y2 {
                std::mem::swap(&mut y1, &mut y2);
            }
            if y2 - y1 < 1e-6 {
                continue;
            }
            let n = rng.gen_range(1..=20);
            let g1 = b.iterate(x, y1, n).unwrap().1;
            let g2 = b.iterate(x, y2, n).unwrap().1;
            assert!(g1 < g2);
        }
    }

    #[test]
    fn area_preservation_histogram() {
        // push 10^6 uniform points through one application of B and compare
        // cell masses on a 32×32 grid against the uniform law
        let b = linear();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let n = 1_000_000usize;
        let mut counts = vec![0u32; 32 * 32];
        for _ in 0..n {
            let x: f64 = rng.gen();
            let y: f64 = rng.gen();
            let (u, v) = b.step(x, y);
            let i = ((u * 32.0) as usize).min(31);
            let j = ((v * 32.0) as usize).min(31);
            counts[i * 32 + j] += 1;
        }
        let p = 1.0 / 1024.0;
        let expected = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        for (cell, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expected).abs() <= 5.0 * sd,
                "cell {cell}: {c} vs {expected:.1} ± {sd:.1}"
            );
        }
    }

    #[test]
    fn domain_errors() {
        let b = linear();
        assert!(b.forward(1.0, 0.5).is_err());
        assert!(b.forward(0.5, 1.5).is_err());
        assert!(b.jacobian(0.5, 0.5).is_err()); // the cut line
        assert!(b.jacobian(0.3, 0.0).is_err());
    }
}
