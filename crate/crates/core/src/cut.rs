//! Cut functions: decreasing profiles of [0,1] whose graph slices the unit
//! square.
//!
//! Every non-constant member satisfies φ(0) = 1, φ(1) = 0 and carries two
//! boundary expansions, φ(t) = 1 − c₀ tᵅ near 0 and φ(1−t) = c₁ t^α′ near 1.
//! The exponents α and α′ are what the downstream tower and decay estimators
//! read off: they fix the contact order of the induced interval map at its
//! indifferent fixed points.

use crate::error::{check_unit_closed, Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Absolute tolerance of the adaptive quadrature backing tabulated cuts.
/// Tighter than the downstream root-finder tolerance by an order of
/// magnitude so implicit solves are not limited by the antiderivative.
const QUAD_TOL: f64 = 1e-13;

/// First derivative of a cut function at a point.
///
/// `one_sided` marks junction points of piecewise kinds where the two sides
/// disagree; the reported value is then the left-hand derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiDerivative<T> {
    pub value: T,
    pub one_sided: bool,
}

/// Tabulated decreasing profile, linearly interpolated between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomCut<T> {
    knots: Vec<(T, T)>,
}

impl<T: Real> CustomCut<T> {
    fn value(&self, t: T) -> T {
        let i = self.knots.partition_point(|&(k, _)| k <= t);
        if i == 0 {
            return self.knots[0].1;
        }
        if i == self.knots.len() {
            return self.knots[self.knots.len() - 1].1;
        }
        let (t0, v0) = self.knots[i - 1];
        let (t1, v1) = self.knots[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    fn slope_left_of(&self, i: usize) -> T {
        let (t0, v0) = self.knots[i - 1];
        let (t1, v1) = self.knots[i];
        (v1 - v0) / (t1 - t0)
    }

    pub fn knots(&self) -> &[(T, T)] {
        &self.knots
    }
}

/// The built-in cut family.
#[derive(Debug, Clone, PartialEq)]
pub enum CutKind<T> {
    /// φ ≡ c. The classical baker's map corresponds to c = 1/2.
    Constant(T),
    /// φ(t) = 1 − t.
    Linear,
    /// φ(t) = 1 − 2^(α−1) tᵅ on [0, 1/2], mirrored as 2^(α−1)(1−t)ᵅ above.
    SymmetricPower(T),
    /// Independent boundary exponents; the two power pieces glue at t = 1/2
    /// with value 1/2 (continuous, with a kink unless α = α′).
    AsymmetricPower(T, T),
    /// Tabulated decreasing profile.
    Custom(CustomCut<T>),
}

/// A decreasing cut function together with its boundary expansion data.
///
/// Immutable after construction; all evaluations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct CutFunction<T> {
    kind: CutKind<T>,
    alpha: T,
    alpha_prime: T,
    c0: T,
    c1: T,
    symmetric: bool,
    area: T,
}

impl<T: Real> CutFunction<T> {
    /// φ(t) = 1 − t (both boundary exponents 1).
    pub fn linear() -> Self {
        CutFunction {
            kind: CutKind::Linear,
            alpha: T::one(),
            alpha_prime: T::one(),
            c0: T::one(),
            c1: T::one(),
            symmetric: true,
            area: T::half(),
        }
    }

    /// Constant profile φ ≡ c, 0 < c < 1.
    ///
    /// Violates φ(0) = 1, so the boundary exponent fields are nominal;
    /// tower and decay operations reject constant cuts.
    pub fn constant(c: T) -> Result<Self> {
        if !(c > T::zero() && c < T::one()) {
            return Err(Error::Domain {
                name: "c",
                value: c.as_f64(),
                domain: "(0, 1)",
            });
        }
        Ok(CutFunction {
            kind: CutKind::Constant(c),
            alpha: T::one(),
            alpha_prime: T::one(),
            c0: T::one(),
            c1: T::one(),
            symmetric: c == T::half(),
            area: c,
        })
    }

    /// Symmetric power profile with exponent α at both corners.
    pub fn symmetric_power(alpha: T) -> Result<Self> {
        check_exponent("alpha", alpha)?;
        let c = T::two().powf(alpha - T::one());
        Ok(CutFunction {
            kind: CutKind::SymmetricPower(alpha),
            alpha,
            alpha_prime: alpha,
            c0: c,
            c1: c,
            symmetric: true,
            area: T::half(),
        })
    }

    /// Power profile with independent corner exponents:
    /// φ(t) = 1 − 2^(α−1) tᵅ on [0, 1/2] and φ(t) = 2^(α′−1)(1−t)^α′ on
    /// [1/2, 1]. Both pieces hit 1/2 at the junction, so φ is continuous and
    /// strictly decreasing, with boundary coefficients c₀ = 2^(α−1),
    /// c₁ = 2^(α′−1).
    pub fn asymmetric_power(alpha: T, alpha_prime: T) -> Result<Self> {
        check_exponent("alpha", alpha)?;
        check_exponent("alpha_prime", alpha_prime)?;
        let c0 = T::two().powf(alpha - T::one());
        let c1 = T::two().powf(alpha_prime - T::one());
        let symmetric = alpha == alpha_prime;
        let quarter = T::of(0.25);
        let area = if symmetric {
            T::half()
        } else {
            // a = 1/2 − 1/(4(α+1)) + 1/(4(α′+1))
            T::half() - quarter / (alpha + T::one()) + quarter / (alpha_prime + T::one())
        };
        Ok(CutFunction {
            kind: CutKind::AsymmetricPower(alpha, alpha_prime),
            alpha,
            alpha_prime,
            c0,
            c1,
            symmetric,
            area,
        })
    }

    /// Tabulated decreasing profile, linearly interpolated. Knots must run
    /// from (0, 1) to (1, 0) with strictly increasing abscissae and
    /// non-increasing values. `alpha`/`alpha_prime` are the caller-declared
    /// boundary orders; they only feed reported expectations, the table is
    /// not checked against them.
    pub fn custom(knots: Vec<(T, T)>, alpha: T, alpha_prime: T) -> Result<Self> {
        check_exponent("alpha", alpha)?;
        check_exponent("alpha_prime", alpha_prime)?;
        if knots.len() < 2 {
            return Err(Error::InvalidConfig("custom cut needs at least two knots".into()));
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if first.0 != T::zero() || last.0 != T::one() {
            return Err(Error::InvalidConfig(
                "custom cut knots must span [0, 1]".into(),
            ));
        }
        if first.1 != T::one() || last.1 != T::zero() {
            return Err(Error::InvalidConfig(
                "custom cut must satisfy phi(0) = 1 and phi(1) = 0".into(),
            ));
        }
        for pair in knots.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::InvalidConfig(
                    "custom cut knot abscissae must be strictly increasing".into(),
                ));
            }
            if pair[1].1 > pair[0].1 {
                return Err(Error::InvalidConfig(
                    "custom cut values must be non-increasing".into(),
                ));
            }
        }
        if knots.iter().any(|&(_, v)| v < T::zero() || v > T::one()) {
            return Err(Error::InvalidConfig(
                "custom cut values must lie in [0, 1]".into(),
            ));
        }
        let table = CustomCut { knots };
        // Reflection test on the knots decides the symmetry flag.
        let tol = T::of(1e-12);
        let symmetric = table
            .knots
            .iter()
            .all(|&(t, v)| ((T::one() - v) - table.value(T::one() - t)).abs() <= tol);
        let quad = |a: T, b: T| adaptive_simpson(&|t| table.value(t), a, b, T::of(QUAD_TOL));
        let area = quad(T::zero(), T::one());
        Ok(CutFunction {
            kind: CutKind::Custom(table),
            alpha,
            alpha_prime,
            c0: T::one(),
            c1: T::one(),
            symmetric,
            area,
        })
    }

    pub fn kind(&self) -> &CutKind<T> {
        &self.kind
    }

    /// Hyperbolicity exponent at t = 0.
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Hyperbolicity exponent at t = 1.
    pub fn alpha_prime(&self) -> T {
        self.alpha_prime
    }

    /// Leading coefficient of the expansion at t = 0.
    pub fn c0(&self) -> T {
        self.c0
    }

    /// Leading coefficient of the expansion at t = 1.
    pub fn c1(&self) -> T {
        self.c1
    }

    /// Whether 1 − φ(t) = φ(1−t) holds.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, CutKind::Constant(_))
    }

    /// max{α, α′}; the decay exponent of the associated maps is −1/γ.
    pub fn gamma(&self) -> T {
        self.alpha.max(self.alpha_prime)
    }

    /// a = ∫₀¹ φ, the cut abscissa of the induced interval map.
    pub fn area(&self) -> T {
        self.area
    }

    /// φ(t) for t ∈ [0, 1].
    pub fn phi(&self, t: T) -> Result<T> {
        check_unit_closed("t", t)?;
        Ok(self.phi_unchecked(t))
    }

    pub(crate) fn phi_unchecked(&self, t: T) -> T {
        match &self.kind {
            CutKind::Constant(c) => *c,
            CutKind::Linear => T::one() - t,
            CutKind::SymmetricPower(_) | CutKind::AsymmetricPower(..) => {
                if t <= T::half() {
                    T::one() - self.c0 * t.powf(self.alpha)
                } else {
                    self.c1 * (T::one() - t).powf(self.alpha_prime)
                }
            }
            CutKind::Custom(table) => table.value(t),
        }
    }

    /// Φ(t) = ∫₀ᵗ φ(s) ds, in closed form for the built-in kinds and by
    /// adaptive quadrature for tabulated ones. Φ(1) = `area()` bit-exactly.
    pub fn antiderivative(&self, t: T) -> Result<T> {
        check_unit_closed("t", t)?;
        Ok(self.antiderivative_unchecked(t))
    }

    pub(crate) fn antiderivative_unchecked(&self, t: T) -> T {
        match &self.kind {
            CutKind::Constant(c) => *c * t,
            CutKind::Linear => t - t * t * T::half(),
            CutKind::SymmetricPower(_) | CutKind::AsymmetricPower(..) => {
                if t <= T::half() {
                    let e = self.alpha + T::one();
                    t - self.c0 * t.powf(e) / e
                } else {
                    let e = self.alpha_prime + T::one();
                    self.area - self.c1 * (T::one() - t).powf(e) / e
                }
            }
            CutKind::Custom(table) => {
                adaptive_simpson(&|s| table.value(s), T::zero(), t, T::of(QUAD_TOL))
            }
        }
    }

    /// ∫₀ˣ (1 − φ(s)) ds = x − Φ(x), evaluated without cancellation for the
    /// built-in kinds. This is the width eaten off the left branch inverse,
    /// the quantity that drives the deep tower levels.
    pub(crate) fn complement_integral(&self, x: T) -> T {
        match &self.kind {
            CutKind::Constant(c) => (T::one() - *c) * x,
            CutKind::Linear => x * x * T::half(),
            CutKind::SymmetricPower(_) | CutKind::AsymmetricPower(..) => {
                if x <= T::half() {
                    let e = self.alpha + T::one();
                    self.c0 * x.powf(e) / e
                } else {
                    x - self.antiderivative_unchecked(x)
                }
            }
            CutKind::Custom(_) => x - self.antiderivative_unchecked(x),
        }
    }

    /// ∫₁₋ᵥ¹ φ(s) ds, the mirrored companion of [`Self::complement_integral`];
    /// exact near t = 1 where Φ itself would cancel.
    pub(crate) fn tail_integral(&self, v: T) -> T {
        match &self.kind {
            CutKind::Constant(c) => *c * v,
            CutKind::Linear => v * v * T::half(),
            CutKind::SymmetricPower(_) | CutKind::AsymmetricPower(..) => {
                if v <= T::half() {
                    let e = self.alpha_prime + T::one();
                    self.c1 * v.powf(e) / e
                } else {
                    self.area - self.antiderivative_unchecked(T::one() - v)
                }
            }
            CutKind::Custom(_) => self.area - self.antiderivative_unchecked(T::one() - v),
        }
    }

    /// φ′(t). Errors where the derivative diverges (t = 0 with α < 1,
    /// t = 1 with α′ < 1); flags junctions of piecewise kinds.
    pub fn phi_prime(&self, t: T) -> Result<PhiDerivative<T>> {
        check_unit_closed("t", t)?;
        let ok = |value| Ok(PhiDerivative { value, one_sided: false });
        match &self.kind {
            CutKind::Constant(_) => ok(T::zero()),
            CutKind::Linear => ok(-T::one()),
            CutKind::SymmetricPower(_) | CutKind::AsymmetricPower(..) => {
                if t == T::zero() && self.alpha < T::one() {
                    return Err(Error::DerivativeDiverges { at: 0.0 });
                }
                if t == T::one() && self.alpha_prime < T::one() {
                    return Err(Error::DerivativeDiverges { at: 1.0 });
                }
                let left = |cut: &Self| -cut.c0 * cut.alpha * t.powf(cut.alpha - T::one());
                let right = |cut: &Self| {
                    -cut.c1 * cut.alpha_prime * (T::one() - t).powf(cut.alpha_prime - T::one())
                };
                if t < T::half() {
                    ok(left(self))
                } else if t > T::half() {
                    ok(right(self))
                } else {
                    // Both one-sided slopes at the junction are −α resp. −α′.
                    let l = left(self);
                    let r = right(self);
                    Ok(PhiDerivative {
                        value: l,
                        one_sided: l != r,
                    })
                }
            }
            CutKind::Custom(table) => {
                let i = table.knots.partition_point(|&(k, _)| k < t);
                if i < table.knots.len() && table.knots[i].0 == t {
                    // On a knot: interior knots are junctions, ends are one-sided.
                    if i == 0 {
                        return Ok(PhiDerivative {
                            value: table.slope_left_of(1),
                            one_sided: true,
                        });
                    }
                    let l = table.slope_left_of(i);
                    if i == table.knots.len() - 1 {
                        return Ok(PhiDerivative { value: l, one_sided: true });
                    }
                    let r = table.slope_left_of(i + 1);
                    return Ok(PhiDerivative { value: l, one_sided: l != r });
                }
                ok(table.slope_left_of(i))
            }
        }
    }
}

fn check_exponent<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "field {name} must be a positive real, got {v}"
        )))
    }
}

/// Adaptive Simpson quadrature with Richardson acceptance.
fn adaptive_simpson<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, tol: T) -> T {
    fn simpson<T: Real>(f: &impl Fn(T) -> T, a: T, fa: T, b: T, fb: T) -> (T, T, T) {
        let m = (a + b) * T::half();
        let fm = f(m);
        let s = (b - a) / T::of(6.0) * (fa + T::of(4.0) * fm + fb);
        (m, fm, s)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<T: Real>(
        f: &impl Fn(T) -> T,
        a: T,
        fa: T,
        b: T,
        fb: T,
        whole: T,
        m: T,
        fm: T,
        tol: T,
        depth: u32,
    ) -> T {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= T::of(15.0) * tol {
            return left + right + delta / T::of(15.0);
        }
        let half_tol = tol * T::half();
        recurse(f, a, fa, m, fm, left, lm, flm, half_tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, half_tol, depth - 1)
    }
    if a == b {
        return T::zero();
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Serializable construction record for a cut function.
///
/// This is what experiment configs carry and what gets echoed verbatim into
/// JSON summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutConfig {
    pub kind: String,
    #[serde(default = "default_exponent")]
    pub alpha: f64,
    #[serde(default = "default_exponent")]
    pub alpha_prime: f64,
}

fn default_exponent() -> f64 {
    1.0
}

impl CutConfig {
    pub fn new(kind: &str, alpha: f64, alpha_prime: f64) -> Self {
        CutConfig {
            kind: kind.to_string(),
            alpha,
            alpha_prime,
        }
    }

    pub fn build<T: Real>(&self) -> Result<CutFunction<T>> {
        match self.kind.as_str() {
            "linear" => Ok(CutFunction::linear()),
            "constant" => CutFunction::constant(T::half()),
            "symmetric-power" => CutFunction::symmetric_power(T::of(self.alpha)),
            "asymmetric-power" => {
                CutFunction::asymmetric_power(T::of(self.alpha), T::of(self.alpha_prime))
            }
            other => Err(Error::InvalidConfig(format!(
                "field kind: unknown cut kind `{other}` \
                 (expected linear | constant | symmetric-power | asymmetric-power)"
            ))),
        }
    }
}

impl<T: Real> CutFunction<T> {
    /// Construction record matching this cut, for serialization.
    pub fn config(&self) -> CutConfig {
        let kind = match &self.kind {
            CutKind::Constant(_) => "constant",
            CutKind::Linear => "linear",
            CutKind::SymmetricPower(_) => "symmetric-power",
            CutKind::AsymmetricPower(..) => "asymmetric-power",
            CutKind::Custom(_) => "custom",
        };
        CutConfig::new(kind, self.alpha.as_f64(), self.alpha_prime.as_f64())
    }
}
