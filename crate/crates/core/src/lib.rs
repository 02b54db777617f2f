//! Generalized baker's transformations and their mixing diagnostics.
//!
//! A decreasing *cut function* φ: [0,1] → [0,1] slices the unit square along
//! its graph. The area-preserving baker's map `B` sends the vertical strip
//! left of `a = ∫φ` onto the region below the graph and the right strip onto
//! the region above it, contracting every vertical fibre affinely. The
//! induced action on the x-coordinate is an expanding two-branch interval
//! map `f` with indifferent fixed points at 0 and 1; the tangency exponents
//! of φ at the corners set the strength of those fixed points and hence the
//! polynomial rate at which correlations decay.
//!
//! The crate provides:
//!
//! * [`cut`] — the cut-function family with exact antiderivatives,
//! * [`map1d`] — the expanding factor `f` (implicit forward map, closed-form
//!   branch inverses),
//! * [`baker`] — the two-dimensional map `B`, its Jacobian and fibre
//!   contraction,
//! * [`tower`] — the first-return partition over the period-2 base interval,
//!   with interval asymptotics, tail masses and distortion statistics,
//! * [`ulam`] — an exact-preimage Ulam discretization of the transfer
//!   operator,
//! * [`correlation`] — correlation estimators (1-D and Monte Carlo 2-D),
//!   the fibre-projection identity and the sharp lower-bound chain,
//! * [`fit`] — log-log power-law fitting for decay series.
//!
//! All numeric kernels are generic over the scalar type through
//! [`scalar::Real`]; the aliases at the crate root pin the common `f64`
//! instantiation.

pub mod baker;
pub mod correlation;
pub mod cut;
pub mod error;
pub mod fit;
pub mod map1d;
pub(crate) mod roots;
pub mod scalar;
pub mod tower;
pub mod ulam;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` cut function.
pub type CutFunction64 = cut::CutFunction<f64>;
/// `f64` expanding factor.
pub type ExpandingMap64 = map1d::ExpandingMap<f64>;
/// `f64` baker's map.
pub type BakerMap64 = baker::BakerMap<f64>;
/// `f64` tower partition.
pub type TowerPartition64 = tower::TowerPartition<f64>;
/// `f64` Ulam matrix.
pub type UlamMatrix64 = ulam::UlamMatrix<f64>;
/// `f64` decay series.
pub type DecaySeries64 = fit::DecaySeries<f64>;
