//! Numeric abstractions shared by the graph, the solver and the similarity code.
//!
//! Edge scores and costs only need ring operations and an order, so the graph
//! and the Steiner tree solver are generic over [`Scalar`]. That admits exact
//! rationals (`num_rational::Ratio<i64>`) next to `f32`/`f64`, which the
//! exactness tests rely on. Cosine similarity needs square roots and is
//! generic over [`Real`] instead.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| panic!("{x} is not representable"))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| panic!("{n} is not representable"))
    }

    /// Total order for values already known to be comparable (no NaN).
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn is_comparable(&self) -> bool {
        self.partial_cmp(self).is_some()
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Map into `[0, 1]`.
    fn clamp_unit(self) -> Self {
        self.max_of(Self::zero()).min_of(Self::one())
    }

    fn in_unit_interval(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

impl<T> Scalar for T where
    T: Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Floating point types that can also be parsed from embedding files.
pub trait Real: Float + Scalar + FromStr {}

impl<T> Real for T where T: Float + Scalar + FromStr {}

/// Sum in the given order. Callers pass costs in a canonical order so that
/// floating point totals are reproducible.
pub fn sum<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().fold(S::zero(), |acc, x| acc + x)
}
