//! One-dimensional distributions with exact CDF, left-limit and
//! generalized-inverse queries.
//!
//! All quantiles follow `F^{-1}(p) = inf{x : F(x) >= p}` with `inf(empty) = +inf`
//! and `inf(R) = -inf`, so `quantile` is total on `[0, 1]`.

mod any;
mod parametric;
mod piecewise;

pub use any::AnyDistribution;
pub use parametric::{Family, ParametricDistribution};
pub use piecewise::{ExactDistribution, PiecewiseDistribution, Segment};

use crate::error::{Error, Result};
use crate::scalar::{ExtendedReal, Scalar};

/// Queries every component distribution answers.
///
/// Implementations must satisfy the Galois property
/// `quantile(p) <= x  <=>  p <= cdf(x)` for `p` in `(0, 1)`.
pub trait Distribution: Clone + Send + Sync {
    type Scalar: Scalar;

    /// `P(X <= x)`.
    fn cdf(&self, x: &Self::Scalar) -> Self::Scalar;

    /// `P(X < x)`, the left limit of the CDF at `x`.
    fn cdf_left_limit(&self, x: &Self::Scalar) -> Self::Scalar;

    /// Generalized inverse at level `p` in `[0, 1]`.
    fn quantile(&self, p: &Self::Scalar) -> Result<ExtendedReal<Self::Scalar>>;

    /// `true` iff there is no atom at `x`.
    fn is_continuous_at(&self, x: &Self::Scalar) -> bool;

    /// Some `z < x` with `F(z) = F(x-)`, if one exists.
    fn flat_left_witness(&self, x: &Self::Scalar) -> Option<Self::Scalar>;

    /// Essential infimum and supremum.
    fn support_bounds(&self) -> (ExtendedReal<Self::Scalar>, ExtendedReal<Self::Scalar>);

    /// Levels between which the quantile function is affine, when it is
    /// piecewise affine with finitely many pieces. `None` otherwise.
    fn quantile_kinks(&self) -> Option<Vec<Self::Scalar>>;

    /// A floating-point inverse-transform sampler for this distribution.
    fn float_sampler(&self) -> Result<FloatSampler>;

    /// `(flat, witness)` form of [`Distribution::flat_left_witness`].
    fn flat_left_of(&self, x: &Self::Scalar) -> (bool, Option<Self::Scalar>) {
        let w = self.flat_left_witness(x);
        (w.is_some(), w)
    }
}

/// Inverse-transform sampler over doubles.
#[derive(Clone, Debug)]
pub enum FloatSampler {
    Pieces(PiecewiseDistribution<f64>),
    Parametric(ParametricDistribution),
}

impl FloatSampler {
    /// Maps a uniform draw `u` in `(0, 1)` to a sample.
    pub fn draw(&self, u: f64) -> f64 {
        let q = match self {
            FloatSampler::Pieces(d) => d.quantile(&u),
            FloatSampler::Parametric(d) => d.quantile(&u),
        };
        match q {
            Ok(v) => v.to_f64(),
            Err(_) => f64::NAN,
        }
    }
}

/// Rejects levels outside `[0, 1]`.
pub fn check_level<S: Scalar>(p: &S) -> Result<()> {
    if *p >= S::zero() && *p <= S::one() {
        Ok(())
    } else {
        Err(Error::LevelOutOfRange(p.to_string(), "[0, 1]"))
    }
}

/// Rejects levels outside the open interval `(0, 1)`.
pub fn check_open_level<S: Scalar>(p: &S) -> Result<()> {
    if *p > S::zero() && *p < S::one() {
        Ok(())
    } else {
        Err(Error::LevelOutOfRange(p.to_string(), "(0, 1)"))
    }
}
