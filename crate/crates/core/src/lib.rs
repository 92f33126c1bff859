//! Exact quantiles of two-component Bernoulli mixtures.
//!
//! A mixture `S = I*X + (1 - I)*Y` with `I ~ Bernoulli(q)` has quantile
//! `s_p = max(F_X^{-1}(alpha*), F_Y^{-1}(beta*))` for a particular split
//! `q*alpha* + (1 - q)*beta* = p` of the level. This crate computes that split
//! exactly for piecewise distributions (atoms plus linear CDF segments over
//! rationals) and to double precision for parametric families, classifies each
//! solved instance by the local shape of both component CDFs at `s_p`, and
//! cross-checks everything against direct inversion, a grid scan and Monte Carlo.

pub mod classifier;
pub mod cli;
pub mod distribution;
pub mod error;
pub mod mixture;
pub mod par;
pub mod scalar;
pub mod split_solver;
pub mod verification;

pub use distribution::{
    AnyDistribution, Distribution, ExactDistribution, ParametricDistribution, PiecewiseDistribution,
};
pub use error::{Error, Result};
pub use mixture::{DirectQuantile, MixtureSpec};
pub use scalar::{ExtendedReal, Rational, Scalar};
pub use split_solver::{theorem_quantile, QuantileSolution};
