use super::{Distribution, FloatSampler, ParametricDistribution, PiecewiseDistribution};
use crate::error::Result;
use crate::scalar::ExtendedReal;

/// Either class viewed over doubles, for mixed piecewise/parametric pairs.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyDistribution {
    Piecewise(PiecewiseDistribution<f64>),
    Parametric(ParametricDistribution),
}

macro_rules! delegate {
    ($self:ident, $d:ident => $e:expr) => {
        match $self {
            AnyDistribution::Piecewise($d) => $e,
            AnyDistribution::Parametric($d) => $e,
        }
    };
}

impl Distribution for AnyDistribution {
    type Scalar = f64;

    fn cdf(&self, x: &f64) -> f64 {
        delegate!(self, d => d.cdf(x))
    }

    fn cdf_left_limit(&self, x: &f64) -> f64 {
        delegate!(self, d => d.cdf_left_limit(x))
    }

    fn quantile(&self, p: &f64) -> Result<ExtendedReal<f64>> {
        delegate!(self, d => d.quantile(p))
    }

    fn is_continuous_at(&self, x: &f64) -> bool {
        delegate!(self, d => d.is_continuous_at(x))
    }

    fn flat_left_witness(&self, x: &f64) -> Option<f64> {
        delegate!(self, d => d.flat_left_witness(x))
    }

    fn support_bounds(&self) -> (ExtendedReal<f64>, ExtendedReal<f64>) {
        delegate!(self, d => d.support_bounds())
    }

    fn quantile_kinks(&self) -> Option<Vec<f64>> {
        delegate!(self, d => d.quantile_kinks())
    }

    fn float_sampler(&self) -> Result<FloatSampler> {
        delegate!(self, d => d.float_sampler())
    }
}
