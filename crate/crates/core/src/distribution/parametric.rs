use std::f64::consts::{PI, SQRT_2};

use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_level, Distribution, FloatSampler};
use crate::error::{Error, Result};
use crate::scalar::ExtendedReal;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Uniform { a: f64, b: f64 },
    Normal { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
    LogNormal { mu: f64, sigma: f64 },
}

/// Continuous parametric distribution, strictly increasing on its support.
///
/// Flatness and continuity come from family metadata, never from scanning
/// the CDF numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricDistribution {
    family: Family,
}

impl ParametricDistribution {
    pub fn new(family: Family) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidDistribution(m.to_string()));
        let all_finite = match family {
            Family::Uniform { a, b } => a.is_finite() && b.is_finite(),
            Family::Normal { mu, sigma } | Family::LogNormal { mu, sigma } => {
                mu.is_finite() && sigma.is_finite()
            }
            Family::Exponential { rate } => rate.is_finite(),
        };
        if !all_finite {
            return bad("non-finite parameter");
        }
        match family {
            Family::Uniform { a, b } if a >= b => bad("uniform needs a < b"),
            Family::Normal { sigma, .. } | Family::LogNormal { sigma, .. } if sigma <= 0.0 => {
                bad("sigma must be positive")
            }
            Family::Exponential { rate } if rate <= 0.0 => bad("rate must be positive"),
            _ => Ok(ParametricDistribution { family }),
        }
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::Uniform { a, b })
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Normal { mu, sigma })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::LogNormal { mu, sigma })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Every supported family is strictly increasing on its support.
    pub fn strictly_increasing(&self) -> bool {
        true
    }

    /// Density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        let gauss = |z: f64, sigma: f64| (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt());
        match self.family {
            Family::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            Family::Normal { mu, sigma } => gauss((x - mu) / sigma, sigma),
            Family::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Family::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    gauss((x.ln() - mu) / sigma, sigma) / x
                }
            }
        }
    }

    fn inner_cdf(&self, x: f64) -> f64 {
        match self.family {
            Family::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Family::Normal { mu, sigma } => std_normal_cdf((x - mu) / sigma),
            Family::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Family::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    std_normal_cdf((x.ln() - mu) / sigma)
                }
            }
        }
    }

    /// Analytic inverse on the open interval `(0, 1)`.
    fn inner_inverse(&self, p: f64) -> f64 {
        match self.family {
            Family::Uniform { a, b } => a + p * (b - a),
            Family::Normal { mu, sigma } => {
                Normal::new(mu, sigma).expect("validated").inverse_cdf(p)
            }
            Family::Exponential { rate } => -(-p).ln_1p() / rate,
            Family::LogNormal { mu, sigma } => {
                let z = Normal::new(mu, sigma).expect("validated").inverse_cdf(p);
                z.exp()
            }
        }
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

impl Distribution for ParametricDistribution {
    type Scalar = f64;

    fn cdf(&self, x: &f64) -> f64 {
        self.inner_cdf(*x)
    }

    fn cdf_left_limit(&self, x: &f64) -> f64 {
        self.inner_cdf(*x)
    }

    fn quantile(&self, p: &f64) -> Result<ExtendedReal<f64>> {
        check_level(p)?;
        let p = *p;
        if p == 0.0 {
            return Ok(ExtendedReal::NegInf);
        }
        if p == 1.0 {
            return Ok(self.support_bounds().1);
        }
        Ok(ExtendedReal::Finite(self.inner_inverse(p)))
    }

    fn is_continuous_at(&self, _x: &f64) -> bool {
        true
    }

    fn flat_left_witness(&self, x: &f64) -> Option<f64> {
        let (lo, hi) = self.support_bounds();
        if let ExtendedReal::Finite(lo) = lo {
            if *x <= lo {
                return Some(x - 1.0);
            }
        }
        if let ExtendedReal::Finite(hi) = hi {
            if *x > hi {
                return Some(hi);
            }
        }
        None
    }

    fn support_bounds(&self) -> (ExtendedReal<f64>, ExtendedReal<f64>) {
        use ExtendedReal::*;
        match self.family {
            Family::Uniform { a, b } => (Finite(a), Finite(b)),
            Family::Normal { .. } => (NegInf, PosInf),
            Family::Exponential { .. } | Family::LogNormal { .. } => (Finite(0.0), PosInf),
        }
    }

    fn quantile_kinks(&self) -> Option<Vec<f64>> {
        None
    }

    fn float_sampler(&self) -> Result<FloatSampler> {
        Ok(FloatSampler::Parametric(self.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_validation() {
        assert!(ParametricDistribution::normal(0.0, 0.0).is_err());
        assert!(ParametricDistribution::lognormal(0.0, -1.0).is_err());
        assert!(ParametricDistribution::exponential(0.0).is_err());
        assert!(ParametricDistribution::uniform(1.0, 1.0).is_err());
        assert!(ParametricDistribution::normal(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn uniform_queries() {
        let u = ParametricDistribution::uniform(0.0, 1.0).unwrap();
        assert_eq!(u.quantile(&0.5).unwrap(), ExtendedReal::Finite(0.5));
        assert_eq!(u.quantile(&0.0).unwrap(), ExtendedReal::NegInf);
        assert_eq!(u.quantile(&1.0).unwrap(), ExtendedReal::Finite(1.0));
        assert!(u.quantile(&1.5).is_err());
        assert_eq!(u.flat_left_of(&0.5), (false, None));
        assert_eq!(u.flat_left_of(&2.0), (true, Some(1.0)));
        let u12 = ParametricDistribution::uniform(1.0, 2.0).unwrap();
        assert_eq!(u12.flat_left_of(&1.0), (true, Some(0.0)));
    }

    #[test]
    fn support_bounds_by_family() {
        let n = ParametricDistribution::normal(0.0, 1.0).unwrap();
        assert_eq!(
            n.support_bounds(),
            (ExtendedReal::NegInf, ExtendedReal::PosInf)
        );
        assert_eq!(n.quantile(&1.0).unwrap(), ExtendedReal::PosInf);
        let e = ParametricDistribution::exponential(2.0).unwrap();
        assert_eq!(
            e.support_bounds(),
            (ExtendedReal::Finite(0.0), ExtendedReal::PosInf)
        );
        assert_eq!(e.flat_left_of(&0.0), (true, Some(-1.0)));
        assert_eq!(e.flat_left_of(&0.1), (false, None));
    }

    #[test]
    fn inverse_matches_cdf() {
        let families = [
            ParametricDistribution::normal(1.0, 2.0).unwrap(),
            ParametricDistribution::exponential(0.5).unwrap(),
            ParametricDistribution::lognormal(0.2, 0.7).unwrap(),
            ParametricDistribution::uniform(-3.0, 5.0).unwrap(),
        ];
        for d in &families {
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let x = d.quantile(&p).unwrap().to_f64();
                assert!((d.cdf(&x) - p).abs() < 1e-13, "{d:?} at {p}");
            }
        }
    }

    #[test]
    fn normal_reference_values() {
        let n = ParametricDistribution::normal(0.0, 1.0).unwrap();
        assert!((n.cdf(&1.959963984540054) - 0.975).abs() < 1e-15);
        assert!((n.quantile(&0.975).unwrap().to_f64() - 1.959963984540054).abs() < 1e-12);
        assert!((n.density(0.0) - 0.3989422804014327).abs() < 1e-15);
    }
}
