//! Two-component Bernoulli mixtures `S = I*X + (1 - I)*Y` with `I ~ Bernoulli(q)`
//! independent of `X` and `Y`.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{
    check_level, check_open_level, AnyDistribution, Distribution, ParametricDistribution,
    PiecewiseDistribution,
};
use crate::error::{Error, Result};
use crate::scalar::{ExtendedReal, Scalar};

/// Mixture weight `q` together with the two components.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureSpec<D: Distribution> {
    q: D::Scalar,
    x: D,
    y: D,
}

impl<D: Distribution> MixtureSpec<D> {
    pub fn new(q: D::Scalar, x: D, y: D) -> Result<Self> {
        check_level(&q).map_err(|_| Error::LevelOutOfRange(q.to_string(), "[0, 1] for q"))?;
        Ok(MixtureSpec { q, x, y })
    }

    pub fn q(&self) -> &D::Scalar {
        &self.q
    }

    pub fn x(&self) -> &D {
        &self.x
    }

    pub fn y(&self) -> &D {
        &self.y
    }

    /// `(1 - q, Y, X)`: the same mixture with the roles of the components exchanged.
    pub fn swapped(&self) -> Self {
        MixtureSpec {
            q: D::Scalar::one() - self.q.clone(),
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    /// `q F(x) + (1 - q) G(x)`.
    pub fn cdf(&self, x: &D::Scalar) -> D::Scalar {
        self.combine(self.x.cdf(x), self.y.cdf(x))
    }

    /// `q F(x-) + (1 - q) G(x-)`.
    pub fn cdf_left_limit(&self, x: &D::Scalar) -> D::Scalar {
        self.combine(self.x.cdf_left_limit(x), self.y.cdf_left_limit(x))
    }

    fn combine(&self, f: D::Scalar, g: D::Scalar) -> D::Scalar {
        self.q.clone() * f + (D::Scalar::one() - self.q.clone()) * g
    }

    /// Hull of both supports.
    pub fn support_bounds(&self) -> (ExtendedReal<D::Scalar>, ExtendedReal<D::Scalar>) {
        let (xl, xh) = self.x.support_bounds();
        let (yl, yh) = self.y.support_bounds();
        let lo = if xl < yl { xl } else { yl };
        (lo, xh.max(yh))
    }

    /// `n` seeded draws of `S`. The same seed always yields the same draws.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "sample size must be at least 1".into(),
            ));
        }
        let fx = self.x.float_sampler()?;
        let fy = self.y.float_sampler()?;
        let q = self.q.to_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n)
            .map(|_| {
                let pick_x = rng.random::<f64>() < q;
                let u: f64 = rng.sample(Open01);
                if pick_x {
                    fx.draw(u)
                } else {
                    fy.draw(u)
                }
            })
            .collect())
    }
}

/// Quantile of `S` by inverting `F_S` directly, without the split formula.
pub trait DirectQuantile {
    type Scalar: Scalar;

    /// `inf{x : q F(x) + (1 - q) G(x) >= p}` for `p` in `(0, 1)`.
    fn direct_quantile(&self, p: &Self::Scalar) -> Result<ExtendedReal<Self::Scalar>>;
}

impl<S: Scalar> MixtureSpec<PiecewiseDistribution<S>> {
    /// The mixture as a single piecewise distribution.
    pub fn merged(&self) -> Result<PiecewiseDistribution<S>> {
        PiecewiseDistribution::weighted_sum(&[
            (self.q.clone(), &self.x),
            (S::one() - self.q.clone(), &self.y),
        ])
    }
}

impl<S: Scalar> DirectQuantile for MixtureSpec<PiecewiseDistribution<S>> {
    type Scalar = S;

    fn direct_quantile(&self, p: &S) -> Result<ExtendedReal<S>> {
        check_open_level(p)?;
        if self.q == S::one() {
            return self.x.quantile(p);
        }
        if self.q == S::zero() {
            return self.y.quantile(p);
        }
        self.merged()?.quantile(p)
    }
}

impl DirectQuantile for MixtureSpec<ParametricDistribution> {
    type Scalar = f64;

    fn direct_quantile(&self, p: &f64) -> Result<ExtendedReal<f64>> {
        continuous_root(self, p)
    }
}

impl DirectQuantile for MixtureSpec<AnyDistribution> {
    type Scalar = f64;

    fn direct_quantile(&self, p: &f64) -> Result<ExtendedReal<f64>> {
        match (&self.x, &self.y) {
            (AnyDistribution::Piecewise(x), AnyDistribution::Piecewise(y)) => {
                MixtureSpec::new(self.q, x.clone(), y.clone())?.direct_quantile(p)
            }
            (AnyDistribution::Parametric(_), AnyDistribution::Parametric(_)) => {
                continuous_root(self, p)
            }
            _ => Err(Error::MixedPair("direct inversion")),
        }
    }
}

const ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 200;

/// Bisection on `F_S(x) >= p` for continuous strictly increasing components.
///
/// The bracket is `[min(F_X^{-1}(p), F_Y^{-1}(p)), max(...)]`: at the upper end
/// both CDFs are at least `p`, below the lower end both are below `p`.
fn continuous_root<D: Distribution<Scalar = f64>>(
    m: &MixtureSpec<D>,
    p: &f64,
) -> Result<ExtendedReal<f64>> {
    check_open_level(p)?;
    if m.q == 1.0 {
        return m.x.quantile(p);
    }
    if m.q == 0.0 {
        return m.y.quantile(p);
    }
    let qx = m.x.quantile(p)?.to_f64();
    let qy = m.y.quantile(p)?.to_f64();
    let (mut lo, mut hi) = (qx.min(qy), qx.max(qy));
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= ROOT_TOL * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if m.cdf(&mid) >= *p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ExtendedReal::Finite(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ExactDistribution;
    use crate::scalar::{ratio, Rational};

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn two_points() -> MixtureSpec<ExactDistribution> {
        MixtureSpec::new(
            r(1, 2),
            ExactDistribution::point_mass(r(0, 1)),
            ExactDistribution::point_mass(r(1, 1)),
        )
        .unwrap()
    }

    fn two_uniforms() -> MixtureSpec<ExactDistribution> {
        MixtureSpec::new(
            r(1, 2),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
            ExactDistribution::uniform(r(1, 1), r(2, 1)).unwrap(),
        )
        .unwrap()
    }

    /// Closed form of the U(0,1)/U(1,2) mixture CDF at q = 1/2.
    fn two_uniforms_closed_form(x: &Rational) -> Rational {
        let half = r(1, 2);
        let clip = |v: Rational| v.clamp(r(0, 1), r(1, 1));
        half.clone() * clip(x.clone()) + half * clip(x.clone() - r(1, 1))
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(two_points().cdf(&r(0, 1)), r(1, 2));
        let same = MixtureSpec::new(
            r(1, 2),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
        )
        .unwrap();
        assert_eq!(same.cdf(&r(3, 10)), r(3, 10));
        assert_eq!(two_uniforms().cdf(&r(1, 2)), r(1, 4));
    }

    #[test]
    fn cdf_matches_closed_form_on_grid() {
        let m = two_uniforms();
        for i in -20..=60 {
            let x = r(i, 20);
            assert_eq!(m.cdf(&x), two_uniforms_closed_form(&x));
            assert_eq!(m.cdf_left_limit(&x), two_uniforms_closed_form(&x));
        }
    }

    #[test]
    fn left_limit_examples() {
        assert_eq!(two_points().cdf_left_limit(&r(1, 1)), r(1, 2));
        assert_eq!(two_points().cdf_left_limit(&r(0, 1)), r(0, 1));
        assert_eq!(two_uniforms().cdf_left_limit(&r(1, 1)), r(1, 2));
    }

    #[test]
    fn direct_quantile_examples() {
        let m = two_points();
        assert_eq!(
            m.direct_quantile(&r(1, 4)).unwrap(),
            ExtendedReal::Finite(r(0, 1))
        );
        assert_eq!(
            m.direct_quantile(&r(3, 4)).unwrap(),
            ExtendedReal::Finite(r(1, 1))
        );
        assert_eq!(
            two_uniforms().direct_quantile(&r(1, 4)).unwrap(),
            ExtendedReal::Finite(r(1, 2))
        );
        assert!(m.direct_quantile(&r(0, 1)).is_err());
        assert!(m.direct_quantile(&r(1, 1)).is_err());
    }

    #[test]
    fn degenerate_weights_pass_through() {
        let x = ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap();
        let y = ExactDistribution::point_mass(r(5, 1));
        let one = MixtureSpec::new(r(1, 1), x.clone(), y.clone()).unwrap();
        let zero = MixtureSpec::new(r(0, 1), x.clone(), y.clone()).unwrap();
        for i in 1..10 {
            let p = r(i, 10);
            assert_eq!(one.direct_quantile(&p).unwrap(), x.quantile(&p).unwrap());
            assert_eq!(zero.direct_quantile(&p).unwrap(), y.quantile(&p).unwrap());
        }
        assert!(MixtureSpec::new(r(3, 2), x.clone(), y.clone()).is_err());
    }

    #[test]
    fn parametric_root_inverts_cdf() {
        let m = MixtureSpec::new(
            0.3,
            ParametricDistribution::normal(0.0, 1.0).unwrap(),
            ParametricDistribution::normal(1.0, 1.0).unwrap(),
        )
        .unwrap();
        let s = m.direct_quantile(&0.5).unwrap().to_f64();
        assert!((m.cdf(&s) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mixed_pair_rejected() {
        let m = MixtureSpec::new(
            0.5,
            AnyDistribution::Parametric(ParametricDistribution::normal(0.0, 1.0).unwrap()),
            AnyDistribution::Piecewise(PiecewiseDistribution::point_mass(0.0)),
        )
        .unwrap();
        assert_eq!(
            m.direct_quantile(&0.5),
            Err(Error::MixedPair("direct inversion"))
        );
    }

    #[test]
    fn sampling_examples() {
        let m = MixtureSpec::new(
            r(1, 1),
            ExactDistribution::point_mass(r(3, 1)),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
        )
        .unwrap();
        assert_eq!(m.sample(4, 7).unwrap(), vec![3.0; 4]);
        let m = MixtureSpec::new(
            r(0, 1),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
            ExactDistribution::point_mass(r(1, 1)),
        )
        .unwrap();
        assert_eq!(m.sample(2, 7).unwrap(), vec![1.0; 2]);
        assert!(m.sample(0, 7).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let m = two_points();
        let a = m.sample(1_000_000, 42).unwrap();
        assert_eq!(a, m.sample(1_000_000, 42).unwrap());
        assert_ne!(a[..64], m.sample(64, 43).unwrap()[..]);
        // mean of Bernoulli(1/2): sd 5e-4 at n = 1e6, band is 4 sd
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        assert!((mean - 0.5).abs() <= 0.002, "mean {mean}");
    }

    #[test]
    fn swapped_has_same_cdf() {
        let m = two_uniforms();
        let s = m.swapped();
        for i in -4..=12 {
            let x = r(i, 4);
            assert_eq!(m.cdf(&x), s.cdf(&x));
        }
    }
}
