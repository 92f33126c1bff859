use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;
use crate::scalar::{ExtendedReal, Scalar};

/// Level at which unbounded supports are truncated when building a grid.
const TAIL_LEVEL: f64 = 1e-12;

/// `steps` equally spaced points covering `[lo, hi]`, both ends included.
#[derive(Clone, Debug, PartialEq)]
pub struct GridOracleConfig<S> {
    pub lo: S,
    pub hi: S,
    pub steps: usize,
}

impl<S: Scalar> GridOracleConfig<S> {
    pub const DEFAULT_STEPS: usize = 1_000_000;

    pub fn new(lo: S, hi: S, steps: usize) -> Result<Self> {
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs lo < hi and at least 2 steps, got [{lo}, {hi}] with {steps}"
            )));
        }
        Ok(GridOracleConfig { lo, hi, steps })
    }

    /// Default grid: the hull of both supports padded by one unit. Unbounded
    /// ends are cut at the component quantiles of level `1e-12` and `1 - 1e-12`.
    pub fn for_mixture<D: Distribution<Scalar = S>>(m: &MixtureSpec<D>) -> Result<Self> {
        let end = |d: &D, bound: ExtendedReal<S>, level: f64| -> Result<S> {
            match bound {
                ExtendedReal::Finite(v) => Ok(v),
                _ => d
                    .quantile(&S::from_f64(level))?
                    .into_finite()
                    .ok_or_else(|| Error::InvalidArgument("unbounded grid".into())),
            }
        };
        let (xl, xh) = m.x().support_bounds();
        let (yl, yh) = m.y().support_bounds();
        let lo = S::min_of(end(m.x(), xl, TAIL_LEVEL)?, end(m.y(), yl, TAIL_LEVEL)?);
        let hi = S::max_of(
            end(m.x(), xh, 1.0 - TAIL_LEVEL)?,
            end(m.y(), yh, 1.0 - TAIL_LEVEL)?,
        );
        Self::new(lo - S::one(), hi + S::one(), Self::DEFAULT_STEPS)
    }

    pub fn spacing(&self) -> S {
        (self.hi.clone() - self.lo.clone()) / S::from_i64(self.steps as i64 - 1)
    }

    pub fn point(&self, i: usize) -> S {
        if i + 1 == self.steps {
            return self.hi.clone();
        }
        self.lo.clone() + self.spacing() * S::from_i64(i as i64)
    }
}

/// Smallest grid point `x` with `F_S(x) >= p`.
///
/// `F_S` is nondecreasing, so the first satisfying index is found by bisection
/// over grid indices. The result lies within one grid spacing above the true
/// quantile whenever that quantile lies in `[lo, hi]`.
pub fn grid_oracle_quantile<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
    cfg: &GridOracleConfig<D::Scalar>,
) -> Result<D::Scalar> {
    let reaches = |i: usize| m.cdf(&cfg.point(i)) >= *p;
    if !reaches(cfg.steps - 1) {
        return Err(Error::GridExhausted(p.to_string()));
    }
    let (mut lo, mut hi) = (0usize, cfg.steps - 1);
    if reaches(lo) {
        return Ok(cfg.point(0));
    }
    // invariant: !reaches(lo) && reaches(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(cfg.point(hi))
}

/// Empirical quantile: the order statistic of rank `ceil(n p)` among `n`
/// seeded draws of the mixture.
pub fn monte_carlo_quantile<D: Distribution>(
    m: &MixtureSpec<D>,
    p: f64,
    n: usize,
    seed: u64,
) -> Result<f64> {
    if n < 1000 {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo needs n >= 1000, got {n}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::LevelOutOfRange(p.to_string(), "(0, 1)"));
    }
    let mut draws = m.sample(n, seed)?;
    let rank = ((n as f64) * p).ceil() as usize;
    let idx = rank.clamp(1, n) - 1;
    let (_, v, _) = draws.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*v)
}

/// Half-width of the CLT band for an empirical `p`-quantile from `n` draws,
/// given the mixture density at the quantile: `k * sqrt(p(1-p)/n) / f_S(s_p)`.
pub fn clt_band(p: f64, n: usize, density: f64, k: f64) -> f64 {
    k * (p * (1.0 - p) / n as f64).sqrt() / density
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

    /// Linear scan over every grid point, the slow reference.
    fn scan<D: Distribution>(
        m: &MixtureSpec<D>,
        p: &D::Scalar,
        cfg: &GridOracleConfig<D::Scalar>,
    ) -> D::Scalar {
        (0..cfg.steps)
            .map(|i| cfg.point(i))
            .find(|x| m.cdf(x) >= *p)
            .unwrap()
    }

    #[test]
    fn grid_examples() {
        let cfg = GridOracleConfig::new(r(-1, 1), r(2, 1), 3001).unwrap();
        let m = two_points();
        let g = grid_oracle_quantile(&m, &r(1, 4), &cfg).unwrap();
        assert_eq!(g, r(0, 1));
        assert_eq!(g, scan(&m, &r(1, 4), &cfg));

        let m = MixtureSpec::new(
            r(1, 2),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
            ExactDistribution::uniform(r(1, 1), r(2, 1)).unwrap(),
        )
        .unwrap();
        let cfg = GridOracleConfig::new(r(0, 1), r(2, 1), 2001).unwrap();
        let g = grid_oracle_quantile(&m, &r(1, 4), &cfg).unwrap();
        assert!(g >= r(1, 2) && g <= r(1, 2) + cfg.spacing());
        assert_eq!(g, scan(&m, &r(1, 4), &cfg));

        let m = MixtureSpec::new(
            r(1, 3),
            ExactDistribution::point_mass(r(3, 1)),
            ExactDistribution::point_mass(r(3, 1)),
        )
        .unwrap();
        let cfg = GridOracleConfig::new(r(2, 1), r(4, 1), 1001).unwrap();
        assert_eq!(grid_oracle_quantile(&m, &r(1, 2), &cfg).unwrap(), r(3, 1));
    }

    #[test]
    fn grid_errors() {
        assert!(GridOracleConfig::new(r(1, 1), r(1, 1), 10).is_err());
        assert!(GridOracleConfig::new(r(0, 1), r(1, 1), 1).is_err());
        let cfg = GridOracleConfig::new(r(-3, 1), r(-2, 1), 10).unwrap();
        assert!(matches!(
            grid_oracle_quantile(&two_points(), &r(1, 4), &cfg),
            Err(Error::GridExhausted(_))
        ));
    }

    #[test]
    fn default_grid_covers_support() {
        let cfg = GridOracleConfig::for_mixture(&two_points()).unwrap();
        assert_eq!((cfg.lo.clone(), cfg.hi.clone()), (r(-1, 1), r(2, 1)));
        assert_eq!(cfg.steps, 1_000_000);
        assert_eq!(cfg.point(cfg.steps - 1), r(2, 1));
    }

    #[test]
    fn monte_carlo_examples() {
        let m = MixtureSpec::new(
            r(1, 1),
            ExactDistribution::point_mass(r(3, 1)),
            ExactDistribution::point_mass(r(0, 1)),
        )
        .unwrap();
        assert_eq!(monte_carlo_quantile(&m, 0.5, 10_000, 1).unwrap(), 3.0);
        assert_eq!(
            monte_carlo_quantile(&two_points(), 0.25, 1_000_000, 1).unwrap(),
            0.0
        );
        assert!(monte_carlo_quantile(&m, 0.5, 999, 1).is_err());

        let u = MixtureSpec::new(
            r(1, 2),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
        )
        .unwrap();
        let est = monte_carlo_quantile(&u, 0.5, 1_000_000, 9).unwrap();
        assert!((est - 0.5).abs() <= 0.002, "{est}");
        assert!((clt_band(0.5, 1_000_000, 1.0, 4.0) - 0.002).abs() < 1e-15);
    }
}
