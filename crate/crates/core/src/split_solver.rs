//! Quantile of a mixture from its components' quantiles.
//!
//! For a level `p`, every split `q*alpha + (1 - q)*beta = p` assigns sub-levels to
//! the two components. With `alpha*` the smallest `alpha` such that
//! `F_X^{-1}(alpha) >= F_Y^{-1}(beta)`, the mixture quantile is
//! `max(F_X^{-1}(alpha*), F_Y^{-1}(beta*))`.
//!
//! `alpha` ranges over the closed interval on which `beta` stays in `[0, 1]`;
//! boundary quantiles use `F^{-1}(0) = -inf`. If the ordering never holds on
//! that interval, `alpha*` is clamped to its upper end.

use serde::Serialize;

use crate::distribution::{check_open_level, Distribution};
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;
use crate::scalar::{ExtendedReal, Scalar};

/// Bisection stops once the bracket on `alpha` is this narrow.
pub const ALPHA_TOL: f64 = 1e-14;
pub const ALPHA_MAX_ITER: usize = 200;

/// A split of the level `p`: `q*alpha + (1 - q)*beta = p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitPoint<S> {
    pub alpha: S,
    pub beta: S,
}

/// Output of [`theorem_quantile`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuantileSolution<S> {
    pub s_p: ExtendedReal<S>,
    pub alpha_star: S,
    pub beta_star: S,
    /// `F_X^{-1}(alpha*)`.
    pub x_quantile: ExtendedReal<S>,
    /// `F_Y^{-1}(beta*)`.
    pub y_quantile: ExtendedReal<S>,
    pub x_attains: bool,
    pub y_attains: bool,
    /// The ordering held nowhere on the feasible range.
    pub clamped: bool,
}

fn reject_degenerate<S: Scalar>(q: &S) -> Result<()> {
    if *q <= S::zero() || *q >= S::one() {
        Err(Error::DegenerateWeight(q.to_string()))
    } else {
        Ok(())
    }
}

/// `[max(0, (p - (1 - q))/q), min(1, p/q)]`: the `alpha` values whose partner
/// `beta` lies in `[0, 1]`.
pub fn feasible_alpha_range<S: Scalar>(q: &S, p: &S) -> Result<(S, S)> {
    reject_degenerate(q)?;
    check_open_level(p)?;
    let lo = (p.clone() - (S::one() - q.clone())) / q.clone();
    let hi = p.clone() / q.clone();
    Ok((S::max_of(lo, S::zero()), S::min_of(hi, S::one())))
}

/// `beta = (p - q*alpha)/(1 - q)`, clamped into `[0, 1]` against round-off.
pub fn beta_for<S: Scalar>(q: &S, p: &S, alpha: &S) -> S {
    let beta = (p.clone() - q.clone() * alpha.clone()) / (S::one() - q.clone());
    S::max_of(S::min_of(beta, S::one()), S::zero())
}

/// `alpha` for a given `beta`: `(p - (1 - q)*beta)/q`.
fn alpha_for<S: Scalar>(q: &S, p: &S, beta: &S) -> S {
    (p.clone() - (S::one() - q.clone()) * beta.clone()) / q.clone()
}

/// `F_X^{-1}(alpha) >= F_Y^{-1}(beta(alpha))` on the extended real line.
pub fn ordering_predicate<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
    alpha: &D::Scalar,
) -> Result<bool> {
    let beta = beta_for(m.q(), p, alpha);
    Ok(m.x().quantile(alpha)? >= m.y().quantile(&beta)?)
}

/// `F_X^{-1}(alpha) - F_Y^{-1}(beta(alpha))` for levels strictly inside `(0, 1)`.
fn gap<D: Distribution>(m: &MixtureSpec<D>, p: &D::Scalar, alpha: &D::Scalar) -> Result<D::Scalar> {
    let beta = beta_for(m.q(), p, alpha);
    let qx = m.x().quantile(alpha)?;
    let qy = m.y().quantile(&beta)?;
    match (qx.into_finite(), qy.into_finite()) {
        (Some(a), Some(b)) => Ok(a - b),
        _ => Err(Error::Contradiction(format!(
            "infinite quantile inside (0, 1) at alpha = {alpha}"
        ))),
    }
}

/// The infimum `alpha*` of the ordering predicate over the feasible range,
/// with its partner `beta*`. The flag is `true` when the predicate never held.
pub fn alpha_star<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
) -> Result<(SplitPoint<D::Scalar>, bool)> {
    let q = m.q();
    let (lo, hi) = feasible_alpha_range(q, p)?;
    let (alpha, clamped) = match (m.x().quantile_kinks(), m.y().quantile_kinks()) {
        (Some(kx), Some(ky)) => enumerate_infimum(m, p, &lo, &hi, &kx, &ky)?,
        _ => bisect_infimum(m, p, lo, hi)?,
    };
    let beta = beta_for(q, p, &alpha);
    Ok((SplitPoint { alpha, beta }, clamped))
}

/// Exact infimum for piecewise-affine quantile functions.
///
/// Between consecutive candidate levels (kinks of either quantile function,
/// mapped to `alpha`) the gap `F_X^{-1}(alpha) - F_Y^{-1}(beta(alpha))` is affine
/// and nondecreasing, so the infimum is a candidate or the zero of that line.
fn enumerate_infimum<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
    lo: &D::Scalar,
    hi: &D::Scalar,
    kinks_x: &[D::Scalar],
    kinks_y: &[D::Scalar],
) -> Result<(D::Scalar, bool)> {
    let q = m.q();
    let mut cands: Vec<D::Scalar> = vec![lo.clone(), hi.clone()];
    cands.extend(kinks_x.iter().filter(|k| *k > lo && *k < hi).cloned());
    cands.extend(
        kinks_y
            .iter()
            .map(|b| alpha_for(q, p, b))
            .filter(|a| a > lo && a < hi),
    );
    cands.sort_by(|a, b| a.partial_cmp(b).expect("comparable levels"));
    cands.dedup();

    let mut first_true = None;
    for (i, c) in cands.iter().enumerate() {
        if ordering_predicate(m, p, c)? {
            first_true = Some(i);
            break;
        }
    }
    let j = match first_true {
        None => return Ok((hi.clone(), true)),
        Some(0) => return Ok((cands[0].clone(), false)),
        Some(j) => j,
    };
    let (a, b) = (&cands[j - 1], &cands[j]);
    let third = (b.clone() - a.clone()) / D::Scalar::from_i64(3);
    let m1 = a.clone() + third.clone();
    let m2 = m1.clone() + third;
    let d1 = gap(m, p, &m1)?;
    let d2 = gap(m, p, &m2)?;
    let slope = (d2 - d1.clone()) / (m2 - m1.clone());
    let alpha = if slope <= D::Scalar::zero() {
        if d1 >= D::Scalar::zero() {
            a.clone()
        } else {
            b.clone()
        }
    } else {
        let root = m1 - d1 / slope;
        D::Scalar::max_of(D::Scalar::min_of(root, b.clone()), a.clone())
    };
    Ok((alpha, false))
}

fn bisect_infimum<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
    mut lo: D::Scalar,
    mut hi: D::Scalar,
) -> Result<(D::Scalar, bool)> {
    if ordering_predicate(m, p, &lo)? {
        return Ok((lo, false));
    }
    if !ordering_predicate(m, p, &hi)? {
        return Ok((hi, true));
    }
    for _ in 0..ALPHA_MAX_ITER {
        if (hi.clone() - lo.clone()).to_f64() <= ALPHA_TOL {
            break;
        }
        let mid = D::Scalar::midpoint(&lo, &hi);
        if ordering_predicate(m, p, &mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, false))
}

/// Mixture quantile `s_p = max(F_X^{-1}(alpha*), F_Y^{-1}(beta*))` for `p` in `(0, 1)`.
///
/// For `q = 1` (resp. `q = 0`) the split is bypassed and `X` (resp. `Y`) is
/// inverted at `p` directly.
pub fn theorem_quantile<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
) -> Result<QuantileSolution<D::Scalar>> {
    check_open_level(p)?;
    let q = m.q();
    if *q == D::Scalar::one() || *q == D::Scalar::zero() {
        let x_live = *q == D::Scalar::one();
        let x_quantile = m.x().quantile(p)?;
        let y_quantile = m.y().quantile(p)?;
        let s_p = if x_live {
            x_quantile.clone()
        } else {
            y_quantile.clone()
        };
        return Ok(QuantileSolution {
            s_p,
            alpha_star: p.clone(),
            beta_star: p.clone(),
            x_quantile,
            y_quantile,
            x_attains: x_live,
            y_attains: !x_live,
            clamped: false,
        });
    }
    let (split, clamped) = alpha_star(m, p)?;
    let x_quantile = m.x().quantile(&split.alpha)?;
    let y_quantile = m.y().quantile(&split.beta)?;
    // The split lives on levels in (0, 1). A +inf quantile at level 1 is the
    // unbounded tail of a component whose true alpha* or beta* rounds to 1,
    // and it takes no part in the maximum.
    let tail = |v: &ExtendedReal<D::Scalar>, level: &D::Scalar| {
        *v == ExtendedReal::PosInf && *level == D::Scalar::one()
    };
    let s_p = match (
        tail(&x_quantile, &split.alpha),
        tail(&y_quantile, &split.beta),
    ) {
        (true, false) => y_quantile.clone(),
        (false, true) => x_quantile.clone(),
        _ => x_quantile.clone().max(y_quantile.clone()),
    };
    Ok(QuantileSolution {
        x_attains: x_quantile.value_eq(&s_p),
        y_attains: y_quantile.value_eq(&s_p),
        s_p,
        alpha_star: split.alpha,
        beta_star: split.beta,
        x_quantile,
        y_quantile,
        clamped,
    })
}
