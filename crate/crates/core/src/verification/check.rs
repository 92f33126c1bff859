use serde::Serialize;

use crate::classifier::{classify, shape_at};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::mixture::{DirectQuantile, MixtureSpec};
use crate::scalar::{ExtendedReal, Scalar};
use crate::split_solver::theorem_quantile;

use super::oracle::{grid_oracle_quantile, GridOracleConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedCheck {
    pub name: &'static str,
    pub passed: bool,
}

/// Outcome of every oracle and invariant for one `(m, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub cell: Option<String>,
    pub s_p: Option<String>,
    pub alpha_star: Option<String>,
    pub beta_star: Option<String>,
    pub direct: Option<String>,
    pub grid: Option<String>,
    /// `|theorem - direct|` in floating point; zero means exact agreement.
    pub deviation: Option<f64>,
    pub checks: Vec<NamedCheck>,
    pub errors: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
    }
}

/// Names of the checks [`cross_check`] records.
pub mod names {
    pub const THEOREM_EQ_DIRECT: &str = "theorem = direct";
    pub const GRID_ONE_STEP: &str = "grid within one step";
    pub const ATTAINS: &str = "max attained";
    pub const RELATIONS: &str = "cell relations";
    pub const SANDWICH: &str = "F_S(s_p-) <= p <= F_S(s_p)";
    pub const SPLIT_IDENTITY: &str = "q alpha* + (1-q) beta* = p";
    pub const ALPHA_BRACKET: &str = "F(s_p-) <= alpha* <= F(s_p)";
    pub const BETA_BRACKET: &str = "G(s_p-) <= beta* <= G(s_p)";
    pub const G_SANDWICH: &str = "G(s_p-) <= (p - qF(s_p))/(1-q) <= G(s_p)";
    pub const SWAP: &str = "swap invariance";
    pub const TRANSPOSE: &str = "cell transposition";
}

/// Cross-checks with the default grid for `m`.
pub fn cross_check<D>(m: &MixtureSpec<D>, p: &D::Scalar) -> CheckReport
where
    D: Distribution,
    MixtureSpec<D>: DirectQuantile<Scalar = D::Scalar>,
{
    match GridOracleConfig::for_mixture(m) {
        Ok(grid) => cross_check_with_grid(m, p, &grid),
        Err(e) => {
            let mut report = empty_report();
            report.errors.push(format!("grid: {e}"));
            report
        }
    }
}

fn empty_report() -> CheckReport {
    CheckReport {
        cell: None,
        s_p: None,
        alpha_star: None,
        beta_star: None,
        direct: None,
        grid: None,
        deviation: None,
        checks: Vec::new(),
        errors: Vec::new(),
    }
}

/// Runs the split formula, direct inversion, the grid oracle, classification
/// and all invariants. Failures are recorded, never raised.
///
/// Mixed piecewise/parametric pairs have no direct inversion; the grid result
/// stands in as the reference for them.
pub fn cross_check_with_grid<D>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
    grid: &GridOracleConfig<D::Scalar>,
) -> CheckReport
where
    D: Distribution,
    MixtureSpec<D>: DirectQuantile<Scalar = D::Scalar>,
{
    use names::*;
    let mut report = empty_report();
    let push = |r: &mut CheckReport, name: &'static str, passed: bool| {
        r.checks.push(NamedCheck { name, passed });
    };

    let solution = match theorem_quantile(m, p) {
        Ok(s) => s,
        Err(e) => {
            report.errors.push(format!("theorem: {e}"));
            return report;
        }
    };
    report.s_p = Some(solution.s_p.render());
    report.alpha_star = Some(solution.alpha_star.render());
    report.beta_star = Some(solution.beta_star.render());
    push(
        &mut report,
        ATTAINS,
        solution.x_attains || solution.y_attains,
    );

    let grid_value = grid_oracle_quantile(m, p, grid);
    match &grid_value {
        Ok(g) => {
            report.grid = Some(g.render());
            let ok = match solution.s_p.finite() {
                Some(s) => {
                    let upper = s.clone() + grid.spacing();
                    s.value_le(g) && g.value_le(&upper)
                }
                None => false,
            };
            push(&mut report, GRID_ONE_STEP, ok);
        }
        Err(e) => report.errors.push(format!("grid: {e}")),
    }

    match m.direct_quantile(p) {
        Ok(direct) => {
            report.direct = Some(direct.render());
            report.deviation = Some((solution.s_p.to_f64() - direct.to_f64()).abs());
            push(
                &mut report,
                THEOREM_EQ_DIRECT,
                solution.s_p.value_eq(&direct),
            );
        }
        Err(Error::MixedPair(_)) => {}
        Err(e) => report.errors.push(format!("direct: {e}")),
    }

    let Some(s) = solution.s_p.finite().cloned() else {
        report
            .errors
            .push(format!("s_p = {} is not finite", solution.s_p));
        return report;
    };
    let q = m.q().clone();
    let one = D::Scalar::one();

    let (fl, fs) = (m.cdf_left_limit(&s), m.cdf(&s));
    push(&mut report, SANDWICH, fl.level_le(p) && p.level_le(&fs));
    let split = q.clone() * solution.alpha_star.clone()
        + (one.clone() - q.clone()) * solution.beta_star.clone();
    push(&mut report, SPLIT_IDENTITY, split.level_eq(p));
    let bracket = |lo: D::Scalar, v: &D::Scalar, hi: D::Scalar| lo.level_le(v) && v.level_le(&hi);
    push(
        &mut report,
        ALPHA_BRACKET,
        bracket(
            m.x().cdf_left_limit(&s),
            &solution.alpha_star,
            m.x().cdf(&s),
        ),
    );
    push(
        &mut report,
        BETA_BRACKET,
        bracket(m.y().cdf_left_limit(&s), &solution.beta_star, m.y().cdf(&s)),
    );
    let degenerate = q == D::Scalar::zero() || q == one;
    if m.x().is_continuous_at(&s) && !degenerate {
        let mid = (p.clone() - q.clone() * m.x().cdf(&s)) / (one.clone() - q.clone());
        push(
            &mut report,
            G_SANDWICH,
            bracket(m.y().cdf_left_limit(&s), &mid, m.y().cdf(&s)),
        );
    }

    let swapped = m.swapped();
    match theorem_quantile(&swapped, p) {
        Ok(sw) => push(&mut report, SWAP, sw.s_p.value_eq(&solution.s_p)),
        Err(e) => report.errors.push(format!("swapped theorem: {e}")),
    }

    if !degenerate {
        match classify(m, p) {
            Ok((rep, _)) => {
                report.cell = Some(rep.label.id());
                push(&mut report, RELATIONS, rep.all_relations_hold());
                match classify(&swapped, p) {
                    Ok((sw, _)) => push(
                        &mut report,
                        TRANSPOSE,
                        sw.label == rep.label.transposed() && sw.s_p.value_eq(&rep.s_p),
                    ),
                    Err(e) => report.errors.push(format!("swapped classify: {e}")),
                }
            }
            Err(e) => {
                let cell = raw_cell(m.x(), m.y(), &s);
                push(
                    &mut report,
                    TRANSPOSE,
                    raw_cell(swapped.x(), swapped.y(), &s) == transpose_cell(&cell),
                );
                report.cell = Some(cell);
                report.errors.push(format!("classify: {e}"));
            }
        }
    }

    if let (None, Ok(g)) = (&report.direct, &grid_value) {
        report.deviation = Some((solution.s_p.to_f64() - g.to_f64()).abs());
    }
    report
}

/// Cell name from the shapes alone, without sub-case or feasibility checks.
fn raw_cell<D: Distribution>(x: &D, y: &D, s: &D::Scalar) -> String {
    format!(
        "{}{}",
        shape_at(x, s).0.row_digit(),
        shape_at(y, s).0.column_letter()
    )
}

fn transpose_cell(cell: &str) -> String {
    let b = cell.as_bytes();
    let row = (b'1' + (b[1] - b'a')) as char;
    let col = (b'a' + (b[0] - b'1')) as char;
    format!("{row}{col}")
}

/// Exact agreement of the split formula with direct inversion, as a plain
/// `Result` for callers that only need the quantile.
pub fn agreed_quantile<D>(m: &MixtureSpec<D>, p: &D::Scalar) -> Result<ExtendedReal<D::Scalar>>
where
    D: Distribution,
    MixtureSpec<D>: DirectQuantile<Scalar = D::Scalar>,
{
    let theorem = theorem_quantile(m, p)?.s_p;
    let direct = m.direct_quantile(p)?;
    if theorem.value_eq(&direct) {
        Ok(theorem)
    } else {
        Err(Error::Contradiction(format!(
            "split formula gives {theorem}, direct inversion {direct}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{ExactDistribution, ParametricDistribution};
    use crate::scalar::{ratio, Rational};

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn two_points_pass_as_4b() {
        let m = MixtureSpec::new(
            r(1, 2),
            ExactDistribution::point_mass(r(0, 1)),
            ExactDistribution::point_mass(r(1, 1)),
        )
        .unwrap();
        let rep = cross_check(&m, &r(1, 4));
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.cell.as_deref(), Some("4b"));
        assert_eq!(rep.deviation, Some(0.0));
    }

    #[test]
    fn two_uniforms_pass_as_1b() {
        let m = MixtureSpec::new(
            r(1, 2),
            ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap(),
            ExactDistribution::uniform(r(1, 1), r(2, 1)).unwrap(),
        )
        .unwrap();
        let rep = cross_check(&m, &r(1, 4));
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.cell.as_deref(), Some("1b"));
        assert_eq!(rep.check(names::G_SANDWICH), Some(true));
    }

    #[test]
    fn normals_pass_as_1a() {
        let m = MixtureSpec::new(
            0.3,
            ParametricDistribution::normal(0.0, 1.0).unwrap(),
            ParametricDistribution::normal(1.0, 1.0).unwrap(),
        )
        .unwrap();
        let rep = cross_check(&m, &0.5);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.cell.as_deref(), Some("1a"));
        assert!(rep.deviation.unwrap() <= 1e-9);
        assert!(agreed_quantile(&m, &0.5).is_ok());
    }

    #[test]
    fn coincident_atoms_land_in_4d() {
        let m = MixtureSpec::new(
            r(1, 3),
            ExactDistribution::point_mass(r(0, 1)),
            ExactDistribution::point_mass(r(0, 1)),
        )
        .unwrap();
        let rep = cross_check(&m, &r(1, 2));
        assert_eq!(rep.cell.as_deref(), Some("4d"));
        assert_eq!(rep.check(names::THEOREM_EQ_DIRECT), Some(true));
        assert_eq!(rep.check(names::TRANSPOSE), Some(true));
        assert!(rep.errors[0].contains("impossible cell 4d"));
        assert_eq!(transpose_cell("2c"), "3b");
    }

    #[test]
    fn failures_are_captured() {
        let m = MixtureSpec::new(
            r(1, 2),
            ExactDistribution::point_mass(r(0, 1)),
            ExactDistribution::point_mass(r(1, 1)),
        )
        .unwrap();
        let rep = cross_check(&m, &r(3, 2));
        assert!(!rep.passed());
        assert!(rep.errors[0].starts_with("theorem"));
    }
}
