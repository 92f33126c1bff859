//! Case table for the mixture quantile.
//!
//! At the solved quantile `s_p`, each component CDF falls in one of four shapes:
//! continuous or jumping at `s_p`, and with or without a plateau reaching
//! `s_p` from the left. The sixteen combinations form the cells `1a`..`4d`,
//! written with a digit for `F` (component `X`) and a letter for `G`
//! (component `Y`). Cells `2b` and `4d` cannot occur. Four cells split further
//! on whether `F_S(s_p-) < p` or `F_S(s_p-) = p`.

use std::fmt;

use serde::Serialize;

use crate::distribution::{check_open_level, Distribution};
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;
use crate::scalar::{ExtendedReal, Scalar};
use crate::split_solver::{theorem_quantile, QuantileSolution};

/// Local shape of a CDF at a point `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Shape {
    /// Continuous at `s`, strictly below `F(s)` everywhere left of `s`.
    Continuous,
    /// Continuous at `s`, flat on some interval ending at `s`.
    ContinuousFlat,
    /// Jump at `s`, strictly below `F(s-)` everywhere left of `s`.
    Jump,
    /// Jump at `s`, flat on some interval ending at `s`.
    JumpFlat,
}

impl Shape {
    pub const ALL: [Shape; 4] = [
        Shape::Continuous,
        Shape::ContinuousFlat,
        Shape::Jump,
        Shape::JumpFlat,
    ];

    fn of(continuous: bool, flat: bool) -> Shape {
        match (continuous, flat) {
            (true, false) => Shape::Continuous,
            (true, true) => Shape::ContinuousFlat,
            (false, false) => Shape::Jump,
            (false, true) => Shape::JumpFlat,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn row_digit(self) -> char {
        (b'1' + self.index() as u8) as char
    }

    pub fn column_letter(self) -> char {
        (b'a' + self.index() as u8) as char
    }
}

/// Position of `F_S(s_p-)` relative to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Subcase {
    Below,
    AtLevel,
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcase::Below => "F_S(sp-)<p",
            Subcase::AtLevel => "F_S(sp-)=p",
        })
    }
}

/// One cell of the case table, with its sub-case where the cell branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseLabel {
    pub f_case: Shape,
    pub g_case: Shape,
    pub subcase: Option<Subcase>,
}

impl CaseLabel {
    /// Whether the cell `(f, g)` depends on the sub-case.
    pub fn branches(f: Shape, g: Shape) -> bool {
        use Shape::*;
        matches!(
            (f, g),
            (Continuous, JumpFlat) | (Jump, JumpFlat) | (JumpFlat, Continuous) | (JumpFlat, Jump)
        )
    }

    pub fn impossible(f: Shape, g: Shape) -> bool {
        use Shape::*;
        matches!(
            (f, g),
            (ContinuousFlat, ContinuousFlat) | (JumpFlat, JumpFlat)
        )
    }

    /// Every label that can occur: 14 cells, four of them in two sub-cases.
    pub fn feasible() -> Vec<CaseLabel> {
        let mut out = Vec::new();
        for f in Shape::ALL {
            for g in Shape::ALL {
                if Self::impossible(f, g) {
                    continue;
                }
                if Self::branches(f, g) {
                    for s in [Subcase::Below, Subcase::AtLevel] {
                        out.push(CaseLabel {
                            f_case: f,
                            g_case: g,
                            subcase: Some(s),
                        });
                    }
                } else {
                    out.push(CaseLabel {
                        f_case: f,
                        g_case: g,
                        subcase: None,
                    });
                }
            }
        }
        out
    }

    /// The label of the swapped mixture `(1 - q, Y, X)`.
    pub fn transposed(self) -> CaseLabel {
        CaseLabel {
            f_case: self.g_case,
            g_case: self.f_case,
            subcase: self.subcase,
        }
    }

    /// Two-character cell name such as `"3d"`.
    pub fn cell(&self) -> String {
        format!("{}{}", self.f_case.row_digit(), self.g_case.column_letter())
    }

    /// Cell name with sub-case, e.g. `"3d/F_S(sp-)=p"`.
    pub fn id(&self) -> String {
        match self.subcase {
            Some(s) => format!("{}/{}", self.cell(), s),
            None => self.cell(),
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A relation asserted by a cell of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    AlphaIsF,
    BetaIsG,
    SpIsXQuantile,
    SpIsYQuantile,
    SpAboveXQuantile,
    SpAboveYQuantile,
}

impl Relation {
    pub fn text(self) -> &'static str {
        match self {
            Relation::AlphaIsF => "alpha* = F(s_p)",
            Relation::BetaIsG => "beta* = G(s_p)",
            Relation::SpIsXQuantile => "s_p = F_X^-1(alpha*)",
            Relation::SpIsYQuantile => "s_p = F_Y^-1(beta*)",
            Relation::SpAboveXQuantile => "s_p > F_X^-1(alpha*)",
            Relation::SpAboveYQuantile => "s_p > F_Y^-1(beta*)",
        }
    }
}

/// Relations the table lists for `label`.
pub fn table_relations(label: &CaseLabel) -> Vec<Relation> {
    use Relation::*;
    use Shape::*;
    use Subcase::*;
    let (f, g, sub) = (label.f_case, label.g_case, label.subcase);
    match (f, g, sub) {
        (Continuous, Continuous, _) => vec![AlphaIsF, BetaIsG, SpIsXQuantile, SpIsYQuantile],
        (Continuous, ContinuousFlat, _) => vec![AlphaIsF, BetaIsG, SpIsXQuantile, SpAboveYQuantile],
        (Continuous, Jump, _) => vec![AlphaIsF, SpIsXQuantile, SpIsYQuantile],
        (Continuous, JumpFlat, Some(AtLevel)) => vec![AlphaIsF, SpIsXQuantile, SpAboveYQuantile],
        (Continuous, JumpFlat, _) => vec![AlphaIsF, SpIsXQuantile, SpIsYQuantile],

        (ContinuousFlat, Continuous, _) => vec![AlphaIsF, BetaIsG, SpIsYQuantile, SpAboveXQuantile],
        (ContinuousFlat, ContinuousFlat, _) => vec![],
        (ContinuousFlat, Jump, _) | (ContinuousFlat, JumpFlat, _) => {
            vec![AlphaIsF, SpIsYQuantile, SpAboveXQuantile]
        }

        (Jump, Continuous, _) => vec![BetaIsG, SpIsXQuantile, SpIsYQuantile],
        (Jump, ContinuousFlat, _) => vec![BetaIsG, SpIsXQuantile, SpAboveYQuantile],
        (Jump, Jump, _) => vec![SpIsXQuantile, SpIsYQuantile],
        (Jump, JumpFlat, Some(AtLevel)) => vec![SpIsXQuantile, SpAboveYQuantile],
        (Jump, JumpFlat, _) => vec![SpIsXQuantile, SpIsYQuantile],

        (JumpFlat, Continuous, Some(AtLevel)) => vec![BetaIsG, SpIsYQuantile, SpAboveXQuantile],
        (JumpFlat, Continuous, _) => vec![BetaIsG, SpIsYQuantile, SpIsXQuantile],
        (JumpFlat, ContinuousFlat, _) => vec![BetaIsG, SpIsXQuantile, SpAboveYQuantile],
        (JumpFlat, Jump, Some(AtLevel)) => vec![SpIsYQuantile, SpAboveXQuantile],
        (JumpFlat, Jump, _) => vec![SpIsXQuantile, SpIsYQuantile],
        (JumpFlat, JumpFlat, _) => vec![],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport<S> {
    pub label: CaseLabel,
    pub s_p: ExtendedReal<S>,
    pub f_flat_witness: Option<S>,
    pub g_flat_witness: Option<S>,
    pub relations_checked: Vec<RelationCheck>,
}

impl<S: Scalar> ClassificationReport<S> {
    pub fn all_relations_hold(&self) -> bool {
        self.relations_checked.iter().all(|r| r.holds)
    }

    /// Machine-readable form with frozen field names.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cell": self.label.id(),
            "f_case": self.label.f_case.row_digit().to_string(),
            "g_case": self.label.g_case.column_letter().to_string(),
            "subcase": self.label.subcase.map(|s| s.to_string()),
            "s_p": self.s_p.render(),
            "f_flat_witness": self.f_flat_witness.as_ref().map(Scalar::render),
            "g_flat_witness": self.g_flat_witness.as_ref().map(Scalar::render),
            "relations": self.relations_checked,
        })
    }
}

/// Row or column shape of `d` at `s`, with a flat-to-the-left witness.
pub fn shape_at<D: Distribution>(d: &D, s: &D::Scalar) -> (Shape, Option<D::Scalar>) {
    let witness = d.flat_left_witness(s);
    (Shape::of(d.is_continuous_at(s), witness.is_some()), witness)
}

/// A classification together with the solution it was computed from.
pub type Classified<S> = (ClassificationReport<S>, QuantileSolution<S>);

/// Solves the instance and places it in the case table.
pub fn classify<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
) -> Result<Classified<D::Scalar>> {
    check_open_level(p)?;
    let q = m.q();
    if *q <= D::Scalar::zero() || *q >= D::Scalar::one() {
        return Err(Error::DegenerateWeight(q.to_string()));
    }
    let solution = theorem_quantile(m, p)?;
    let s = solution.s_p.finite().cloned().ok_or_else(|| {
        Error::Contradiction(format!("infinite quantile {} at p = {p}", solution.s_p))
    })?;
    let (f_case, f_flat_witness) = shape_at(m.x(), &s);
    let (g_case, g_flat_witness) = shape_at(m.y(), &s);
    if CaseLabel::impossible(f_case, g_case) {
        return Err(Error::Contradiction(format!(
            "impossible cell {}{} at s_p = {s}",
            f_case.row_digit(),
            g_case.column_letter()
        )));
    }
    let subcase = if CaseLabel::branches(f_case, g_case) {
        let left = m.cdf_left_limit(&s);
        if left.level_eq(p) {
            Some(Subcase::AtLevel)
        } else if left < *p {
            Some(Subcase::Below)
        } else {
            return Err(Error::Contradiction(format!(
                "F_S(s_p-) = {left} exceeds p = {p}"
            )));
        }
    } else {
        None
    };
    let mut report = ClassificationReport {
        label: CaseLabel {
            f_case,
            g_case,
            subcase,
        },
        s_p: solution.s_p.clone(),
        f_flat_witness,
        g_flat_witness,
        relations_checked: Vec::new(),
    };
    report.relations_checked = verify_table_relations(&report, &solution, m, p);
    Ok((report, solution))
}

/// Evaluates every relation of the report's cell against the solution.
/// Exact for rationals; doubles use the level and value tolerances.
pub fn verify_table_relations<D: Distribution>(
    report: &ClassificationReport<D::Scalar>,
    solution: &QuantileSolution<D::Scalar>,
    m: &MixtureSpec<D>,
    _p: &D::Scalar,
) -> Vec<RelationCheck> {
    let s_p = &report.s_p;
    table_relations(&report.label)
        .into_iter()
        .map(|rel| {
            let holds = match (rel, s_p.finite()) {
                (Relation::AlphaIsF, Some(s)) => solution.alpha_star.level_eq(&m.x().cdf(s)),
                (Relation::BetaIsG, Some(s)) => solution.beta_star.level_eq(&m.y().cdf(s)),
                (Relation::AlphaIsF | Relation::BetaIsG, None) => false,
                (Relation::SpIsXQuantile, _) => s_p.value_eq(&solution.x_quantile),
                (Relation::SpIsYQuantile, _) => s_p.value_eq(&solution.y_quantile),
                (Relation::SpAboveXQuantile, _) => s_p.value_gt(&solution.x_quantile),
                (Relation::SpAboveYQuantile, _) => s_p.value_gt(&solution.y_quantile),
            };
            RelationCheck {
                relation: rel.text(),
                holds,
            }
        })
        .collect()
}
