//! Mixture spec files: `{"q": "...", "X": <literal>, "Y": <literal>}`.
//!
//! Every number is a string. Piecewise and uniform literals parse exactly
//! into rationals and reject exponent notation; the other parametric
//! families parse as doubles.

use serde::{Deserialize, Serialize};

use crate::distribution::{AnyDistribution, ExactDistribution, ParametricDistribution, Segment};
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawLiteral {
    Piecewise {
        #[serde(default)]
        atoms: Vec<[String; 2]>,
        #[serde(default)]
        segments: Vec<[String; 3]>,
    },
    Uniform {
        a: String,
        b: String,
    },
    Normal {
        mu: String,
        sigma: String,
    },
    Exponential {
        rate: String,
    },
    Lognormal {
        mu: String,
        sigma: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    q: String,
    #[serde(rename = "X")]
    x: RawLiteral,
    #[serde(rename = "Y")]
    y: RawLiteral,
}

/// One component as written in a spec file.
#[derive(Clone, Debug, PartialEq)]
pub enum Literal {
    Piecewise(ExactDistribution),
    Uniform { a: Rational, b: Rational },
    Parametric(ParametricDistribution),
}

impl Literal {
    /// Exact form, available for piecewise and uniform literals.
    pub fn to_exact(&self) -> Option<ExactDistribution> {
        match self {
            Literal::Piecewise(d) => Some(d.clone()),
            Literal::Uniform { a, b } => ExactDistribution::uniform(a.clone(), b.clone()).ok(),
            Literal::Parametric(_) => None,
        }
    }

    pub fn to_float(&self) -> Result<AnyDistribution> {
        Ok(match self {
            Literal::Piecewise(d) => AnyDistribution::Piecewise(d.to_f64()),
            Literal::Uniform { a, b } => AnyDistribution::Parametric(
                ParametricDistribution::uniform(a.to_f64(), b.to_f64())?,
            ),
            Literal::Parametric(d) => AnyDistribution::Parametric(d.clone()),
        })
    }

    fn is_piecewise(&self) -> bool {
        matches!(self, Literal::Piecewise(_))
    }
}

/// The mixture a document describes, in the most exact arithmetic available.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Exact(MixtureSpec<ExactDistribution>),
    Float(MixtureSpec<AnyDistribution>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecDocument {
    pub q: Rational,
    pub x: Literal,
    pub y: Literal,
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<SpecDocument> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let q = exact(&raw.q, "q")?;
        if q < Rational::zero() || q > Rational::one() {
            return Err(Error::Parse(format!("q = {} outside [0, 1]", raw.q)));
        }
        Ok(SpecDocument {
            q,
            x: literal(raw.x, "X")?,
            y: literal(raw.y, "Y")?,
        })
    }

    /// Canonical JSON: atoms and segments sorted, rationals rendered exactly.
    pub fn to_json_string(&self) -> String {
        let raw = RawDocument {
            q: format_rational(&self.q),
            x: raw_literal(&self.x),
            y: raw_literal(&self.y),
        };
        serde_json::to_string_pretty(&raw).expect("plain strings serialize")
    }

    /// Exact when both components are exact, doubles otherwise.
    pub fn model(&self) -> Result<Model> {
        match (self.x.to_exact(), self.y.to_exact()) {
            (Some(x), Some(y)) => Ok(Model::Exact(MixtureSpec::new(self.q.clone(), x, y)?)),
            _ => Ok(Model::Float(MixtureSpec::new(
                self.q.to_f64(),
                self.x.to_float()?,
                self.y.to_float()?,
            )?)),
        }
    }

    /// A piecewise component paired with a smooth parametric one.
    pub fn is_mixed(&self) -> bool {
        let smooth = |l: &Literal| matches!(l, Literal::Parametric(_));
        (self.x.is_piecewise() && smooth(&self.y)) || (smooth(&self.x) && self.y.is_piecewise())
    }
}

fn exact(text: &str, field: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::Parse(format!("{field}: {e}")))
}

fn float(text: &str, field: &str) -> Result<f64> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse(format!(
            "{field}: not a finite number: {text:?}"
        ))),
    }
}

fn literal(raw: RawLiteral, side: &str) -> Result<Literal> {
    let invalid = |e: Error| match e {
        Error::InvalidDistribution(m) => Error::Parse(format!("{side}: {m}")),
        other => other,
    };
    Ok(match raw {
        RawLiteral::Piecewise { atoms, segments } => {
            let atoms = atoms
                .iter()
                .map(|[l, m]| Ok((exact(l, side)?, exact(m, side)?)))
                .collect::<Result<Vec<_>>>()?;
            let segments = segments
                .iter()
                .map(|[l, r, m]| Ok((exact(l, side)?, exact(r, side)?, exact(m, side)?)))
                .collect::<Result<Vec<_>>>()?;
            Literal::Piecewise(ExactDistribution::new(atoms, segments).map_err(invalid)?)
        }
        RawLiteral::Uniform { a, b } => {
            let (a, b) = (exact(&a, side)?, exact(&b, side)?);
            if a >= b {
                return Err(Error::Parse(format!("{side}: uniform needs a < b")));
            }
            Literal::Uniform { a, b }
        }
        RawLiteral::Normal { mu, sigma } => Literal::Parametric(
            ParametricDistribution::normal(float(&mu, side)?, float(&sigma, side)?)
                .map_err(invalid)?,
        ),
        RawLiteral::Exponential { rate } => Literal::Parametric(
            ParametricDistribution::exponential(float(&rate, side)?).map_err(invalid)?,
        ),
        RawLiteral::Lognormal { mu, sigma } => Literal::Parametric(
            ParametricDistribution::lognormal(float(&mu, side)?, float(&sigma, side)?)
                .map_err(invalid)?,
        ),
    })
}

fn raw_literal(lit: &Literal) -> RawLiteral {
    use crate::distribution::Family;
    match lit {
        Literal::Piecewise(d) => RawLiteral::Piecewise {
            atoms: d
                .atoms()
                .iter()
                .map(|(l, m)| [format_rational(l), format_rational(m)])
                .collect(),
            segments: d
                .segments()
                .iter()
                .map(|Segment { left, right, rise }| {
                    [
                        format_rational(left),
                        format_rational(right),
                        format_rational(rise),
                    ]
                })
                .collect(),
        },
        Literal::Uniform { a, b } => RawLiteral::Uniform {
            a: format_rational(a),
            b: format_rational(b),
        },
        Literal::Parametric(d) => match *d.family() {
            Family::Uniform { a, b } => RawLiteral::Uniform {
                a: a.to_string(),
                b: b.to_string(),
            },
            Family::Normal { mu, sigma } => RawLiteral::Normal {
                mu: mu.to_string(),
                sigma: sigma.to_string(),
            },
            Family::Exponential { rate } => RawLiteral::Exponential {
                rate: rate.to_string(),
            },
            Family::LogNormal { mu, sigma } => RawLiteral::Lognormal {
                mu: mu.to_string(),
                sigma: sigma.to_string(),
            },
        },
    }
}
