//! Command-line surface: `quantile`, `classify`, `curve` and `verify`.
//!
//! Commands return an [`Output`] instead of printing, so they can be driven
//! in-process. Exit codes: 0 success, 1 check failure, 2 parse error or
//! missing file, 3 domain error, 4 internal contradiction, 5 unwritable output.

pub mod document;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::classifier::{classify, ClassificationReport};
use crate::distribution::Distribution;
use crate::error::Error;
use crate::mixture::MixtureSpec;
use crate::par::Execution;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::split_solver::{theorem_quantile, QuantileSolution};
use crate::verification::{run_suite, InstanceGenConfig};

pub use document::{Literal, Model, SpecDocument};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_CONTRADICTION: u8 = 4;
pub const EXIT_OUTPUT: u8 = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// One JSON document per invocation.
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "mixquant",
    version,
    about = "Quantiles of two-component mixtures"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantile s_p with the split point (alpha*, beta*).
    Quantile {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        p: String,
    },
    /// Case-table cell of s_p and the relations that cell asserts.
    Classify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        p: String,
    },
    /// CDF and quantile tables as CSV.
    Curve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check generated piecewise instances against independent oracles.
    Verify {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Worker threads; 1 runs sequentially, 0 or absent uses all cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// What a command writes and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Output {
        Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: u8, message: impl Into<String>) -> Output {
        Output {
            code,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidDistribution(_) => EXIT_PARSE,
        Error::LevelOutOfRange(..)
        | Error::DegenerateWeight(_)
        | Error::MixedPair(_)
        | Error::InvalidArgument(_) => EXIT_DOMAIN,
        Error::Contradiction(_) | Error::GridExhausted(_) | Error::NoSampler(_) => {
            EXIT_CONTRADICTION
        }
    }
}

impl From<Error> for Output {
    fn from(e: Error) -> Output {
        Output::fail(error_code(&e), e.to_string())
    }
}

pub fn run(cli: &Cli) -> Output {
    let result = match &cli.command {
        Command::Quantile { spec, p } => cmd_quantile(spec, p, cli.format),
        Command::Classify { spec, p } => cmd_classify(spec, p, cli.format),
        Command::Curve {
            spec,
            from,
            to,
            steps,
            out,
        } => cmd_curve(spec, from, to, *steps, out, cli.format),
        Command::Verify { count, seed, jobs } => cmd_verify(*count, *seed, *jobs, cli.format),
    };
    result.unwrap_or_else(|o| o)
}

type CmdResult = Result<Output, Output>;

fn load(path: &Path) -> Result<SpecDocument, Output> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Output::fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    Ok(SpecDocument::parse(&text)?)
}

fn parse_number(text: &str, what: &str) -> Result<Rational, Output> {
    parse_rational(text).map_err(|e| Output::fail(EXIT_PARSE, format!("{what}: {e}")))
}

fn parse_level(text: &str) -> Result<Rational, Output> {
    let p = parse_number(text, "p")?;
    if p <= Rational::zero() || p >= Rational::one() {
        return Err(Error::LevelOutOfRange(text.to_string(), "(0, 1)").into());
    }
    Ok(p)
}

pub fn cmd_quantile(spec: &Path, p: &str, format: Format) -> CmdResult {
    let doc = load(spec)?;
    let p = parse_level(p)?;
    let text = match doc.model()? {
        Model::Exact(m) => render_solution(&theorem_quantile(&m, &p)?, format),
        Model::Float(m) => render_solution(&theorem_quantile(&m, &p.to_f64())?, format),
    };
    Ok(Output::ok(text))
}

fn render_solution<S: Scalar>(s: &QuantileSolution<S>, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for (k, v) in [
                ("s_p", s.s_p.render()),
                ("alpha*", s.alpha_star.render()),
                ("beta*", s.beta_star.render()),
                ("F_X^-1(alpha*)", s.x_quantile.render()),
                ("F_Y^-1(beta*)", s.y_quantile.render()),
                ("x_attains", s.x_attains.to_string()),
                ("y_attains", s.y_attains.to_string()),
                ("clamped", s.clamped.to_string()),
            ] {
                let _ = writeln!(out, "{k:<16}{v}");
            }
            out
        }
        Format::Machine => {
            let doc = json!({
                "s_p": s.s_p.render(),
                "alpha_star": s.alpha_star.render(),
                "beta_star": s.beta_star.render(),
                "x_quantile": s.x_quantile.render(),
                "y_quantile": s.y_quantile.render(),
                "x_attains": s.x_attains,
                "y_attains": s.y_attains,
                "clamped": s.clamped,
            });
            format!("{doc}\n")
        }
    }
}

pub fn cmd_classify(spec: &Path, p: &str, format: Format) -> CmdResult {
    let doc = load(spec)?;
    let p = parse_level(p)?;
    if doc.is_mixed() {
        return Err(Error::MixedPair("classification").into());
    }
    let (text, all_hold) = match doc.model()? {
        Model::Exact(m) => classify_and_render(&m, &p, format)?,
        Model::Float(m) => classify_and_render(&m, &p.to_f64(), format)?,
    };
    let code = if all_hold { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Output {
        code,
        stdout: text,
        stderr: String::new(),
    })
}

fn classify_and_render<D: Distribution>(
    m: &MixtureSpec<D>,
    p: &D::Scalar,
    format: Format,
) -> Result<(String, bool), Output> {
    let (report, _) = classify(m, p)?;
    Ok((render_report(&report, format), report.all_relations_hold()))
}

fn render_report<S: Scalar>(r: &ClassificationReport<S>, format: Format) -> String {
    match format {
        Format::Text => {
            let dash = || "-".to_string();
            let mut out = String::new();
            for (k, v) in [
                ("cell", r.label.cell()),
                (
                    "subcase",
                    r.label.subcase.map(|s| s.to_string()).unwrap_or_else(dash),
                ),
                ("s_p", r.s_p.render()),
                (
                    "f_flat_witness",
                    r.f_flat_witness
                        .as_ref()
                        .map(Scalar::render)
                        .unwrap_or_else(dash),
                ),
                (
                    "g_flat_witness",
                    r.g_flat_witness
                        .as_ref()
                        .map(Scalar::render)
                        .unwrap_or_else(dash),
                ),
            ] {
                let _ = writeln!(out, "{k:<16}{v}");
            }
            for rel in &r.relations_checked {
                let verdict = if rel.holds { "holds" } else { "FAILS" };
                let _ = writeln!(out, "  {:<26}{verdict}", rel.relation);
            }
            out
        }
        Format::Machine => format!("{}\n", r.to_json()),
    }
}

/// Shortest round-trip decimal of a double, `inf`/`-inf` for infinities.
fn num(v: f64) -> String {
    format!("{v}")
}

pub fn cmd_curve(
    spec: &Path,
    from: &str,
    to: &str,
    steps: usize,
    out: &Path,
    format: Format,
) -> CmdResult {
    let doc = load(spec)?;
    let (from, to) = (parse_number(from, "from")?, parse_number(to, "to")?);
    if from >= to {
        return Err(Error::InvalidArgument("curve needs from < to".into()).into());
    }
    if steps < 2 {
        return Err(Error::InvalidArgument("curve needs at least 2 steps".into()).into());
    }
    let table = match doc.model()? {
        Model::Exact(m) => curve_table(&m, &from, &to, steps)?,
        Model::Float(m) => curve_table(&m, &from.to_f64(), &to.to_f64(), steps)?,
    };
    std::fs::write(out, &table)
        .map_err(|e| Output::fail(EXIT_OUTPUT, format!("cannot write {}: {e}", out.display())))?;
    let rows = 2 * steps;
    let text = match format {
        Format::Text => format!("wrote {rows} rows to {}\n", out.display()),
        Format::Machine => format!(
            "{}\n",
            json!({"out": out.display().to_string(), "rows": rows})
        ),
    };
    Ok(Output::ok(text))
}

/// Two CSV tables separated by a blank line: `x,F,G,F_S` on the x-grid and
/// `p,FX^-1,FY^-1,FS^-1` on `p_i = (i + 1)/(steps + 1)`.
fn curve_table<D: Distribution>(
    m: &MixtureSpec<D>,
    from: &D::Scalar,
    to: &D::Scalar,
    steps: usize,
) -> Result<String, Output> {
    let mut out = String::from("x,F,G,F_S\n");
    let width = (to.clone() - from.clone()) / D::Scalar::from_i64(steps as i64 - 1);
    for i in 0..steps {
        let x = if i + 1 == steps {
            to.clone()
        } else {
            from.clone() + width.clone() * D::Scalar::from_i64(i as i64)
        };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(x.to_f64()),
            num(m.x().cdf(&x).to_f64()),
            num(m.y().cdf(&x).to_f64()),
            num(m.cdf(&x).to_f64())
        );
    }
    out.push_str("\np,FX^-1,FY^-1,FS^-1\n");
    for i in 0..steps {
        let p = D::Scalar::from_i64(i as i64 + 1) / D::Scalar::from_i64(steps as i64 + 1);
        let s = theorem_quantile(m, &p)?;
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(p.to_f64()),
            num(m.x().quantile(&p)?.to_f64()),
            num(m.y().quantile(&p)?.to_f64()),
            num(s.s_p.to_f64())
        );
    }
    Ok(out)
}

pub fn cmd_verify(count: usize, seed: u64, jobs: Option<usize>, format: Format) -> CmdResult {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()).into());
    }
    let outcome = run_suite(
        &InstanceGenConfig::with_seed(seed),
        count,
        Execution::from_jobs(jobs),
    )?;
    let (failures, impossible) = (outcome.failures(), outcome.impossible_observed());
    let text = match format {
        Format::Text => {
            let mut out = String::new();
            for line in outcome.summary_lines() {
                let _ = writeln!(out, "{line}");
            }
            out.push_str("census\n");
            for (cell, n) in &outcome.census {
                let _ = writeln!(out, "  {cell:<16}{n}");
            }
            let _ = writeln!(out, "instances {count}");
            let _ = writeln!(out, "failures {failures}");
            let _ = writeln!(out, "impossible cells observed {impossible}");
            out
        }
        Format::Machine => {
            let failed: Vec<_> = outcome
                .reports
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.passed())
                .map(|(i, r)| json!({"index": i, "cell": r.cell, "failed_checks": r.failed_checks(), "errors": r.errors}))
                .collect();
            let doc = json!({
                "seed": seed,
                "count": count,
                "failures": failures,
                "impossible_observed": impossible,
                "census": outcome.census,
                "failed": failed,
            });
            format!("{doc}\n")
        }
    };
    let code = if failures == 0 && impossible == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok(Output {
        code,
        stdout: text,
        stderr: String::new(),
    })
}
