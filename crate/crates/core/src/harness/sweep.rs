use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use super::pipeline::run_pipeline;
use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// A one-parameter family of input series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `center + linear z + modulus e^{i beta} z^2`, parameter `beta`.
    Quadratic {
        center: Complex64,
        linear: Complex64,
        modulus: f64,
    },
    /// `radius e^{i beta} + scale z`, parameter `beta`.
    RotatedDisk { radius: f64, scale: f64 },
    /// A fixed list; the parameter is the list index.
    Explicit { members: Vec<PowerSeries> },
}

impl Family {
    pub fn member(&self, parameter: f64) -> Result<PowerSeries> {
        match self {
            Family::Quadratic {
                center,
                linear,
                modulus,
            } => PowerSeries::new(
                vec![*center, *linear, Complex64::from_polar(*modulus, parameter)],
                1.0,
            ),
            Family::RotatedDisk { radius, scale } => PowerSeries::new(
                vec![
                    Complex64::from_polar(*radius, parameter),
                    Complex64::new(*scale, 0.0),
                ],
                1.0,
            ),
            Family::Explicit { members } => {
                let idx = parameter as usize;
                if parameter < 0.0 || parameter.fract() != 0.0 || idx >= members.len() {
                    return Err(Error::InvalidConfig(format!(
                        "parameter {parameter} is not an index into {} members",
                        members.len()
                    )));
                }
                Ok(members[idx].clone())
            }
        }
    }
}

/// Parameter values, either listed or `count` equispaced points of
/// `[start, end]` (`start` alone when `count = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Linspace { start: f64, end: f64, count: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Linspace { start, end, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

/// `{family, grid, config}` as read from a sweep file. For explicit families
/// the grid defaults to every member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub grid: Option<Grid>,
    #[serde(default)]
    pub config: Option<PipelineConfig>,
}

impl SweepSpec {
    pub fn parameters(&self) -> Vec<f64> {
        match (&self.grid, &self.family) {
            (Some(g), _) => g.values(),
            (None, Family::Explicit { members }) => (0..members.len()).map(|i| i as f64).collect(),
            (None, _) => Vec::new(),
        }
    }

    /// The quadratic corpus `4 + z + 0.4 e^{i beta} z^2` on `beta = k pi / (count - 1)`.
    pub fn quadratic_corpus(count: usize) -> Self {
        SweepSpec {
            family: Family::Quadratic {
                center: Complex64::new(4.0, 0.0),
                linear: Complex64::new(1.0, 0.0),
                modulus: 0.4,
            },
            grid: Some(Grid::Linspace {
                start: 0.0,
                end: PI,
                count,
            }),
            config: None,
        }
    }
}

/// One line of a sweep: the member's parameter and either its report
/// summary or the error that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub parameter: f64,
    pub classification: Option<String>,
    pub residual: Option<f64>,
    pub residual_doubled: Option<f64>,
    pub max_gap: Option<f64>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub margin1: Option<f64>,
    pub margin2: Option<f64>,
    pub all_checks_pass: Option<bool>,
    pub error: Option<String>,
}

impl SweepRow {
    fn from_report(index: usize, parameter: f64, r: &VerificationReport) -> Self {
        SweepRow {
            index,
            parameter,
            classification: Some(r.classification.label().to_string()),
            residual: Some(r.area.identity.residual),
            residual_doubled: Some(r.area.residual_doubled),
            max_gap: Some(r.max_coefficient_gap(r.config.degree)),
            n1: r.witness.map(|w| w.n1),
            n2: r.witness.map(|w| w.n2),
            margin1: r.witness.map(|w| w.margin1),
            margin2: r.witness.map(|w| w.margin2),
            all_checks_pass: Some(r.all_checks_pass()),
            error: None,
        }
    }

    fn from_error(index: usize, parameter: f64, e: &Error) -> Self {
        let kind = match e.kind() {
            crate::ErrorKind::Input => "input-error",
            crate::ErrorKind::Scope => "scope-error",
            crate::ErrorKind::Numerical => "numerical-error",
        };
        SweepRow {
            index,
            parameter,
            classification: None,
            residual: None,
            residual_doubled: None,
            max_gap: None,
            n1: None,
            n2: None,
            margin1: None,
            margin2: None,
            all_checks_pass: None,
            error: Some(format!("{kind}: {e}")),
        }
    }
}

/// Runs the pipeline on every grid point. Member failures become rows with
/// an `error`; rows come back in grid order.
pub fn sweep(spec: &SweepSpec, cfg: &PipelineConfig) -> Vec<SweepRow> {
    let params = spec.parameters();
    params
        .par_iter()
        .enumerate()
        .map(
            |(i, &p)| match spec.family.member(p).and_then(|f| run_pipeline(&f, cfg)) {
                Ok(report) => SweepRow::from_report(i, p, &report),
                Err(e) => {
                    log::warn!("sweep member {i} (parameter {p}) failed: {e}");
                    SweepRow::from_error(i, p, &e)
                }
            },
        )
        .collect()
}

/// Fraction of successful rows classified as witnesses.
pub fn witness_frequency(rows: &[SweepRow]) -> Option<f64> {
    let done: Vec<_> = rows.iter().filter(|r| r.error.is_none()).collect();
    if done.is_empty() {
        return None;
    }
    let hits = done
        .iter()
        .filter(|r| r.classification.as_deref() == Some("witness"))
        .count();
    Some(hits as f64 / done.len() as f64)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "index,parameter,classification,residual,residual_doubled,max_gap,n1,n2,margin1,margin2,all_checks_pass,error"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            r.parameter,
            opt(&r.classification),
            opt(&r.residual),
            opt(&r.residual_doubled),
            opt(&r.max_gap),
            opt(&r.n1),
            opt(&r.n2),
            opt(&r.margin1),
            opt(&r.margin2),
            opt(&r.all_checks_pass),
            csv_text(&opt(&r.error)),
        )?;
    }
    Ok(())
}
