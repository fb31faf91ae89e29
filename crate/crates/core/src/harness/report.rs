use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use crate::series::{LittlewoodRow, MeanFunction, PowerSeries};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One row of the `|a_n|` versus `|A_n|` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub abs_a: f64,
    pub abs_big_a: f64,
    /// `|A_n| - |a_n|`
    pub diff: f64,
    /// Error estimate of `|A_n|` from resolution doubling.
    pub err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaIdentity {
    /// `sum n |a_n|^2`
    pub lhs: f64,
    /// `sum n |A_n|^2`
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

/// The four independent area values of `D` and `D*`, all in units of area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaTriple {
    pub dirichlet_f: f64,
    pub dirichlet_big_f: f64,
    pub profile: f64,
    pub profile_symmetrized: f64,
    pub shoelace: f64,
    pub shoelace_symmetrized: f64,
}

impl AreaTriple {
    /// Largest pairwise relative disagreement among the Dirichlet area of
    /// `f`, the polar-profile area and the shoelace area.
    pub fn max_relative_spread(&self) -> f64 {
        let v = [self.dirichlet_f, self.profile, self.shoelace];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((v[i] - v[j]).abs() / v[i].abs().max(v[j].abs()));
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaCheck {
    pub identity: AreaIdentity,
    pub residual_doubled: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaymanCheck {
    pub abs_a1: f64,
    pub big_a1: f64,
    pub error_estimate: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterCheck {
    pub abs_a0: f64,
    pub big_a0: f64,
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealityCheck {
    pub max_imag: f64,
    pub max_abs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanRow {
    pub phi: MeanFunction,
    pub r: f64,
    pub mean_f: f64,
    pub mean_big_f: f64,
    /// `mean_F - mean_f`
    pub margin: f64,
    pub error_estimate: f64,
    /// Closed-form `2 pi sum |c_n|^2 r^{2n}` for the `e^{2x}` rows.
    pub parseval_f: Option<f64>,
    pub parseval_big_f: Option<f64>,
    pub underflow: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `|a_{n1}| < |A_{n1}|`
    pub n1: usize,
    /// `|A_{n2}| < |a_{n2}|`
    pub n2: usize,
    pub margin1: f64,
    pub margin2: f64,
    pub err1: f64,
    pub err2: f64,
    /// Outcome of the doubled-resolution re-run, when requested.
    pub confirmed: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// All `| |a_n| - |A_n| |` within three error estimates.
    EqualitySuspected,
    /// A certified pair `(n1, n2)` exists.
    WitnessFound,
    /// Neither: margins too small compared with the numerical error.
    Inconclusive,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::EqualitySuspected => "equality",
            Classification::WitnessFound => "witness",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapDiagnostics {
    pub steps: usize,
    /// `|F(0) - target|`
    pub center_error: f64,
    /// `arg F'(0)` by a central difference.
    pub derivative_arg: f64,
    /// Largest `|F^{-1}(F(z)) - z|` over test points with `|z| <= 0.95`.
    pub round_trip_error: f64,
    pub cauchy_riemann_residual: f64,
    /// Largest distance from `F(0.999 e^{i theta})` to the boundary polyline.
    pub boundary_distance: f64,
    pub vertex_spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub config: PipelineConfig,
    /// Working radius actually used.
    pub rho: f64,
    pub input: PowerSeries,
    /// `f(rho z)`: the function whose coefficients are `a_n`.
    pub working: PowerSeries,
    /// Taylor coefficients `A_n` of the symmetrized map (base resolution).
    pub symmetrized: PowerSeries,
    pub delta: f64,
    pub coefficients: Vec<CoefficientRow>,
    pub area: AreaCheck,
    pub areas: AreaTriple,
    pub center: CenterCheck,
    pub hayman: HaymanCheck,
    pub reality: RealityCheck,
    pub means: Vec<MeanRow>,
    pub littlewood: Option<Vec<LittlewoodRow>>,
    pub witness: Option<Witness>,
    pub classification: Classification,
    pub diagnostics: MapDiagnostics,
    pub flags: Vec<String>,
}

impl VerificationReport {
    pub fn max_coefficient_gap(&self, upto: usize) -> f64 {
        self.coefficients
            .iter()
            .filter(|r| r.n <= upto)
            .map(|r| r.diff.abs())
            .fold(0.0, f64::max)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.area.identity.pass
            && self.center.pass
            && self.hayman.pass
            && self.reality.pass
            && self.means.iter().all(|m| m.pass)
            && self.littlewood.iter().flatten().all(|r| r.pass)
    }

    /// Multi-line human summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let id = &self.area.identity;
        s.push_str(&format!(
            "area identity: sum n|a_n|^2 = {:.10}, sum n|A_n|^2 = {:.10}, residual {:.3e} (doubled {:.3e}) [{}]\n",
            id.lhs,
            id.rhs,
            id.residual,
            self.area.residual_doubled,
            pass_label(id.pass)
        ));
        s.push_str(&format!(
            "center: |a_0| = {:.12}, A_0 = {:.12} [{}]\n",
            self.center.abs_a0,
            self.center.big_a0,
            pass_label(self.center.pass)
        ));
        s.push_str(&format!(
            "hayman: |a_1| = {:.10} <= A_1 = {:.10} (err {:.2e}) [{}]\n",
            self.hayman.abs_a1,
            self.hayman.big_a1,
            self.hayman.error_estimate,
            pass_label(self.hayman.pass)
        ));
        let means_ok = self.means.iter().filter(|m| m.pass).count();
        s.push_str(&format!(
            "integral means: {means_ok}/{} rows pass\n",
            self.means.len()
        ));
        match self.classification {
            Classification::EqualitySuspected => s.push_str("equality case suspected\n"),
            Classification::WitnessFound => {
                let w = self.witness.expect("witness present");
                s.push_str(&format!(
                    "witness n1={}, n2={} with margins {:.6e}, {:.6e} (delta {:.3e})\n",
                    w.n1, w.n2, w.margin1, w.margin2, self.delta
                ));
            }
            Classification::Inconclusive => {
                s.push_str("inconclusive: margins within numerical error\n")
            }
        }
        s
    }

    /// Coefficient table as `n,abs_a,abs_A,diff,err`.
    pub fn write_coefficients_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,abs_a,abs_A,diff,err")?;
        for r in &self.coefficients {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.n, r.abs_a, r.abs_big_a, r.diff, r.err
            )?;
        }
        Ok(())
    }

    /// Integral-mean table as `phi,r,mean_f,mean_F,margin,err,pass`.
    pub fn write_means_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "phi,r,mean_f,mean_F,margin,err,pass")?;
        for m in &self.means {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                m.phi.label(),
                m.r,
                m.mean_f,
                m.mean_big_f,
                m.margin,
                m.error_estimate,
                m.pass
            )?;
        }
        Ok(())
    }
}

fn pass_label(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
