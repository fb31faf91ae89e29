use std::path::PathBuf;

use circsym_core::PipelineConfig;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "circsym",
    version,
    about = "Circular symmetrization and coefficient checks for univalent maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Radial profiles and boundary polylines of D and D*.
    Symmetrize(CommonArgs),
    /// Build the normalized map onto D* and export it with its coefficients.
    Map(CommonArgs),
    /// Run the full two-resolution verification.
    Verify(CommonArgs),
    /// Run the verification over a parameterized family.
    Sweep(CommonArgs),
    /// Re-export tables and the summary of an existing report.
    Report(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Symmetrize(_) => "symmetrize",
            Command::Map(_) => "map",
            Command::Verify(_) => "verify",
            Command::Sweep(_) => "sweep",
            Command::Report(_) => "report",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Symmetrize(a)
            | Command::Map(a)
            | Command::Verify(a)
            | Command::Sweep(a)
            | Command::Report(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Input JSON: a series, a sweep spec or a report, depending on the subcommand.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory; created on success.
    #[arg(long)]
    pub out: PathBuf,
    /// Working radius.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Boundary vertices M.
    #[arg(long)]
    pub boundary: Option<usize>,
    /// Radial slices m.
    #[arg(long)]
    pub slices: Option<usize>,
    /// Truncation degree N.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Coefficient extraction radius.
    #[arg(long = "extract-radius")]
    pub extract_radius: Option<f64>,
    /// Samples on the extraction circle.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Witness margin.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Relative tolerance of the area identity.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Confirm any witness with a second run at doubled resolution.
    #[arg(long = "double-check")]
    pub double_check: bool,
}

impl CommonArgs {
    /// `base` with every flag that was given applied on top.
    pub fn apply(&self, base: PipelineConfig) -> PipelineConfig {
        PipelineConfig {
            rho: self.rho.or(base.rho),
            boundary_vertices: self.boundary.unwrap_or(base.boundary_vertices),
            slices: self.slices.unwrap_or(base.slices),
            degree: self.degree.unwrap_or(base.degree),
            extract_radius: self.extract_radius.or(base.extract_radius),
            samples: self.samples.or(base.samples),
            witness_delta: self.delta.or(base.witness_delta),
            identity_rel_tol: self.tol.unwrap_or(base.identity_rel_tol),
            confirm_witness: self.double_check || base.confirm_witness,
            ..base
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_only_what_is_given() {
        let cli = Cli::try_parse_from([
            "circsym",
            "verify",
            "--input",
            "f.json",
            "--out",
            "o",
            "--boundary",
            "2048",
            "--degree",
            "128",
            "--double-check",
        ])
        .unwrap();
        let cfg = cli.command.args().apply(PipelineConfig::default());
        assert_eq!(cfg.boundary_vertices, 2048);
        assert_eq!(cfg.degree, 128);
        assert!(cfg.confirm_witness);
        assert_eq!(cfg.slices, PipelineConfig::default().slices);
    }

    #[test]
    fn input_and_out_are_required() {
        assert!(Cli::try_parse_from(["circsym", "verify", "--input", "f.json"]).is_err());
    }
}
