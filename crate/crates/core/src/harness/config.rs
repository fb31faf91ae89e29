use serde::{Deserialize, Serialize};

use crate::domain::{MIN_SLICES, MIN_VERTICES};
use crate::error::{Error, Result};
use crate::series::MeanFunction;

/// Resolutions and tolerances of one pipeline run.
///
/// `None` fields take defaults derived from the others: the working radius
/// falls back to the input series' own radius, the extraction radius to
/// `10^(-6/N)` clamped to `[0.8, 0.95]`, `samples` to `max(256, 8 N)`, and
/// the witness margin to `1e-3 max |a_n|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub rho: Option<f64>,
    pub boundary_vertices: usize,
    pub slices: usize,
    pub degree: usize,
    pub extract_radius: Option<f64>,
    pub samples: Option<usize>,
    pub identity_rel_tol: f64,
    pub witness_delta: Option<f64>,
    pub reality_eps: f64,
    pub means: Vec<MeanFunction>,
    pub mean_radii: Vec<f64>,
    pub mean_samples: usize,
    /// Re-run the whole pipeline at doubled resolution whenever a witness is
    /// found, and keep it only if it survives.
    pub confirm_witness: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            rho: None,
            boundary_vertices: 1024,
            slices: 512,
            degree: 64,
            extract_radius: None,
            samples: None,
            identity_rel_tol: 1e-2,
            witness_delta: None,
            reality_eps: 1e-4,
            means: vec![MeanFunction::Exp, MeanFunction::Exp2],
            mean_radii: vec![0.3, 0.6, 0.9],
            mean_samples: 512,
            confirm_witness: false,
        }
    }
}

impl PipelineConfig {
    pub fn sample_count(&self) -> usize {
        self.samples.unwrap_or_else(|| (8 * self.degree).max(256))
    }

    /// Radius of the circle on which `A_n` are extracted; the default keeps
    /// `r^N >= 1e-6` so that sample roundoff is not amplified past `1e6`.
    pub fn extraction_radius(&self) -> f64 {
        self.extract_radius.unwrap_or_else(|| {
            1e-6f64
                .powf(1.0 / self.degree.max(1) as f64)
                .clamp(0.8, 0.95)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if let Some(rho) = self.rho {
            if !(rho > 0.0 && rho <= 1.0) {
                return bad(format!("rho = {rho} is not in (0, 1]"));
            }
        }
        if self.boundary_vertices < MIN_VERTICES {
            return bad(format!(
                "boundary vertices {} < {MIN_VERTICES}",
                self.boundary_vertices
            ));
        }
        if self.slices < MIN_SLICES {
            return bad(format!("slices {} < {MIN_SLICES}", self.slices));
        }
        if self.degree < 1 {
            return bad("degree must be at least 1".into());
        }
        if let Some(r) = self.extract_radius {
            if !(r > 0.0 && r < 1.0) {
                return bad(format!("extraction radius {r} is not in (0, 1)"));
            }
        }
        if self.sample_count() < 2 * self.degree + 2 {
            return bad(format!(
                "{} samples cannot resolve degree {}",
                self.sample_count(),
                self.degree
            ));
        }
        if !(self.identity_rel_tol > 0.0) {
            return bad("identity tolerance must be positive".into());
        }
        if let Some(d) = self.witness_delta {
            if !(d > 0.0) {
                return bad(format!("witness margin {d} must be positive"));
            }
        }
        if !(self.reality_eps > 0.0) {
            return bad("reality tolerance must be positive".into());
        }
        if let Some(r) = self.mean_radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return bad(format!("integral-mean radius {r} is not in (0, 1)"));
        }
        if self.mean_samples < 16 {
            return bad("integral means need at least 16 nodes".into());
        }
        Ok(())
    }

    /// The same run with boundary vertices, slices and both sample counts
    /// doubled. Degree and extraction radius stay fixed.
    pub fn doubled(&self) -> Self {
        PipelineConfig {
            boundary_vertices: 2 * self.boundary_vertices,
            slices: 2 * self.slices,
            samples: Some(2 * self.sample_count()),
            mean_samples: 2 * self.mean_samples,
            ..self.clone()
        }
    }
}
