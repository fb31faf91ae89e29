//! Fixtures shared by the criterion benchmarks.

use circsym_core::{BoundaryCurve, Complex64, PipelineConfig, PowerSeries};

/// `4 + z + 0.4 e^{i beta} z^2`.
pub fn quadratic(beta: f64) -> PowerSeries {
    PowerSeries::new(
        vec![
            Complex64::new(4.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(0.4, beta),
        ],
        1.0,
    )
    .expect("valid coefficients")
}

pub fn quadratic_boundary(vertices: usize) -> BoundaryCurve {
    BoundaryCurve::from_series(&quadratic(std::f64::consts::FRAC_PI_2), vertices)
        .expect("simple curve")
}

/// A reduced configuration that keeps one pipeline run well under a second.
pub fn small_config() -> PipelineConfig {
    PipelineConfig {
        boundary_vertices: 256,
        slices: 128,
        degree: 16,
        ..Default::default()
    }
}
