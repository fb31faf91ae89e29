//! Numerical circular symmetrization of univalent functions.
//!
//! Given a univalent `f` on the unit disk, the pipeline builds the image
//! domain `D = f(U)`, its circular symmetrization `D*`, the Riemann map `F`
//! of the disk onto `D*` normalized by `F(0) = |f(0)|`, `F'(0) > 0`, and
//! compares the Taylor coefficients of `f` and `F`.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod error;
pub mod harness;
pub mod series;
pub mod zipper;

pub use domain::{ArcSet, BoundaryCurve, RadialProfile, RadialSlice};
pub use error::{Error, ErrorKind, Result};
pub use harness::{run_pipeline, Classification, PipelineConfig, SweepSpec, VerificationReport};
pub use num_complex::Complex64;
pub use series::{MeanFunction, PowerSeries};
pub use zipper::{ElementaryStep, ZipperMap};
