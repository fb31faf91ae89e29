//! Numerical Riemann maps by the geodesic zipper algorithm.

mod map;
mod step;

pub use map::{Normalization, ZipperMap};
pub use step::ElementaryStep;
