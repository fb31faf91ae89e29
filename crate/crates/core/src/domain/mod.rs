//! The image domain through its boundary polyline and its radial
//! cross-sections, and circular symmetrization of those cross-sections.

mod arcs;
mod curve;
mod profile;

pub use arcs::ArcSet;
pub use curve::{point_segment_distance, signed_area, BoundaryCurve, MIN_VERTICES};
pub use profile::{
    chebyshev_radii, radial_profile, slice_at_radius, RadialProfile, RadialSlice, MIN_SLICES,
};
