use std::f64::consts::{PI, TAU};
use std::io::Write;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::arcs::ArcSet;
use super::curve::{point_segment_distance, BoundaryCurve};
use crate::error::{Error, Result};

/// Minimum number of radii in a profile built from a curve.
pub const MIN_SLICES: usize = 16;

/// The angular cross-section `D(t)` of a domain at radius `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSlice {
    pub t: f64,
    pub arcs: ArcSet,
}

impl RadialSlice {
    pub fn measure(&self) -> f64 {
        self.arcs.measure()
    }
}

/// Cross-sections of a domain over increasing radii.
///
/// `support`, when known, is the closed radius interval outside of which all
/// cross-sections are empty; the slices then lie strictly inside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    slices: Vec<RadialSlice>,
    contains_origin: bool,
    support: Option<(f64, f64)>,
}

impl RadialProfile {
    pub fn new(
        slices: Vec<RadialSlice>,
        contains_origin: bool,
        support: Option<(f64, f64)>,
    ) -> Result<Self> {
        if let Some(s) = slices.iter().find(|s| !(s.t > 0.0 && s.t.is_finite())) {
            return Err(Error::Precondition(format!(
                "slice radius {} must be finite and positive",
                s.t
            )));
        }
        if slices.windows(2).any(|w| w[0].t >= w[1].t) {
            return Err(Error::Precondition(
                "slice radii must be strictly increasing".into(),
            ));
        }
        if let Some((lo, hi)) = support {
            if !(lo >= 0.0 && lo < hi) {
                return Err(Error::Precondition(format!(
                    "support ({lo}, {hi}) is not an interval"
                )));
            }
            if slices.iter().any(|s| s.t <= lo || s.t >= hi) {
                return Err(Error::Precondition(
                    "slices must lie strictly inside the support".into(),
                ));
            }
        }
        if contains_origin {
            if let Some(first) = slices.first() {
                if !first.arcs.is_full() {
                    return Err(Error::Precondition(
                        "a profile containing the origin must start with full circles".into(),
                    ));
                }
            }
        }
        Ok(RadialProfile {
            slices,
            contains_origin,
            support,
        })
    }

    pub fn empty() -> Self {
        RadialProfile {
            slices: Vec::new(),
            contains_origin: false,
            support: None,
        }
    }

    pub fn slices(&self) -> &[RadialSlice] {
        &self.slices
    }

    pub fn contains_origin(&self) -> bool {
        self.contains_origin
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    /// Circular symmetrization: each cross-section becomes the single arc
    /// `{|theta| < alpha / 2}` of the same measure.
    pub fn symmetrize(&self) -> RadialProfile {
        RadialProfile {
            slices: self
                .slices
                .iter()
                .map(|s| RadialSlice {
                    t: s.t,
                    arcs: ArcSet::symmetric(s.measure()),
                })
                .collect(),
            contains_origin: self.contains_origin,
            support: self.support,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.slices
            .iter()
            .all(|s| s.arcs == ArcSet::symmetric(s.measure()))
    }

    /// `int t |D(t)| dt` by the trapezoid rule over the slice radii, with
    /// zero cross-section at the ends of a known support.
    pub fn area(&self) -> f64 {
        let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(self.slices.len() + 2);
        if let Some((lo, _)) = self.support {
            nodes.push((lo, 0.0));
        }
        nodes.extend(self.slices.iter().map(|s| (s.t, s.t * s.measure())));
        if let Some((_, hi)) = self.support {
            nodes.push((hi, 0.0));
        }
        nodes
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    /// Boundary of the symmetrized domain: `t e^{-i alpha/2}` for increasing
    /// `t`, then `t e^{+i alpha/2}` back down. Only Jordan domains are
    /// supported: the origin must lie outside and every interior
    /// cross-section must be a proper nonempty subset of the circle.
    pub fn symmetrized_boundary(&self) -> Result<BoundaryCurve> {
        if self.contains_origin {
            return Err(Error::OutOfScope(
                "domain contains the origin; its symmetrization has a slit boundary".into(),
            ));
        }
        let first = self.slices.iter().position(|s| !s.arcs.is_empty());
        let last = self.slices.iter().rposition(|s| !s.arcs.is_empty());
        let (first, last) = match (first, last) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::OutOfScope(
                    "profile has no nonempty cross-section".into(),
                ))
            }
        };
        let active = &self.slices[first..=last];
        if let Some(s) = active
            .iter()
            .find(|s| s.arcs.is_empty() || s.arcs.is_full())
        {
            return Err(Error::OutOfScope(format!(
                "cross-section at t = {} has measure {}; expected a proper arc",
                s.t,
                s.measure()
            )));
        }
        let half = |s: &RadialSlice| 0.5 * s.measure();
        let lower = active.iter().map(|s| Complex64::from_polar(s.t, -half(s)));
        let upper = active
            .iter()
            .rev()
            .map(|s| Complex64::from_polar(s.t, half(s)));

        let mut pts: Vec<Complex64> = Vec::with_capacity(2 * active.len() + 2);
        match self.support {
            Some((lo, hi)) => {
                pts.push(Complex64::new(lo, 0.0));
                pts.extend(lower);
                pts.push(Complex64::new(hi, 0.0));
                pts.extend(upper);
            }
            None => {
                // Without a known support the end slices are edges of the
                // domain: close them along their circles.
                let spacing = active
                    .windows(2)
                    .map(|w| w[1].t - w[0].t)
                    .fold(f64::INFINITY, f64::min)
                    .max(1e-12);
                let arc_points = |s: &RadialSlice, rising: bool| -> Vec<Complex64> {
                    let h = half(s);
                    let k = ((2.0 * h * s.t) / spacing).ceil().max(1.0) as usize;
                    (1..k)
                        .map(|j| {
                            let frac = j as f64 / k as f64;
                            let ang = if rising {
                                -h + 2.0 * h * frac
                            } else {
                                h - 2.0 * h * frac
                            };
                            Complex64::from_polar(s.t, ang)
                        })
                        .collect()
                };
                pts.extend(lower);
                pts.extend(arc_points(&active[active.len() - 1], true));
                pts.extend(upper);
                pts.extend(arc_points(&active[0], false));
            }
        }
        let curve = BoundaryCurve::new(pts)?;
        let area = curve.signed_area();
        if area <= 0.0 {
            return Err(Error::Orientation(area));
        }
        Ok(curve)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,alpha,arcs")?;
        for s in &self.slices {
            writeln!(
                out,
                "{:.16e},{:.16e},{}",
                s.t,
                s.measure(),
                s.arcs.to_field()
            )?;
        }
        Ok(())
    }
}

/// `D(t) = {theta : t e^{i theta} in D}` for the domain bounded by `curve`.
///
/// Crossings of `|w| = t` are solved exactly on every edge; the circle is cut
/// at the crossing angles and each piece is kept iff an interior point of it
/// has winding number 1.
pub fn slice_at_radius(curve: &BoundaryCurve, t: f64) -> Result<ArcSet> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!(
            "slice radius {t} must be positive"
        )));
    }
    let mut angles = circle_crossings(curve, t);
    if angles.is_empty() {
        let inside = curve.winding_number(Complex64::new(t, 0.0))? == 1;
        return Ok(if inside {
            ArcSet::full()
        } else {
            ArcSet::empty()
        });
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let n = angles.len();
    let mut kept = Vec::new();
    for i in 0..n {
        let lo = angles[i];
        let hi = if i + 1 < n {
            angles[i + 1]
        } else {
            angles[0] + TAU
        };
        if hi - lo <= 0.0 {
            continue;
        }
        match arc_membership(curve, t, lo, hi) {
            Some(true) => kept.push((lo, hi)),
            Some(false) => {}
            None => warn!(
                "degenerate contact of |w| = {t} with the boundary on ({lo}, {hi}); arc dropped"
            ),
        }
    }
    Ok(ArcSet::from_arcs(kept))
}

/// Membership of the open arc `(lo, hi)` on `|w| = t`, probing a few
/// interior points in case the midpoint grazes the curve.
fn arc_membership(curve: &BoundaryCurve, t: f64, lo: f64, hi: f64) -> Option<bool> {
    [0.5, 0.25, 0.75, 0.125, 0.875].iter().find_map(|f| {
        let w = Complex64::from_polar(t, lo + f * (hi - lo));
        curve.winding_number(w).ok().map(|wn| wn == 1)
    })
}

/// Angles in `[0, 2 pi)` where the polyline meets the circle `|w| = t`.
fn circle_crossings(curve: &BoundaryCurve, t: f64) -> Vec<f64> {
    let t2 = t * t;
    let mut out = Vec::new();
    for (p, q) in curve.segments() {
        let d = q - p;
        let a = d.norm_sqr();
        let b = 2.0 * (p.re * d.re + p.im * d.im);
        let c = p.norm_sqr() - t2;
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        let qq = -0.5 * (b + b.signum() * sq);
        let mut roots = [f64::NAN; 2];
        if qq != 0.0 {
            roots = [qq / a, c / qq];
        } else if b == 0.0 {
            // symmetric case b = 0: roots are +-sqrt(-c/a)
            let r = (-c / a).max(0.0).sqrt();
            roots = [r, -r];
        }
        if disc == 0.0 {
            roots[1] = f64::NAN;
        }
        for s in roots {
            if (0.0..1.0).contains(&s) {
                let w = p + d * s;
                out.push(w.im.atan2(w.re).rem_euclid(TAU));
            }
        }
    }
    out
}

fn origin_distance(curve: &BoundaryCurve) -> f64 {
    curve
        .segments()
        .map(|(a, b)| point_segment_distance(Complex64::new(0.0, 0.0), a, b))
        .fold(f64::INFINITY, f64::min)
}

/// Chebyshev-spaced radii strictly inside `(lo, hi)`.
pub fn chebyshev_radii(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..m)
        .map(|k| mid - half * ((k as f64 + 0.5) * PI / m as f64).cos())
        .collect()
}

/// Cross-sections of the domain bounded by `curve` at `m` Chebyshev radii
/// spanning the radial extent of the curve.
pub fn radial_profile(curve: &BoundaryCurve, m: usize) -> Result<RadialProfile> {
    if m < MIN_SLICES {
        return Err(Error::InvalidConfig(format!(
            "{m} slices; at least {MIN_SLICES} required"
        )));
    }
    let contains_origin = curve.winding_number(Complex64::new(0.0, 0.0))? == 1;
    let t_min = if contains_origin {
        0.0
    } else {
        origin_distance(curve)
    };
    let t_max = curve.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let radii = chebyshev_radii(t_min, t_max, m);
    let slices = radii
        .par_iter()
        .map(|&t| slice_at_radius(curve, t).map(|arcs| RadialSlice { t, arcs }))
        .collect::<Result<Vec<_>>>()?;
    RadialProfile::new(slices, contains_origin, Some((t_min, t_max)))
}
