use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Relative scale of the default simplicity / ambiguity tolerance.
const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-10;

/// Minimum vertex count of a boundary polyline.
pub const MIN_VERTICES: usize = 16;

/// Closed polyline approximating a Jordan curve. The closing edge from the
/// last vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    points: Vec<Complex64>,
    tolerance: f64,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Signed area of the closed polygon; positive for counterclockwise order.
pub fn signed_area(points: &[Complex64]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        acc += (q.re + p.re) * (q.im - p.im);
    }
    0.5 * acc
}

pub fn point_segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let s = ((w - a).re * d.re + (w - a).im * d.im) / len2;
    let s = s.clamp(0.0, 1.0);
    (w - (a + d * s)).norm()
}

fn segments_touch(a: Complex64, b: Complex64, c: Complex64, d: Complex64, tol: f64) -> bool {
    let o1 = cross(b - a, c - a);
    let o2 = cross(b - a, d - a);
    let o3 = cross(d - c, a - c);
    let o4 = cross(d - c, b - c);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    point_segment_distance(c, a, b) <= tol
        || point_segment_distance(d, a, b) <= tol
        || point_segment_distance(a, c, d) <= tol
        || point_segment_distance(b, c, d) <= tol
}

impl BoundaryCurve {
    /// Validates vertex count, finiteness, implicit closure and simplicity,
    /// with a tolerance proportional to the curve's extent.
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
        Self::with_tolerance(points, DEFAULT_RELATIVE_TOLERANCE * scale)
    }

    pub fn with_tolerance(points: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        let curve = Self::unchecked(points, tolerance)?;
        curve.check_simple()?;
        Ok(curve)
    }

    fn unchecked(points: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        if points.len() < MIN_VERTICES {
            return Err(Error::InvalidCurve(format!(
                "{} vertices; at least {MIN_VERTICES} required",
                points.len()
            )));
        }
        if points
            .iter()
            .any(|p| !p.re.is_finite() || !p.im.is_finite())
        {
            return Err(Error::InvalidCurve("non-finite vertex".into()));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidCurve(format!(
                "tolerance {tolerance} must be positive"
            )));
        }
        let n = points.len();
        if let Some(i) = (0..n).find(|&i| points[i] == points[(i + 1) % n]) {
            return Err(Error::InvalidCurve(if i + 1 == n {
                "first vertex repeated at the end; closure is implicit".into()
            } else {
                format!("repeated vertex at index {i}")
            }));
        }
        Ok(BoundaryCurve { points, tolerance })
    }

    /// Samples `f(rho e^{i theta_j})` at `M` equispaced angles.
    pub fn from_series(f: &PowerSeries, vertices: usize) -> Result<Self> {
        let rho = f.rho();
        let step = TAU / vertices as f64;
        let points = (0..vertices)
            .map(|j| f.eval(Complex64::from_polar(rho, step * j as f64)))
            .collect::<Result<Vec<_>>>()?;
        let curve = Self::new(points)?;
        let area = curve.signed_area();
        if area <= 0.0 {
            return Err(Error::Orientation(area));
        }
        Ok(curve)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    pub fn perimeter(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Polygon area by the shoelace formula; errors on clockwise orientation.
    pub fn area_by_shoelace(&self) -> Result<f64> {
        let a = self.signed_area();
        if a <= 0.0 {
            Err(Error::Orientation(a))
        } else {
            Ok(a)
        }
    }

    pub fn distance_to(&self, w: Complex64) -> f64 {
        self.segments()
            .map(|(a, b)| point_segment_distance(w, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Exhaustive test of all non-adjacent segment pairs, pruned by a sweep
    /// over bounding boxes sorted by their left edge.
    fn check_simple(&self) -> Result<()> {
        let n = self.points.len();
        let tol = self.tolerance;
        let mut boxes: Vec<(f64, f64, f64, f64, usize)> = self
            .segments()
            .enumerate()
            .map(|(i, (a, b))| {
                (
                    a.re.min(b.re) - tol,
                    a.re.max(b.re) + tol,
                    a.im.min(b.im) - tol,
                    a.im.max(b.im) + tol,
                    i,
                )
            })
            .collect();
        boxes.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (k, &(_, x1, y0, y1, i)) in boxes.iter().enumerate() {
            for &(x0j, _, y0j, y1j, j) in &boxes[k + 1..] {
                if x0j > x1 {
                    break;
                }
                if y0j > y1 || y0 > y1j {
                    continue;
                }
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                if hi == lo + 1 || (lo == 0 && hi == n - 1) {
                    continue;
                }
                let (a, b) = (self.points[lo], self.points[(lo + 1) % n]);
                let (c, d) = (self.points[hi], self.points[(hi + 1) % n]);
                if segments_touch(a, b, c, d, tol) {
                    return Err(Error::NonUnivalent {
                        first: lo,
                        second: hi,
                    });
                }
            }
        }
        Ok(())
    }

    /// Winding number of the curve about `w`, by signed crossings of the
    /// horizontal ray. Fails when `w` is within `tolerance` of the curve.
    pub fn winding_number(&self, w: Complex64) -> Result<i32> {
        let dist = self.distance_to(w);
        if dist <= self.tolerance {
            return Err(Error::BoundaryAmbiguity {
                point: w.to_string(),
                distance: dist,
            });
        }
        Ok(self.winding_unchecked(w))
    }

    fn winding_unchecked(&self, w: Complex64) -> i32 {
        let mut wn = 0;
        for (a, b) in self.segments() {
            let side = cross(b - a, w - a);
            if a.im <= w.im {
                if b.im > w.im && side > 0.0 {
                    wn += 1;
                }
            } else if b.im <= w.im && side < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    /// Uniform arclength resampling with `n` vertices, starting at vertex 0.
    pub fn resample(&self, n: usize) -> Result<Self> {
        let total = self.perimeter();
        let step = total / n as f64;
        let mut out = Vec::with_capacity(n);
        let mut seg = self.segments();
        let (mut a, mut b) = seg.next().expect("curve has vertices");
        let mut walked = 0.0;
        let mut seg_len = (b - a).norm();
        for k in 0..n {
            let target = step * k as f64;
            while walked + seg_len < target {
                walked += seg_len;
                match seg.next() {
                    Some((p, q)) => {
                        a = p;
                        b = q;
                        seg_len = (b - a).norm();
                    }
                    None => break,
                }
            }
            let s = ((target - walked) / seg_len).clamp(0.0, 1.0);
            out.push(a + (b - a) * s);
        }
        Self::with_tolerance(out, self.tolerance)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "re,im")?;
        for p in &self.points {
            writeln!(out, "{},{}", p.re, p.im)?;
        }
        Ok(())
    }
}
