use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square root with its cut along the negative imaginary axis, so the image
/// of any point with `Im > -0` varies continuously.
fn sqrt_cut_down(v: Complex64) -> Complex64 {
    let rot = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    rot * (Complex64::new(v.im, -v.re)).sqrt()
}

fn clamp_upper(z: Complex64) -> Complex64 {
    if z.im > 0.0 {
        z
    } else {
        Complex64::new(z.re, 0.0)
    }
}

/// One geodesic-zipper map: sends the upper half-plane minus the circular
/// arc from 0 to `a` (orthogonal to the real axis) onto the upper half-plane,
/// with `a -> 0`.
///
/// It is `z -> sqrt(m(z)^2 + h^2)` where `m(z) = z / (1 - z/c)` straightens
/// the arc onto `[0, i h]`. The foot `c = |a|^2 / Re a` is the second real
/// point of the arc's circle; `Re a = 0` is the vertical case `m = id`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepParams", into = "StepParams")]
pub struct ElementaryStep {
    anchor: Complex64,
    height: f64,
    inv_foot: f64,
}

/// `(Re a, Im a, h, c)`, with `c = null` in the vertical case.
#[derive(Serialize, Deserialize)]
struct StepParams(f64, f64, f64, Option<f64>);

impl TryFrom<StepParams> for ElementaryStep {
    type Error = Error;

    fn try_from(p: StepParams) -> Result<Self> {
        let step = ElementaryStep::new(Complex64::new(p.0, p.1))?;
        let consistent = (step.height - p.2).abs() <= 1e-9 * step.height.max(1.0)
            && match (step.foot(), p.3) {
                (None, None) => true,
                (Some(a), Some(b)) => (a - b).abs() <= 1e-9 * a.abs().max(1.0),
                _ => false,
            };
        if !consistent {
            return Err(Error::InvalidConfig(format!(
                "step parameters ({}, {}, {}, {:?}) are inconsistent",
                p.0, p.1, p.2, p.3
            )));
        }
        Ok(step)
    }
}

impl From<ElementaryStep> for StepParams {
    fn from(s: ElementaryStep) -> Self {
        StepParams(s.anchor.re, s.anchor.im, s.height, s.foot())
    }
}

impl ElementaryStep {
    pub fn new(anchor: Complex64) -> Result<Self> {
        if !(anchor.im > 0.0 && anchor.re.is_finite() && anchor.im.is_finite()) {
            return Err(Error::Precondition(format!(
                "zipper anchor {anchor} is not in the open upper half-plane"
            )));
        }
        let r2 = anchor.norm_sqr();
        Ok(ElementaryStep {
            anchor,
            height: r2 / anchor.im,
            inv_foot: anchor.re / r2,
        })
    }

    pub fn anchor(&self) -> Complex64 {
        self.anchor
    }

    /// Length `h` of the straightened slit `[0, i h]`.
    pub fn height(&self) -> f64 {
        self.height
    }

    /// Real foot `c` of the geodesic's circle; `None` when the geodesic is vertical.
    pub fn foot(&self) -> Option<f64> {
        (self.inv_foot != 0.0).then(|| 1.0 / self.inv_foot)
    }

    fn straighten(&self, z: Complex64) -> Complex64 {
        z / (1.0 - z * self.inv_foot)
    }

    fn unslit(&self, m: Complex64) -> Complex64 {
        let m = clamp_upper(m);
        let ih = Complex64::new(0.0, self.height);
        (m + ih).sqrt() * sqrt_cut_down(m - ih)
    }

    pub fn forward(&self, z: Complex64) -> Complex64 {
        self.unslit(self.straighten(z))
    }

    /// Image of the point at infinity: `m(inf) = -c`, or infinity when vertical.
    pub fn forward_infinity(&self) -> Option<f64> {
        self.foot()
            .map(|c| self.forward(Complex64::new(-c, 0.0)).re)
    }

    pub fn forward_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let denom = 1.0 - z * self.inv_foot;
        let m = z / denom;
        let dm = 1.0 / (denom * denom);
        let s = self.unslit(m);
        (s, m * dm / s)
    }

    /// Inverse map, from the closed upper half-plane onto the half-plane minus the arc.
    pub fn inverse(&self, w: Complex64) -> Complex64 {
        let w = clamp_upper(w);
        let s = (w - self.height).sqrt() * (w + self.height).sqrt();
        s / (1.0 + s * self.inv_foot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn anchor_goes_to_zero_and_reals_stay_real() {
        for a in [c(0.3, 0.7), c(-1.2, 0.4), c(0.0, 2.0), c(5.0, 0.01)] {
            let s = ElementaryStep::new(a).unwrap();
            // square-root sensitivity: an O(eps) error in m(a) becomes O(sqrt(eps))
            assert!(s.forward(a).norm() < 1e-6 * s.height(), "a = {a}");
            for x in [-3.0, -0.5, 0.2, 4.0] {
                let y = s.forward(c(x, 0.0));
                assert!(y.im.abs() < 1e-12 * y.norm().max(1.0));
            }
        }
    }

    #[test]
    fn vertical_case_is_the_plain_slit_map() {
        let s = ElementaryStep::new(c(0.0, 2.0)).unwrap();
        assert_eq!(s.foot(), None);
        assert_eq!(s.height(), 2.0);
        assert_eq!(s.forward_infinity(), None);
        let z = c(1.0, 1.0);
        let want = (z * z + 4.0).sqrt();
        assert!((s.forward(z) - want).norm() < 1e-14);
    }

    #[test]
    fn the_arc_is_flattened_onto_the_real_axis() {
        let a = c(0.6, 0.8);
        let s = ElementaryStep::new(a).unwrap();
        let foot = s.foot().unwrap();
        let center = c(0.5 * foot, 0.0);
        let radius = 0.5 * foot;
        // points of the geodesic between 0 and a
        let theta_a = (a - center).arg();
        for k in 1..20 {
            let th = std::f64::consts::PI + (theta_a - std::f64::consts::PI) * k as f64 / 20.0;
            let p = center + Complex64::from_polar(radius, th);
            let img = s.forward(p + c(0.0, 1e-12));
            assert!(img.im.abs() < 1e-5, "{p} -> {img}");
        }
    }

    #[test]
    fn rejects_anchor_off_the_half_plane() {
        assert!(ElementaryStep::new(c(1.0, 0.0)).is_err());
        assert!(ElementaryStep::new(c(1.0, -0.1)).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = ElementaryStep::new(c(0.4, 1.1)).unwrap();
        let z = c(-0.7, 0.9);
        let (_, d) = s.forward_with_derivative(z);
        let h = 1e-6;
        let fd = (s.forward(z + h) - s.forward(z - h)) / (2.0 * h);
        assert!((d - fd).norm() < 1e-7 * d.norm());
    }

    #[test]
    fn json_layout() {
        let s = ElementaryStep::new(c(0.0, 2.0)).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0.0,2.0,2.0,null]");
        let t = ElementaryStep::new(c(0.6, 0.8)).unwrap();
        let back: ElementaryStep =
            serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<ElementaryStep>("[0.6,0.8,5.0,null]").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn forward_inverse_round_trip(
            ar in -3.0f64..3.0, ai in 0.05f64..3.0,
            zr in -5.0f64..5.0, zi in 0.0f64..5.0,
        ) {
            let s = ElementaryStep::new(c(ar, ai)).unwrap();
            let w = c(zr, zi);
            let back = s.forward(s.inverse(w));
            prop_assert!((back - w).norm() < 1e-10 * (1.0 + w.norm()), "{} -> {}", w, back);
            prop_assert!(s.inverse(w).im >= 0.0);
        }

        #[test]
        fn maps_upper_half_plane_into_itself(
            ar in -3.0f64..3.0, ai in 0.05f64..3.0,
            zr in -5.0f64..5.0, zi in 1e-6f64..5.0,
        ) {
            let s = ElementaryStep::new(c(ar, ai)).unwrap();
            prop_assert!(s.forward(c(zr, zi)).im >= 0.0);
        }
    }
}
