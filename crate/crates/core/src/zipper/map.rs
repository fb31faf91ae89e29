use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::step::ElementaryStep;
use crate::domain::BoundaryCurve;
use crate::error::{Error, Result};
use crate::series::{circle_nodes, PowerSeries};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Intermediate images may dip this far below the real axis before the
/// composition is declared to have lost its branch.
const BRANCH_TOLERANCE: f64 = 1e-8;

/// Points whose disk image lies this close to the unit circle are treated as
/// boundary points by `eval_inverse`.
const EDGE_TOLERANCE: f64 = 1e-12;

/// The normalized Riemann map `F` of the unit disk onto a Jordan domain,
/// realized as a composition of geodesic-zipper steps.
///
/// Forward direction (domain to disk): the opening map
/// `w -> i sqrt((w - z1)/(w - z0))`, the elementary steps in order, the
/// closing map `u -> -(u / (1 - u/p0))^2` onto the upper half-plane and the
/// Cayley transform `v -> (v - i)/(v + i)`. `F` is the inverse of that
/// composition precomposed with `z -> (e^{i lambda} z + a*) / (1 + conj(a*) e^{i lambda} z)`,
/// which fixes `F(0) = target` and `F'(0) > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipperMap {
    initial: [Complex64; 2],
    steps: Vec<ElementaryStep>,
    closing: Closing,
    normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Closing {
    /// Image `p0` of the first vertex after the last step; `None` is infinity.
    foot: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Disk image of the target point under the un-normalized map.
    pub a_star: Complex64,
    pub lambda: f64,
    pub target: Complex64,
}

impl Closing {
    fn forward(&self, u: Complex64) -> (Complex64, Complex64) {
        let (m, dm) = match self.foot {
            Some(p0) => {
                let d = 1.0 - u / p0;
                (u / d, 1.0 / (d * d))
            }
            None => (u, Complex64::new(1.0, 0.0)),
        };
        (-(m * m), -2.0 * m * dm)
    }

    fn inverse(&self, v: Complex64) -> Complex64 {
        let mut m = -(-v).sqrt();
        if m.im < 0.0 {
            m = -m;
        }
        match self.foot {
            Some(p0) => m / (1.0 + m / p0),
            None => m,
        }
    }
}

fn cayley(v: Complex64) -> (Complex64, Complex64) {
    let d = v + I;
    ((v - I) / d, 2.0 * I / (d * d))
}

fn cayley_inverse(z: Complex64) -> Complex64 {
    I * (1.0 + z) / (1.0 - z)
}

impl ZipperMap {
    /// Builds the normalized map onto the domain bounded by `boundary` with
    /// `F(0) = target`, `F'(0) > 0`.
    ///
    /// Vertices are zipped in order starting from the edge `(p[0], p[1])`.
    pub fn build(boundary: &BoundaryCurve, target: Complex64) -> Result<Self> {
        let area = boundary.signed_area();
        if area <= 0.0 {
            return Err(Error::Orientation(area));
        }
        match boundary.winding_number(target) {
            Ok(1) => {}
            Ok(_) | Err(Error::BoundaryAmbiguity { .. }) => {
                return Err(Error::Precondition(format!(
                    "normalization target {target} is not inside the boundary curve"
                )))
            }
            Err(e) => return Err(e),
        }

        let pts = boundary.points();
        let (z0, z1) = (pts[0], pts[1]);
        let mut images: Vec<Complex64> = pts[2..]
            .iter()
            .map(|&w| I * ((w - z1) / (w - z0)).sqrt())
            .collect();
        let mut foot: Option<f64> = None;
        let mut steps = Vec::with_capacity(images.len());
        for k in 0..images.len() {
            let anchor = images[k];
            let step = ElementaryStep::new(anchor).map_err(|_| Error::Geometry {
                vertex: k + 2,
                reason: format!("anchor {anchor} left the open upper half-plane"),
            })?;
            for z in &mut images[k + 1..] {
                *z = step.forward(*z);
            }
            foot = match foot {
                Some(x) => Some(step.forward(Complex64::new(x, 0.0)).re),
                None => step.forward_infinity(),
            };
            steps.push(step);
        }

        let mut map = ZipperMap {
            initial: [z0, z1],
            steps,
            closing: Closing { foot },
            normalization: Normalization {
                a_star: Complex64::new(0.0, 0.0),
                lambda: 0.0,
                target,
            },
        };
        let (a_star, deriv) = map.raw_forward(target)?;
        if !(a_star.norm() < 1.0) {
            return Err(Error::Geometry {
                vertex: 0,
                reason: format!("target maps to {a_star}, outside the unit disk"),
            });
        }
        map.normalization.a_star = a_star;
        map.normalization.lambda = deriv.arg();
        Ok(map)
    }

    pub fn steps(&self) -> &[ElementaryStep] {
        &self.steps
    }

    pub fn initial_pair(&self) -> [Complex64; 2] {
        self.initial
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn target(&self) -> Complex64 {
        self.normalization.target
    }

    /// Un-normalized map from the domain to the disk, with its derivative.
    fn raw_forward(&self, w: Complex64) -> Result<(Complex64, Complex64)> {
        let [z0, z1] = self.initial;
        let q = (w - z1) / (w - z0);
        let sq = q.sqrt();
        let mut z = I * sq;
        let mut dz = I * (z1 - z0) / ((w - z0) * (w - z0) * 2.0 * sq);
        for (k, step) in self.steps.iter().enumerate() {
            if z.im < -BRANCH_TOLERANCE * (1.0 + z.norm()) {
                return Err(Error::NumericalBranch {
                    step: k,
                    value: z.to_string(),
                });
            }
            let (nz, d) = step.forward_with_derivative(z);
            z = nz;
            dz *= d;
        }
        let (v, dv) = self.closing.forward(z);
        let (u, du) = cayley(v);
        Ok((u, du * dv * dz))
    }

    /// Un-normalized inverse, from the disk to the domain.
    fn raw_inverse(&self, u: Complex64) -> Result<Complex64> {
        let mut z = self.closing.inverse(cayley_inverse(u));
        for (k, step) in self.steps.iter().enumerate().rev() {
            z = step.inverse(z);
            if z.im < -BRANCH_TOLERANCE * (1.0 + z.norm()) || !z.re.is_finite() {
                return Err(Error::NumericalBranch {
                    step: k,
                    value: z.to_string(),
                });
            }
        }
        let s = -I * z;
        let q = s * s;
        let [z0, z1] = self.initial;
        Ok((z1 - q * z0) / (1.0 - q))
    }

    fn rotation(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.normalization.lambda)
    }

    /// `F(z)` for `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::DomainViolation {
                z: z.to_string(),
                rho: 1.0,
            });
        }
        let a = self.normalization.a_star;
        let u = self.rotation() * z;
        self.raw_inverse((u + a) / (1.0 + a.conj() * u))
    }

    /// `F^{-1}(w)` for `w` strictly inside the domain.
    pub fn eval_inverse(&self, w: Complex64) -> Result<Complex64> {
        let (u, _) = self.raw_forward(w)?;
        if !(u.norm() < 1.0 - EDGE_TOLERANCE) {
            return Err(Error::DomainViolation {
                z: w.to_string(),
                rho: 1.0,
            });
        }
        let a = self.normalization.a_star;
        Ok(self.rotation().conj() * (u - a) / (1.0 - a.conj() * u))
    }

    /// Taylor coefficients `A_0..A_N` from `M` samples of `F` on `|z| = r`.
    pub fn series(&self, r: f64, samples: usize, degree: usize) -> Result<PowerSeries> {
        if samples < 2 * degree + 2 {
            return Err(Error::InsufficientSampling { samples, degree });
        }
        let nodes: Vec<Complex64> = circle_nodes(r, samples).collect();
        let values = nodes
            .par_iter()
            .map(|&z| self.eval(z))
            .collect::<Result<Vec<_>>>()?;
        PowerSeries::from_samples(&values, r, degree)
    }

    /// `F'(0)` by a central difference.
    pub fn derivative_at_zero(&self, h: f64) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let hx = Complex64::new(h, 0.0);
        Ok((self.eval(zero + hx)? - self.eval(zero - hx)?) / (2.0 * h))
    }

    /// Largest relative Cauchy-Riemann defect `|F_y - i F_x| / |F_x|` over a
    /// `k x k` grid inside `|z| <= radius`, by central differences.
    pub fn cauchy_riemann_residual(&self, k: usize, radius: f64, h: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let x = -radius + 2.0 * radius * (i as f64 + 0.5) / k as f64;
                let y = -radius + 2.0 * radius * (j as f64 + 0.5) / k as f64;
                let z = Complex64::new(x, y);
                if z.norm() > radius {
                    continue;
                }
                let fx = (self.eval(z + h)? - self.eval(z - h)?) / (2.0 * h);
                let fy = (self.eval(z + I * h)? - self.eval(z - I * h)?) / (2.0 * h);
                worst = worst.max((fy - I * fx).norm() / fx.norm());
            }
        }
        Ok(worst)
    }
}
