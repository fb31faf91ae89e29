//! Truncated Taylor series on the unit disk and the coefficient functionals
//! built from them: Dirichlet area, integral means and the Littlewood bound.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed when checking `|z| <= rho`, so that samples taken
/// exactly on the circle survive rounding in `rho * e^{i theta}`.
const RADIUS_SLACK: f64 = 8.0 * f64::EPSILON;

/// Moduli below this are flagged by the integral-mean quadrature.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-300;

/// Truncated power series `c_0 + c_1 z + ... + c_N z^N`, trusted on `|z| <= rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct PowerSeries {
    coefficients: Vec<Complex64>,
    rho: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    rho: f64,
    coefficients: Vec<Complex64>,
}

impl TryFrom<RawSeries> for PowerSeries {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        PowerSeries::new(raw.coefficients, raw.rho)
    }
}

impl From<PowerSeries> for RawSeries {
    fn from(s: PowerSeries) -> Self {
        RawSeries {
            rho: s.rho,
            coefficients: s.coefficients,
        }
    }
}

impl PowerSeries {
    pub fn new(coefficients: Vec<Complex64>, rho: f64) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least two coefficients, got {}",
                coefficients.len()
            )));
        }
        if let Some(n) = coefficients
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidSeries(format!(
                "coefficient {n} is not finite"
            )));
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidSeries(format!(
                "rho = {rho} is not in (0, 1]"
            )));
        }
        Ok(PowerSeries { coefficients, rho })
    }

    /// Series with real coefficients on the unit disk.
    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::new(
            coefficients
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
            1.0,
        )
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients.get(n).copied().unwrap_or_default()
    }

    /// Highest retained power `N`.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `z -> f(s z)` re-expressed on the unit disk: `c_n s^n`, trusted radius 1.
    ///
    /// Requires `0 < s <= rho`.
    pub fn dilate(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s <= self.rho * (1.0 + RADIUS_SLACK)) {
            return Err(Error::DomainViolation {
                z: s.to_string(),
                rho: self.rho,
            });
        }
        let mut scale = 1.0;
        let coefficients = self
            .coefficients
            .iter()
            .map(|&c| {
                let out = c * scale;
                scale *= s;
                out
            })
            .collect();
        Self::new(coefficients, 1.0)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > self.rho * (1.0 + RADIUS_SLACK) {
            return Err(Error::DomainViolation {
                z: z.to_string(),
                rho: self.rho,
            });
        }
        Ok(self.horner(z))
    }

    fn horner(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Recovers `c_0..c_N` from `M` equispaced samples on `|z| = r` by a
    /// discrete Cauchy integral (one FFT). Sample `j` must be taken at angle
    /// `2 pi j / M`. The result is trusted on the unit disk.
    pub fn from_samples(values: &[Complex64], r: f64, degree: usize) -> Result<Self> {
        let m = values.len();
        if m < 2 * degree + 2 {
            return Err(Error::InsufficientSampling { samples: m, degree });
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::DomainViolation {
                z: r.to_string(),
                rho: 1.0,
            });
        }
        let mut buf = values.to_vec();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let inv_m = 1.0 / m as f64;
        let mut inv_rn = 1.0;
        let coefficients = buf[..=degree]
            .iter()
            .map(|&c| {
                let out = c * (inv_m * inv_rn);
                inv_rn /= r;
                out
            })
            .collect();
        Self::new(coefficients, 1.0)
    }

    /// `pi * sum_{n=1}^{N} n |c_n|^2`, the area of the image of the unit disk
    /// for a univalent map. `N` is clamped to the degree.
    pub fn dirichlet_area(&self, truncation: usize) -> f64 {
        PI * self.dirichlet_sum(truncation)
    }

    /// `sum_{n=1}^{N} n |c_n|^2` without the factor `pi`.
    pub fn dirichlet_sum(&self, truncation: usize) -> f64 {
        let n_max = truncation.min(self.degree());
        self.coefficients[1..=n_max]
            .iter()
            .enumerate()
            .map(|(i, c)| (i + 1) as f64 * c.norm_sqr())
            .sum()
    }

    /// `2 pi sum |c_n|^2 r^{2n}`: the closed form of the `e^{2x}` integral mean.
    pub fn parseval_mean(&self, r: f64) -> f64 {
        let r2 = r * r;
        let mut w = 1.0;
        let mut acc = 0.0;
        for c in &self.coefficients {
            acc += c.norm_sqr() * w;
            w *= r2;
        }
        2.0 * PI * acc
    }

    /// `int_{-pi}^{pi} Phi(log |f(r e^{i theta})|) d theta` by the periodic
    /// trapezoid rule on `samples` nodes. Requires `0 < r < rho`.
    pub fn integral_mean(&self, phi: MeanFunction, r: f64, samples: usize) -> Result<IntegralMean> {
        if !(r > 0.0 && r < self.rho) {
            return Err(Error::DomainViolation {
                z: r.to_string(),
                rho: self.rho,
            });
        }
        integral_mean_of(|z| Ok(self.horner(z)), phi, r, samples)
    }

    /// Littlewood's bound `|c_n| <= 4 n |c_0|` for `n >= 2`.
    pub fn littlewood_check(&self) -> Result<Vec<LittlewoodRow>> {
        let c0 = self.coefficients[0].norm();
        if c0 == 0.0 {
            return Err(Error::Inapplicable(
                "Littlewood bound needs a nonvanishing function (c_0 = 0)".into(),
            ));
        }
        Ok((2..=self.degree())
            .map(|n| {
                let modulus = self.coefficients[n].norm();
                let bound = 4.0 * n as f64 * c0;
                LittlewoodRow {
                    n,
                    modulus,
                    bound,
                    pass: modulus <= bound,
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LittlewoodRow {
    pub n: usize,
    pub modulus: f64,
    pub bound: f64,
    pub pass: bool,
}

/// The convex nondecreasing weights accepted by the integral means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeanFunction {
    /// `x -> e^x`
    Exp,
    /// `x -> e^{2x}`
    Exp2,
    /// `x -> max(x - c, 0)`
    Hinge { c: f64 },
}

impl MeanFunction {
    /// `Phi(log m)` for a modulus `m >= 0`, using the limit at `m = 0`.
    pub fn of_modulus(self, m: f64) -> f64 {
        match self {
            MeanFunction::Exp => m,
            MeanFunction::Exp2 => m * m,
            MeanFunction::Hinge { c } => {
                if m == 0.0 {
                    0.0
                } else {
                    (m.ln() - c).max(0.0)
                }
            }
        }
    }

    pub fn label(self) -> String {
        match self {
            MeanFunction::Exp => "exp".into(),
            MeanFunction::Exp2 => "exp2".into(),
            MeanFunction::Hinge { c } => format!("hinge({c})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralMean {
    pub value: f64,
    /// Some node had `|f| < UNDERFLOW_THRESHOLD`.
    pub underflow: bool,
}

/// Periodic trapezoid rule for `int Phi(log |g(r e^{i theta})|) d theta` over
/// any evaluable function.
pub fn integral_mean_of<G>(g: G, phi: MeanFunction, r: f64, samples: usize) -> Result<IntegralMean>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    if samples == 0 {
        return Err(Error::InvalidConfig(
            "quadrature needs at least one node".into(),
        ));
    }
    let step = 2.0 * PI / samples as f64;
    let mut acc = 0.0;
    let mut underflow = false;
    for j in 0..samples {
        let m = g(Complex64::from_polar(r, step * j as f64))?.norm();
        underflow |= m < UNDERFLOW_THRESHOLD;
        acc += phi.of_modulus(m);
    }
    Ok(IntegralMean {
        value: acc * step,
        underflow,
    })
}

/// `M` equispaced nodes `r e^{2 pi i j / M}`.
pub fn circle_nodes(r: f64, samples: usize) -> impl Iterator<Item = Complex64> {
    let step = 2.0 * PI / samples as f64;
    (0..samples).map(move |j| Complex64::from_polar(r, step * j as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mobius_half(z: Complex64) -> Complex64 {
        (z + 0.5) / (z * 0.5 + 1.0)
    }

    /// Closed form `(-1)^{n-1} 3 / 2^{n+1}` for `n >= 1`.
    fn mobius_half_coefficient(n: usize) -> f64 {
        if n == 0 {
            0.5
        } else {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * 3.0 / 2f64.powi(n as i32 + 1)
        }
    }

    #[test]
    fn eval_constant_identity_and_mobius() {
        let s = PowerSeries::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.eval(c(0.3, 0.0)).unwrap(), c(1.0, 0.0));
        let id = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(id.eval(c(0.0, 0.5)).unwrap(), c(0.0, 0.5));
        let m = PowerSeries::from_real(&[0.5, 0.75, -0.375, 0.1875]).unwrap();
        let direct = mobius_half(c(0.0, 0.0));
        assert!((m.eval(c(0.0, 0.0)).unwrap() - direct).norm() < 1e-15);
    }

    #[test]
    fn eval_rejects_points_outside_rho() {
        let s = PowerSeries::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 0.5).unwrap();
        assert!(matches!(
            s.eval(c(0.6, 0.0)),
            Err(Error::DomainViolation { .. })
        ));
        assert!(s.eval(Complex64::from_polar(0.5, 1.234)).is_ok());
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(PowerSeries::from_real(&[1.0]).is_err());
        assert!(PowerSeries::new(vec![c(1.0, 0.0), c(f64::NAN, 0.0)], 1.0).is_err());
        assert!(PowerSeries::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 0.0).is_err());
        assert!(PowerSeries::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 1.5).is_err());
    }

    #[test]
    fn dft_recovers_monomial_and_constant() {
        let r = 0.5;
        let z2: Vec<_> = circle_nodes(r, 8).map(|z| z * z).collect();
        let s = PowerSeries::from_samples(&z2, r, 3).unwrap();
        for (n, want) in [0.0, 0.0, 1.0, 0.0].iter().enumerate() {
            assert!((s.coefficient(n) - c(*want, 0.0)).norm() < 1e-14, "n={n}");
        }
        let two = vec![c(2.0, 0.0); 8];
        let s = PowerSeries::from_samples(&two, r, 2).unwrap();
        assert!((s.coefficient(0) - c(2.0, 0.0)).norm() < 1e-15);
        assert!(s.coefficient(1).norm() < 1e-15 && s.coefficient(2).norm() < 1e-15);
    }

    #[test]
    fn dft_recovers_mobius_coefficients() {
        let r = 0.5;
        let vals: Vec<_> = circle_nodes(r, 64).map(mobius_half).collect();
        let s = PowerSeries::from_samples(&vals, r, 5).unwrap();
        for n in 0..=5 {
            let err = (s.coefficient(n) - c(mobius_half_coefficient(n), 0.0)).norm();
            assert!(err < 1e-6, "n={n} err={err}");
        }
    }

    #[test]
    fn dft_sampling_and_radius_errors() {
        let vals = vec![c(1.0, 0.0); 7];
        assert!(matches!(
            PowerSeries::from_samples(&vals, 0.5, 3),
            Err(Error::InsufficientSampling {
                samples: 7,
                degree: 3
            })
        ));
        let vals = vec![c(1.0, 0.0); 8];
        assert!(PowerSeries::from_samples(&vals, 0.5, 3).is_ok());
        assert!(matches!(
            PowerSeries::from_samples(&vals, 1.0, 3),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn dirichlet_area_examples() {
        let disk = PowerSeries::from_real(&[2.0, 1.0]).unwrap();
        assert!((disk.dirichlet_area(1) - PI).abs() < 1e-15);
        let q = PowerSeries::from_real(&[4.0, 1.0, 0.4]).unwrap();
        assert!((q.dirichlet_area(2) - 1.32 * PI).abs() < 1e-14);
        let zero = PowerSeries::from_real(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(zero.dirichlet_area(2), 0.0);
        // clamped to the degree
        assert_eq!(q.dirichlet_area(50), q.dirichlet_area(2));
    }

    #[test]
    fn integral_mean_examples() {
        let id = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
        let m = id.integral_mean(MeanFunction::Exp2, 0.5, 256).unwrap();
        assert!((m.value - PI / 2.0).abs() < 1e-12);
        assert!(!m.underflow);

        let two = PowerSeries::from_real(&[2.0, 0.0]).unwrap();
        let m = two.integral_mean(MeanFunction::Exp, 0.3, 256).unwrap();
        assert!((m.value - 4.0 * PI).abs() < 1e-12);

        let s = PowerSeries::from_real(&[0.5, 0.75, -0.375]).unwrap();
        let parseval = 2.0 * PI * (0.25 + 0.5625 * 0.25 + 0.140625 * 0.0625);
        let m = s.integral_mean(MeanFunction::Exp2, 0.5, 256).unwrap();
        assert!((m.value - parseval).abs() < 1e-8);
        assert!((s.parseval_mean(0.5) - parseval).abs() < 1e-15);
    }

    #[test]
    fn integral_mean_flags_zero_and_uses_limits() {
        let id = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
        let hinge = MeanFunction::Hinge { c: -10.0 };
        let v = hinge.of_modulus(0.0);
        assert_eq!(v, 0.0);
        assert_eq!(MeanFunction::Exp.of_modulus(0.0), 0.0);
        // a function vanishing exactly at the node theta = 0
        let g = |z: Complex64| {
            Ok(if z.im == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z
            })
        };
        let m = integral_mean_of(g, MeanFunction::Exp2, 0.5, 16).unwrap();
        assert!(m.underflow);
        assert!((m.value - 2.0 * PI * 0.25 * 15.0 / 16.0).abs() < 1e-12);
        let m = integral_mean_of(g, MeanFunction::Hinge { c: -1.0 }, 0.5, 16).unwrap();
        assert!(m.underflow && m.value.is_finite());
        assert!(id.integral_mean(MeanFunction::Exp, 1.0, 16).is_err());
    }

    #[test]
    fn littlewood_rows() {
        let s = PowerSeries::from_real(&[1.0, 0.0, 0.5]).unwrap();
        let rows = s.littlewood_check().unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n, 2);
        assert!(rows[0].pass);
        assert_eq!(rows[0].bound, 8.0);

        assert!(PowerSeries::from_real(&[1.0, 4.0])
            .unwrap()
            .littlewood_check()
            .unwrap()
            .is_empty());

        let q = PowerSeries::from_real(&[4.0, 1.0, 0.4]).unwrap();
        assert!(q.littlewood_check().unwrap().iter().all(|r| r.pass));

        let zero = PowerSeries::from_real(&[0.0, 1.0, 0.3]).unwrap();
        assert!(matches!(
            zero.littlewood_check(),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = PowerSeries::new(vec![c(0.1, -0.2), c(1.0 / 3.0, 0.0)], 0.9).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"rho":0.9,"coefficients":[[0.1,-0.2],[0.3333333333333333,0.0]]}"#
        );
        let back: PowerSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(
            serde_json::from_str::<PowerSeries>(r#"{"rho":2.0,"coefficients":[[1,0],[1,0]]}"#)
                .is_err()
        );
        assert!(
            serde_json::from_str::<PowerSeries>(r#"{"rho":1.0,"coefficients":[[1,0]]}"#).is_err()
        );
    }

    #[test]
    fn dilate_scales_coefficients() {
        let s = PowerSeries::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)], 0.8).unwrap();
        let d = s.dilate(0.5).unwrap();
        assert_eq!(d.coefficients(), &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(d.rho(), 1.0);
        assert!(s.dilate(0.9).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series(max_degree: usize) -> impl Strategy<Value = PowerSeries> {
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..=max_degree + 1).prop_map(|v| {
                PowerSeries::new(
                    v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
                    1.0,
                )
                .unwrap()
            })
        }

        proptest! {
            #[test]
            fn dft_round_trip(s in series(12), r in 0.3f64..0.95) {
                let n = s.degree();
                let m = 2 * n + 2;
                let vals: Vec<_> = circle_nodes(r, m).map(|z| s.eval(z).unwrap()).collect();
                let back = PowerSeries::from_samples(&vals, r, n).unwrap();
                let scale = s.coefficients().iter().map(|c| c.norm()).fold(1.0, f64::max);
                let tol = 10.0 * f64::EPSILON * (m as f64) * scale / r.powi(n as i32);
                for k in 0..=n {
                    prop_assert!((back.coefficient(k) - s.coefficient(k)).norm() <= tol);
                }
            }

            #[test]
            fn parseval_consistency(s in series(10), r in 0.1f64..0.95) {
                let m = (4 * s.degree()).max(64);
                let q = s.integral_mean(MeanFunction::Exp2, r, m).unwrap().value;
                prop_assert!((q - s.parseval_mean(r)).abs() < 1e-8 * (1.0 + q));
            }

            #[test]
            fn dirichlet_rotation_conjugation_invariance(s in series(10), lambda in -3.2f64..3.2) {
                let rotated: Vec<_> = s.coefficients().iter().enumerate()
                    .map(|(n, c)| c * Complex64::from_polar(1.0, lambda * n as f64)).collect();
                let rotated = PowerSeries::new(rotated, 1.0).unwrap();
                let conj = PowerSeries::new(s.coefficients().iter().map(|c| c.conj()).collect(), 1.0).unwrap();
                let n = s.degree();
                let base = s.dirichlet_area(n);
                prop_assert!((rotated.dirichlet_area(n) - base).abs() <= 1e-12 * (1.0 + base));
                prop_assert_eq!(conj.dirichlet_area(n), base);
            }

            #[test]
            fn dirichlet_monotone_in_truncation(s in series(10)) {
                let mut prev = 0.0;
                for n in 1..=s.degree() {
                    let a = s.dirichlet_area(n);
                    prop_assert!(a >= prev);
                    prev = a;
                }
            }
        }
    }
}
