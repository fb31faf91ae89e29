use num_complex::Complex64;
use rayon::prelude::*;

use super::config::PipelineConfig;
use super::report::*;
use crate::domain::{radial_profile, BoundaryCurve, RadialProfile};
use crate::error::{Error, Result, StageExt};
use crate::series::{integral_mean_of, LittlewoodRow, MeanFunction, PowerSeries};
use crate::zipper::ZipperMap;

/// Relative floor applied to every doubling-based error estimate, so that
/// quantities converged to roundoff are not given a zero error bar.
const ERROR_FLOOR: f64 = 1e-10;

/// Allowed `|A_0 - |a_0||`.
const CENTER_TOL: f64 = 1e-6;

/// Radii and angles of the grid on which `min |f|` is sampled before the
/// Littlewood rows are computed.
const NONVANISHING_GRID: (usize, usize) = (32, 256);

/// Every geometric object produced on the way from `f` to `F`.
#[derive(Debug, Clone)]
pub struct Symmetrization {
    /// Boundary polyline of `D = f(rho U)`.
    pub boundary: BoundaryCurve,
    pub profile: RadialProfile,
    pub symmetrized_profile: RadialProfile,
    /// Boundary of `D*`, resampled to the configured vertex count.
    pub symmetrized_boundary: BoundaryCurve,
}

/// `f(rho z)` for the effective working radius of `cfg`.
pub fn working_series(f: &PowerSeries, cfg: &PipelineConfig) -> Result<PowerSeries> {
    let rho = cfg.rho.unwrap_or(f.rho());
    if f.coefficient(0).norm() == 0.0 {
        return Err(Error::Precondition(
            "f(0) = 0: the image contains or touches the origin".into(),
        ))
        .stage("input");
    }
    f.dilate(rho).stage("input")
}

/// `D`, its radial profile, `D*` and the boundary of `D*` for the working series.
pub fn symmetrize(working: &PowerSeries, cfg: &PipelineConfig) -> Result<Symmetrization> {
    let boundary = BoundaryCurve::from_series(working, cfg.boundary_vertices).stage("boundary")?;
    let profile = radial_profile(&boundary, cfg.slices).stage("profile")?;
    let symmetrized_profile = profile.symmetrize();
    let symmetrized_boundary = symmetrized_profile
        .symmetrized_boundary()
        .and_then(|c| c.resample(cfg.boundary_vertices))
        .stage("symmetrize")?;
    Ok(Symmetrization {
        boundary,
        profile,
        symmetrized_profile,
        symmetrized_boundary,
    })
}

/// The normalized Riemann map onto `D*` with `F(0) = |a_0|`.
pub fn symmetrized_map(working: &PowerSeries, sym: &Symmetrization) -> Result<ZipperMap> {
    let target = Complex64::new(working.coefficient(0).norm(), 0.0);
    ZipperMap::build(&sym.symmetrized_boundary, target).stage("map")
}

/// Outputs of one resolution level.
struct Level {
    sym: Symmetrization,
    map: ZipperMap,
    big: PowerSeries,
    means: Vec<(MeanFunction, f64, f64, bool)>,
    mean_f: Vec<f64>,
}

fn run_level(working: &PowerSeries, cfg: &PipelineConfig) -> Result<Level> {
    let sym = symmetrize(working, cfg)?;
    let map = symmetrized_map(working, &sym)?;
    let big = map
        .series(cfg.extraction_radius(), cfg.sample_count(), cfg.degree)
        .stage("coefficients")?;
    let grid: Vec<(MeanFunction, f64)> = cfg
        .means
        .iter()
        .flat_map(|&phi| cfg.mean_radii.iter().map(move |&r| (phi, r)))
        .collect();
    let means = grid
        .par_iter()
        .map(|&(phi, r)| {
            integral_mean_of(|z| map.eval(z), phi, r, cfg.mean_samples)
                .map(|m| (phi, r, m.value, m.underflow))
        })
        .collect::<Result<Vec<_>>>()
        .stage("means")?;
    let mean_f = grid
        .iter()
        .map(|&(phi, r)| {
            working
                .integral_mean(phi, r, cfg.mean_samples)
                .map(|m| m.value)
        })
        .collect::<Result<Vec<_>>>()
        .stage("means")?;
    Ok(Level {
        sym,
        map,
        big,
        means,
        mean_f,
    })
}

fn doubling_error(base: f64, fine: f64, scale: f64) -> f64 {
    (2.0 * (base - fine).abs()).max(ERROR_FLOOR * scale.abs().max(1.0))
}

/// Full two-resolution pipeline for `f`.
///
/// Everything is computed at `cfg` resolution and again at
/// `cfg.doubled()`; the differences give the error estimates. The result
/// is a deterministic function of `(f, cfg)`.
pub fn run_pipeline(f: &PowerSeries, cfg: &PipelineConfig) -> Result<VerificationReport> {
    cfg.validate().stage("config")?;
    let working = working_series(f, cfg)?;
    let fine_cfg = cfg.doubled();
    let (base, fine) = rayon::join(
        || run_level(&working, cfg),
        || run_level(&working, &fine_cfg),
    );
    let (base, fine) = (base?, fine?);

    let n_max = cfg.degree;
    let coefficients = coefficient_table(&working, &base.big, &fine.big, n_max);
    let delta = cfg.witness_delta.unwrap_or_else(|| {
        1e-3 * working
            .coefficients()
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    });

    let area = check_area_identity(&working, &base.big, &fine.big, n_max, cfg.identity_rel_tol)?;
    let areas = AreaTriple {
        dirichlet_f: working.dirichlet_area(n_max),
        dirichlet_big_f: base.big.dirichlet_area(n_max),
        profile: base.sym.profile.area(),
        profile_symmetrized: base.sym.symmetrized_profile.area(),
        shoelace: base.sym.boundary.area_by_shoelace().stage("boundary")?,
        shoelace_symmetrized: base
            .sym
            .symmetrized_boundary
            .area_by_shoelace()
            .stage("symmetrize")?,
    };
    let center = check_center(&working, &base.big);
    let hayman = check_hayman(&coefficients);
    let reality = check_reality(&base.big, cfg.reality_eps);
    let means = mean_rows(&working, &base, &fine);
    let littlewood = littlewood_rows(&working)?;

    let mut flags = Vec::new();
    let candidate = find_witness(&coefficients, delta);
    let equality = is_equality(&coefficients);
    let (witness, classification) = match candidate {
        Some(mut w) => {
            let fine_table = coefficient_table(&working, &fine.big, &fine.big, n_max);
            let survives = still_witness(&fine_table, &w, delta);
            let confirmed = if survives && cfg.confirm_witness {
                confirm_at(&working, &fine_cfg, &w, delta)?
            } else {
                survives
            };
            w.confirmed = Some(confirmed);
            if equality {
                flags.push("witness_within_equality_band".to_string());
                (None, Classification::Inconclusive)
            } else if confirmed {
                (Some(w), Classification::WitnessFound)
            } else {
                flags.push("witness_not_confirmed".to_string());
                (Some(w), Classification::Inconclusive)
            }
        }
        None if equality => (None, Classification::EqualitySuspected),
        None => (None, Classification::Inconclusive),
    };
    if means.iter().any(|m| m.underflow) {
        flags.push("mean_underflow".to_string());
    }
    if littlewood.is_none() {
        flags.push("littlewood_skipped".to_string());
    }

    let diagnostics =
        map_diagnostics(&base.map, &base.sym.symmetrized_boundary).stage("diagnostics")?;
    let rho = cfg.rho.unwrap_or(f.rho());
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config: cfg.clone(),
        rho,
        input: f.clone(),
        working,
        symmetrized: base.big,
        delta,
        coefficients,
        area,
        areas,
        center,
        hayman,
        reality,
        means,
        littlewood,
        witness,
        classification,
        diagnostics,
        flags,
    })
}

/// Re-runs the pipeline at `cfg` (already doubled once) and its own
/// doubling, and reports whether the same pair still clears `delta`.
fn confirm_at(
    working: &PowerSeries,
    cfg: &PipelineConfig,
    w: &Witness,
    delta: f64,
) -> Result<bool> {
    let finer = cfg.doubled();
    let (a, b) = rayon::join(|| run_level(working, cfg), || run_level(working, &finer));
    let (a, b) = (a?, b?);
    let table = coefficient_table(working, &a.big, &b.big, cfg.degree);
    Ok(still_witness(&table, w, delta) && !is_equality(&table))
}

fn still_witness(table: &[CoefficientRow], w: &Witness, delta: f64) -> bool {
    let row = |n: usize| table.iter().find(|r| r.n == n);
    match (row(w.n1), row(w.n2)) {
        (Some(r1), Some(r2)) => r1.diff > delta && -r2.diff > delta,
        _ => false,
    }
}

/// Rows `0..=n_max` of `|a_n|`, `|A_n|`, their difference and the error
/// estimate of `|A_n|`.
///
/// The estimate is twice the change under doubling, but never less than the
/// noise floor `max |A_m|` over the upper half `n_max/2 < m <= n_max` of the
/// retained band at either resolution.
pub fn coefficient_table(
    working: &PowerSeries,
    big: &PowerSeries,
    big_fine: &PowerSeries,
    n_max: usize,
) -> Vec<CoefficientRow> {
    let scale = big
        .coefficients()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let floor = (n_max / 2 + 1..=n_max)
        .map(|m| {
            big.coefficient(m)
                .norm()
                .max(big_fine.coefficient(m).norm())
        })
        .fold(0.0, f64::max);
    (0..=n_max)
        .map(|n| {
            let abs_a = working.coefficient(n).norm();
            let abs_big_a = big.coefficient(n).norm();
            CoefficientRow {
                n,
                abs_a,
                abs_big_a,
                diff: abs_big_a - abs_a,
                err: doubling_error(abs_big_a, big_fine.coefficient(n).norm(), scale).max(floor),
            }
        })
        .collect()
}

/// Relative residual of `sum n |a_n|^2 = sum n |A_n|^2` at both resolutions.
///
/// Passes when the base residual is below `rel_tol` and within three error
/// estimates of zero.
pub fn check_area_identity(
    working: &PowerSeries,
    big: &PowerSeries,
    big_fine: &PowerSeries,
    n_max: usize,
    rel_tol: f64,
) -> Result<AreaCheck> {
    let lhs = working.dirichlet_sum(n_max);
    if lhs == 0.0 {
        return Err(Error::Inapplicable("constant map: sum n|a_n|^2 = 0".into())).stage("area");
    }
    let rhs = big.dirichlet_sum(n_max);
    let rhs_fine = big_fine.dirichlet_sum(n_max);
    let residual = (lhs - rhs).abs() / lhs;
    let residual_doubled = (lhs - rhs_fine).abs() / lhs;
    let error_estimate = doubling_error(rhs / lhs, rhs_fine / lhs, 1.0);
    Ok(AreaCheck {
        identity: AreaIdentity {
            lhs,
            rhs,
            residual,
            pass: residual < rel_tol && residual <= 3.0 * error_estimate,
        },
        residual_doubled,
        error_estimate,
    })
}

fn check_center(working: &PowerSeries, big: &PowerSeries) -> CenterCheck {
    let abs_a0 = working.coefficient(0).norm();
    let big_a0 = big.coefficient(0).re;
    let deviation = (big.coefficient(0) - abs_a0).norm();
    CenterCheck {
        abs_a0,
        big_a0,
        deviation,
        pass: deviation < CENTER_TOL,
    }
}

/// `A_1 >= |a_1| - err`.
pub fn check_hayman(table: &[CoefficientRow]) -> HaymanCheck {
    let row = table
        .iter()
        .find(|r| r.n == 1)
        .copied()
        .unwrap_or(CoefficientRow {
            n: 1,
            abs_a: 0.0,
            abs_big_a: 0.0,
            diff: 0.0,
            err: 0.0,
        });
    HaymanCheck {
        abs_a1: row.abs_a,
        big_a1: row.abs_big_a,
        error_estimate: row.err,
        pass: row.abs_big_a >= row.abs_a - row.err,
    }
}

fn check_reality(big: &PowerSeries, eps: f64) -> RealityCheck {
    let max_imag = big
        .coefficients()
        .iter()
        .map(|c| c.im.abs())
        .fold(0.0, f64::max);
    let max_abs = big
        .coefficients()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    RealityCheck {
        max_imag,
        max_abs,
        pass: max_imag < eps * max_abs,
    }
}

fn mean_rows(working: &PowerSeries, base: &Level, fine: &Level) -> Vec<MeanRow> {
    base.means
        .iter()
        .zip(&fine.means)
        .zip(&base.mean_f)
        .map(
            |((&(phi, r, mean_big_f, underflow), &(_, _, fine_big_f, fine_underflow)), &mean_f)| {
                let error_estimate = doubling_error(mean_big_f, fine_big_f, mean_big_f);
                let (parseval_f, parseval_big_f) = match phi {
                    MeanFunction::Exp2 => (
                        Some(working.parseval_mean(r)),
                        Some(base.big.parseval_mean(r)),
                    ),
                    _ => (None, None),
                };
                MeanRow {
                    phi,
                    r,
                    mean_f,
                    mean_big_f,
                    margin: mean_big_f - mean_f,
                    error_estimate,
                    parseval_f,
                    parseval_big_f,
                    underflow: underflow || fine_underflow,
                    pass: mean_f <= mean_big_f + error_estimate,
                }
            },
        )
        .collect()
}

/// Littlewood rows for `f`, or `None` when `f` vanishes somewhere on a
/// dense polar grid of the closed disk.
fn littlewood_rows(working: &PowerSeries) -> Result<Option<Vec<LittlewoodRow>>> {
    let (nr, nt) = NONVANISHING_GRID;
    let min_modulus = (0..=nr)
        .flat_map(|i| {
            let r = i as f64 / nr as f64;
            crate::series::circle_nodes(r, nt)
        })
        .map(|z| working.eval(z).map(|w| w.norm()))
        .collect::<Result<Vec<_>>>()
        .stage("littlewood")?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min_modulus > 0.0 {
        working.littlewood_check().map(Some).stage("littlewood")
    } else {
        Ok(None)
    }
}

/// The pair `(n1, n2)`, `n >= 1`, maximizing `min(margin1, margin2)` with
/// `margin1 = |A_{n1}| - |a_{n1}|` and `margin2 = |a_{n2}| - |A_{n2}|`, each
/// required to exceed `delta` plus that row's error estimate. Ties go to the
/// smaller index.
pub fn find_witness(table: &[CoefficientRow], delta: f64) -> Option<Witness> {
    let best = |sign: f64| {
        table
            .iter()
            .filter(|r| r.n >= 1 && sign * r.diff > delta + r.err)
            .fold(None::<&CoefficientRow>, |acc, r| match acc {
                Some(b) if sign * b.diff >= sign * r.diff => Some(b),
                _ => Some(r),
            })
    };
    let (r1, r2) = (best(1.0)?, best(-1.0)?);
    Some(Witness {
        n1: r1.n,
        n2: r2.n,
        margin1: r1.diff,
        margin2: -r2.diff,
        err1: r1.err,
        err2: r2.err,
        confirmed: None,
    })
}

/// Every `||A_n| - |a_n||` within three error estimates.
pub fn is_equality(table: &[CoefficientRow]) -> bool {
    table.iter().all(|r| r.diff.abs() < 3.0 * r.err)
}

fn map_diagnostics(map: &ZipperMap, boundary: &BoundaryCurve) -> Result<MapDiagnostics> {
    let target = map.target();
    let zero = Complex64::new(0.0, 0.0);
    let center_error = (map.eval(zero)? - target).norm();
    let derivative_arg = map.derivative_at_zero(1e-4)?.arg();

    let probes: Vec<Complex64> = [0.3, 0.6, 0.95]
        .iter()
        .flat_map(|&r| crate::series::circle_nodes(r, 16))
        .collect();
    let round_trip_error = probes
        .par_iter()
        .map(|&z| Ok((map.eval_inverse(map.eval(z)?)? - z).norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let cauchy_riemann_residual = map.cauchy_riemann_residual(8, 0.9, 1e-5)?;
    let edge: Vec<Complex64> = crate::series::circle_nodes(0.999, 256).collect();
    let boundary_distance = edge
        .par_iter()
        .map(|&z| map.eval(z).map(|w| boundary.distance_to(w)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let vertex_spacing = boundary
        .segments()
        .map(|(a, b)| (b - a).norm())
        .fold(0.0, f64::max);
    Ok(MapDiagnostics {
        steps: map.steps().len(),
        center_error,
        derivative_arg,
        round_trip_error,
        cauchy_riemann_residual,
        boundary_distance,
        vertex_spacing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, abs_a: f64, abs_big_a: f64, err: f64) -> CoefficientRow {
        CoefficientRow {
            n,
            abs_a,
            abs_big_a,
            diff: abs_big_a - abs_a,
            err,
        }
    }

    #[test]
    fn synthetic_witness_table() {
        let table = [
            row(0, 0.0, 0.0, 0.01),
            row(1, 1.0, 1.2, 0.01),
            row(2, 0.5, 0.3, 0.01),
        ];
        let w = find_witness(&table, 0.05).unwrap();
        assert_eq!((w.n1, w.n2), (1, 2));
        assert!((w.margin1 - 0.2).abs() < 1e-12 && (w.margin2 - 0.2).abs() < 1e-12);
        assert!(!is_equality(&table));
    }

    #[test]
    fn witness_needs_both_signs_beyond_delta_plus_error() {
        let table = [row(1, 1.0, 1.2, 0.01), row(2, 0.5, 0.47, 0.01)];
        assert!(find_witness(&table, 0.05).is_none());
        let table = [row(1, 1.0, 1.2, 0.2), row(2, 0.5, 0.3, 0.01)];
        assert!(find_witness(&table, 0.05).is_none());
        assert!(find_witness(&[], 0.05).is_none());
    }

    #[test]
    fn equal_tables_are_equality_class() {
        let table: Vec<_> = (0..10)
            .map(|n| row(n, 1.0 / (n + 1) as f64, 1.0 / (n + 1) as f64 + 1e-9, 1e-8))
            .collect();
        assert!(is_equality(&table));
        assert!(find_witness(&table, 1e-3).is_none());
    }

    #[test]
    fn hayman_uses_the_error_bar() {
        let h = check_hayman(&[row(0, 2.0, 2.0, 0.0), row(1, 1.0, 0.995, 0.01)]);
        assert!(h.pass);
        let h = check_hayman(&[row(1, 1.0, 0.9, 0.01)]);
        assert!(!h.pass);
    }

    #[test]
    fn origin_valued_series_is_rejected_at_input() {
        let f = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
        let err = run_pipeline(&f, &PipelineConfig::default()).unwrap_err();
        assert_eq!(err.stage(), Some("input"));
    }

    #[test]
    fn disk_containing_origin_is_a_scope_error() {
        let f = PowerSeries::from_real(&[0.5, 1.0]).unwrap();
        let cfg = PipelineConfig {
            boundary_vertices: 128,
            slices: 64,
            degree: 16,
            ..Default::default()
        };
        let err = run_pipeline(&f, &cfg).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Scope);
        assert_eq!(err.stage(), Some("symmetrize"));
    }
}
