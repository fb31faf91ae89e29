use std::f64::consts::PI;

use circsym_core::harness::{run_pipeline, sweep, witness_frequency, Family, Grid, SweepSpec};
use circsym_core::{Classification, MeanFunction, PipelineConfig, PowerSeries, VerificationReport};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn small() -> PipelineConfig {
    PipelineConfig {
        boundary_vertices: 512,
        slices: 256,
        degree: 32,
        ..Default::default()
    }
}

fn quadratic(beta: f64) -> PowerSeries {
    PowerSeries::new(
        vec![c(4.0, 0.0), c(1.0, 0.0), Complex64::from_polar(0.4, beta)],
        1.0,
    )
    .unwrap()
}

#[test]
fn centered_disk_is_an_equality_case() {
    let r = run_pipeline(&PowerSeries::from_real(&[2.0, 1.0]).unwrap(), &small()).unwrap();
    assert_eq!(r.classification, Classification::EqualitySuspected);
    assert!(r.witness.is_none());
    assert!(r.max_coefficient_gap(32) < 1e-3);
    assert!(r.area.identity.residual < 1e-3);
    assert!(r.area.identity.pass);
    assert!((r.hayman.big_a1 - 1.0).abs() < 1e-3);
    for m in &r.means {
        assert!((m.mean_f - m.mean_big_f).abs() < 1e-3 * m.mean_f, "{m:?}");
    }
}

#[test]
fn rotated_disk_symmetrizes_to_the_centered_disk() {
    let f = PowerSeries::new(vec![Complex64::from_polar(2.0, PI / 4.0), c(1.0, 0.0)], 1.0).unwrap();
    let r = run_pipeline(&f, &small()).unwrap();
    assert!((r.symmetrized.coefficient(0) - 2.0).norm() < 1e-6);
    assert!((r.symmetrized.coefficient(1) - 1.0).norm() < 1e-3);
    for row in &r.coefficients {
        assert!(row.diff.abs() < 1e-3, "{row:?}");
    }
    assert!(r.witness.is_none());
    assert_eq!(r.classification, Classification::EqualitySuspected);
}

#[test]
fn truncated_mobius_map_matches_its_oracle() {
    let coefficients: Vec<Complex64> = (0..=40)
        .map(|n| {
            if n == 0 {
                c(3.5, 0.0)
            } else {
                c(0.75 * (-0.5f64).powi(n - 1), 0.0)
            }
        })
        .collect();
    let f = PowerSeries::new(coefficients, 1.0).unwrap();
    let r = run_pipeline(&f, &small()).unwrap();
    // D is the disk |w - 3| < 1 up to a 2^-40 truncation, already symmetric.
    for n in 0..=8 {
        let exact = if n == 0 {
            3.5
        } else {
            0.75 * 0.5f64.powi(n as i32 - 1)
        };
        assert!(
            (r.coefficients[n].abs_big_a - exact).abs() < 1e-3,
            "n = {n}"
        );
    }
}

#[test]
fn twisted_quadratic_has_a_witness_and_satisfies_the_inequalities() {
    let r = run_pipeline(&quadratic(PI / 2.0), &PipelineConfig::default()).unwrap();
    assert!(r.area.identity.residual < 1e-2);
    assert!(r.area.residual_doubled < r.area.identity.residual);
    assert!(r.hayman.pass);
    assert!(r.center.pass && r.reality.pass);
    let row = r
        .means
        .iter()
        .find(|m| m.phi == MeanFunction::Exp && m.r == 0.6)
        .unwrap();
    assert!(row.mean_f <= row.mean_big_f + row.error_estimate);
    assert_eq!(r.classification, Classification::WitnessFound);
    let w = r.witness.unwrap();
    assert!(w.margin1 > r.delta + w.err1 && w.margin2 > r.delta + w.err2);
    assert_eq!(w.confirmed, Some(true));
    assert!(r.littlewood.as_ref().unwrap().iter().all(|x| x.pass));
    assert!(r.all_checks_pass());
}

#[test]
fn exp2_means_agree_with_parseval() {
    let r = run_pipeline(&quadratic(1.0), &small()).unwrap();
    for m in r.means.iter().filter(|m| m.phi == MeanFunction::Exp2) {
        let pf = m.parseval_f.unwrap();
        let pbig = m.parseval_big_f.unwrap();
        assert!((m.mean_f - pf).abs() < 1e-12 * pf, "{m:?}");
        assert!((m.mean_big_f - pbig).abs() < 1e-4 * pbig, "{m:?}");
    }
    assert!(r
        .means
        .iter()
        .all(|m| m.parseval_f.is_some() == (m.phi == MeanFunction::Exp2)));
}

#[test]
fn truncated_rhs_is_monotone_in_degree() {
    let r = run_pipeline(&quadratic(2.0), &small()).unwrap();
    let mut last = 0.0;
    for n in 1..=32 {
        let s = r.symmetrized.dirichlet_sum(n);
        assert!(s >= last);
        last = s;
    }
}

#[test]
fn refinement_does_not_increase_the_residual() {
    let f = quadratic(PI / 4.0);
    let coarse = run_pipeline(&f, &small()).unwrap();
    let fine = run_pipeline(&f, &small().doubled()).unwrap();
    assert!(fine.area.identity.residual <= 1.5 * coarse.area.identity.residual);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let f = quadratic(0.3);
    let a = run_pipeline(&f, &small()).unwrap();
    let b = run_pipeline(&f, &small()).unwrap();
    let ja = serde_json::to_string(&a).unwrap();
    assert_eq!(ja, serde_json::to_string(&b).unwrap());
    let back: VerificationReport = serde_json::from_str(&ja).unwrap();
    assert_eq!(back, a);
    assert_eq!(back.schema_version, 1);

    let mut csv = Vec::new();
    a.write_coefficients_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().next(), Some("n,abs_a,abs_A,diff,err"));
    assert_eq!(text.lines().count(), 34);
}

#[test]
fn report_embeds_its_configuration() {
    let cfg = PipelineConfig {
        witness_delta: Some(0.01),
        ..small()
    };
    let r = run_pipeline(&quadratic(1.0), &cfg).unwrap();
    assert_eq!(r.config, cfg);
    assert_eq!(r.delta, 0.01);
    let again = run_pipeline(&r.input, &r.config).unwrap();
    assert_eq!(again, r);
}

#[test]
fn working_radius_dilates_the_input() {
    let cfg = PipelineConfig {
        rho: Some(0.5),
        ..small()
    };
    let f = PowerSeries::from_real(&[3.0, 2.0]).unwrap();
    let r = run_pipeline(&f, &cfg).unwrap();
    assert_eq!(r.rho, 0.5);
    assert_eq!(r.working.coefficient(1).re, 1.0);
    assert!((r.hayman.big_a1 - 1.0).abs() < 1e-3);
}

#[test]
fn rotated_disk_sweep_is_all_equality() {
    let spec = SweepSpec {
        family: Family::RotatedDisk {
            radius: 2.0,
            scale: 1.0,
        },
        grid: Some(Grid::Linspace {
            start: 0.0,
            end: PI,
            count: 4,
        }),
        config: None,
    };
    let rows = sweep(&spec, &small());
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.index, i);
        assert_eq!(row.classification.as_deref(), Some("equality"), "{row:?}");
    }
    assert_eq!(witness_frequency(&rows), Some(0.0));
}

#[test]
fn quadratic_sweep_rows_are_ordered_and_find_witnesses() {
    let spec = SweepSpec {
        grid: Some(Grid::Linspace {
            start: 0.0,
            end: PI,
            count: 7,
        }),
        ..SweepSpec::quadratic_corpus(7)
    };
    let rows = sweep(&spec, &small());
    assert_eq!(rows.len(), 7);
    assert!(rows.windows(2).all(|w| w[0].parameter < w[1].parameter));
    assert!(rows.iter().all(|r| r.error.is_none()));
    assert!(witness_frequency(&rows).unwrap() > 0.0);
}
