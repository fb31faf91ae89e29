use std::fs;
use std::io::Write;
use std::path::Path;

use circsym_core::harness::{
    run_pipeline, sweep, symmetrize, symmetrized_map, witness_frequency, working_series,
    write_sweep_csv, REPORT_SCHEMA_VERSION,
};
use circsym_core::{Error, PipelineConfig, PowerSeries, Result, SweepSpec, VerificationReport};
use serde::Serialize;

use crate::args::{Command, CommonArgs};
use crate::output::OutputSet;

#[derive(Serialize)]
struct Manifest<'a> {
    tool_version: &'static str,
    command: &'static str,
    flags: &'a CommonArgs,
    config: Option<&'a PipelineConfig>,
    outputs: Vec<String>,
}

/// Runs one subcommand; returns the text for standard output.
pub fn run(command: &Command) -> Result<String> {
    let args = command.args();
    let (mut out, config, summary) = match command {
        Command::Symmetrize(a) => cmd_symmetrize(a)?,
        Command::Map(a) => cmd_map(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Report(a) => cmd_report(a)?,
    };
    let mut outputs = out.names();
    outputs.push("manifest.json".into());
    let manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        command: command.name(),
        flags: args,
        config: config.as_ref(),
        outputs,
    };
    out.add_json("manifest.json", &manifest)?;
    let written = out.commit(&args.out)?;
    let mut text = summary;
    for p in written {
        text.push_str(&format!("wrote {}\n", p.display()));
    }
    Ok(text)
}

type Outcome = (OutputSet, Option<PipelineConfig>, String);

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn config_for(args: &CommonArgs, base: PipelineConfig) -> Result<PipelineConfig> {
    let cfg = args.apply(base);
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_symmetrize(args: &CommonArgs) -> Result<Outcome> {
    let f: PowerSeries = read_json(&args.input)?;
    let cfg = config_for(args, PipelineConfig::default())?;
    let working = working_series(&f, &cfg)?;
    let sym = symmetrize(&working, &cfg)?;

    let mut out = OutputSet::default();
    out.add_with("profile.csv", |w| sym.profile.write_csv(w))?;
    out.add_with("profile_symmetrized.csv", |w| {
        sym.symmetrized_profile.write_csv(w)
    })?;
    out.add_with("boundary.csv", |w| sym.boundary.write_csv(w))?;
    out.add_with("boundary_symmetrized.csv", |w| {
        sym.symmetrized_boundary.write_csv(w)
    })?;

    let mut s = String::new();
    if let Some((lo, hi)) = sym.profile.support() {
        s.push_str(&format!("radial support: ({lo:.6}, {hi:.6})\n"));
    }
    let components = sym
        .profile
        .slices()
        .iter()
        .map(|x| x.arcs.components())
        .max()
        .unwrap_or(0);
    s.push_str(&format!("most arcs in one cross-section: {components}\n"));
    s.push_str(&format!(
        "area: profile {:.10}, shoelace {:.10}, symmetrized shoelace {:.10}\n",
        sym.profile.area(),
        sym.boundary.area_by_shoelace()?,
        sym.symmetrized_boundary.area_by_shoelace()?
    ));
    Ok((out, Some(cfg), s))
}

fn cmd_map(args: &CommonArgs) -> Result<Outcome> {
    let f: PowerSeries = read_json(&args.input)?;
    let cfg = config_for(args, PipelineConfig::default())?;
    let working = working_series(&f, &cfg)?;
    let sym = symmetrize(&working, &cfg)?;
    let map = symmetrized_map(&working, &sym)?;
    let big = map.series(cfg.extraction_radius(), cfg.sample_count(), cfg.degree)?;

    let mut out = OutputSet::default();
    out.add_json("map.json", &map)?;
    out.add_json("symmetrized_series.json", &big)?;
    out.add_with("map_coefficients.csv", |w| {
        writeln!(w, "n,re,im,abs")?;
        for (n, c) in big.coefficients().iter().enumerate() {
            writeln!(w, "{n},{},{},{}", c.re, c.im, c.norm())?;
        }
        Ok(())
    })?;
    let s = format!(
        "map with {} zipper steps; F(0) = {:.12}, A_1 = {:.10}\n",
        map.steps().len(),
        big.coefficient(0).re,
        big.coefficient(1).re
    );
    Ok((out, Some(cfg), s))
}

fn report_tables(out: &mut OutputSet, report: &VerificationReport) -> Result<()> {
    out.add_with("coefficients.csv", |w| report.write_coefficients_csv(w))?;
    out.add_with("means.csv", |w| report.write_means_csv(w))
}

fn cmd_verify(args: &CommonArgs) -> Result<Outcome> {
    let f: PowerSeries = read_json(&args.input)?;
    let cfg = config_for(args, PipelineConfig::default())?;
    let report = run_pipeline(&f, &cfg)?;
    let mut out = OutputSet::default();
    out.add_json("report.json", &report)?;
    report_tables(&mut out, &report)?;
    Ok((out, Some(cfg), report.summary()))
}

fn cmd_sweep(args: &CommonArgs) -> Result<Outcome> {
    let spec: SweepSpec = read_json(&args.input)?;
    let cfg = config_for(args, spec.config.clone().unwrap_or_default())?;
    let rows = sweep(&spec, &cfg);
    let mut out = OutputSet::default();
    out.add_with("sweep.csv", |w| write_sweep_csv(&rows, w))?;
    out.add_json("sweep.json", &rows)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let mut s = format!("{} members, {} failed\n", rows.len(), failed);
    if let Some(freq) = witness_frequency(&rows) {
        s.push_str(&format!(
            "witness frequency among completed members: {freq:.3}\n"
        ));
    }
    Ok((out, Some(cfg), s))
}

fn cmd_report(args: &CommonArgs) -> Result<Outcome> {
    let report: VerificationReport = read_json(&args.input)?;
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(Error::InvalidConfig(format!(
            "report schema version {} is not supported (expected {REPORT_SCHEMA_VERSION})",
            report.schema_version
        )));
    }
    let mut out = OutputSet::default();
    report_tables(&mut out, &report)?;
    Ok((out, Some(report.config.clone()), report.summary()))
}
