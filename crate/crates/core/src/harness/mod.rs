//! End-to-end verification: `f -> D -> D* -> F -> A_n`, the inequality and
//! identity checks, resolution-doubling error estimates and parameter sweeps.

mod config;
mod pipeline;
mod report;
mod sweep;

pub use config::PipelineConfig;
pub use pipeline::{
    check_area_identity, check_hayman, coefficient_table, find_witness, is_equality, run_pipeline,
    symmetrize, symmetrized_map, working_series, Symmetrization,
};
pub use report::{
    AreaCheck, AreaIdentity, AreaTriple, CenterCheck, Classification, CoefficientRow, HaymanCheck,
    MapDiagnostics, MeanRow, RealityCheck, VerificationReport, Witness, REPORT_SCHEMA_VERSION,
};
pub use sweep::{sweep, witness_frequency, write_sweep_csv, Family, Grid, SweepRow, SweepSpec};
