use thiserror::Error;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or invalid input.
    Input,
    /// Input outside the supported geometry (origin inside, slits, self-intersection).
    Scope,
    /// A numerical routine lost track of its branch or otherwise failed.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {z} lies outside the trusted radius {rho}")]
    DomainViolation { z: String, rho: f64 },

    #[error("{samples} samples cannot resolve degree {degree}; need at least {}", 2 * degree + 2)]
    InsufficientSampling { samples: usize, degree: usize },

    #[error("invalid power series: {0}")]
    InvalidSeries(String),

    #[error("check not applicable: {0}")]
    Inapplicable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid boundary curve: {0}")]
    InvalidCurve(String),

    #[error("boundary curve self-intersects between segments {first} and {second}; input is not univalent")]
    NonUnivalent { first: usize, second: usize },

    #[error("point {point} is within {distance:e} of the boundary curve")]
    BoundaryAmbiguity { point: String, distance: f64 },

    #[error("curve is negatively oriented (signed area {0})")]
    Orientation(f64),

    #[error("domain outside supported scope: {0}")]
    OutOfScope(String),

    #[error("zipper geometry error at vertex {vertex}: {reason}")]
    Geometry { vertex: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("branch tracking failed at step {step}: {value}")]
    NumericalBranch { step: usize, value: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DomainViolation { .. }
            | Error::InsufficientSampling { .. }
            | Error::InvalidSeries(_)
            | Error::Inapplicable(_)
            | Error::InvalidConfig(_)
            | Error::InvalidCurve(_)
            | Error::Precondition(_)
            | Error::Json(_)
            | Error::Io(_) => ErrorKind::Input,
            Error::NonUnivalent { .. }
            | Error::BoundaryAmbiguity { .. }
            | Error::Orientation(_)
            | Error::OutOfScope(_)
            | Error::Geometry { .. } => ErrorKind::Scope,
            Error::NumericalBranch { .. } => ErrorKind::Numerical,
            Error::Stage { source, .. } => source.kind(),
        }
    }

    /// Pipeline stage that produced the error, if it was tagged with one.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}
