use std::path::PathBuf;

/// Errors produced by lattice construction, pulse setup and I/O.
#[derive(Debug, thiserror::Error)]
pub enum QlaError {
    #[error("lattice too small: {nx}x{ny} (both axes must be >= {min})")]
    LatticeTooSmall { nx: usize, ny: usize, min: usize },

    #[error("geometry mismatch: expected {expected_nx}x{expected_ny}, got {nx}x{ny}")]
    GeometryMismatch {
        expected_nx: usize,
        expected_ny: usize,
        nx: usize,
        ny: usize,
    },

    #[error("refractive index must be positive, got {value}")]
    NonPositiveIndex { value: f64 },

    #[error("split fraction must lie in (0,1), got {value}")]
    InvalidSplitFraction { value: f64 },

    #[error("smoothing width must be nonnegative, got {value}")]
    NegativeSmoothingWidth { value: f64 },

    #[error("epsilon must lie in (0, 0.5], got {value}")]
    InvalidEpsilon { value: f64 },

    #[error("pulse parameter {name} must be positive, got {value}")]
    NonPositivePulseParam { name: &'static str, value: f64 },

    #[error("incidence angle must lie in [0, 90) degrees, got {value}")]
    InvalidIncidenceAngle { value: f64 },

    #[error("pulse center ({x:.1}, {y:.1}) lies outside the lattice")]
    PulseCenterOutsideLattice { x: f64, y: f64 },

    #[error(
        "pulse envelope reaches {envelope:.3e} of peak at an inhomogeneity (tolerance {tol:.1e})"
    )]
    PulseOverlapsInterface { envelope: f64, tol: f64 },

    #[error("field contains no energy")]
    ZeroEnergyField,

    #[error("region mask selects no energy")]
    ZeroMaskedEnergy,

    #[error("matrix does not have the expected sparsity structure")]
    BadMatrixStructure,

    #[error("non-finite value in component q{component} at site ({i}, {j})")]
    NonFiniteField { component: usize, i: usize, j: usize },

    #[error("snapshot {path}: {reason}")]
    BadSnapshot { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl QlaError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QlaError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, QlaError>;
