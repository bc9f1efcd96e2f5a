use thiserror::Error;

/// Domain errors raised by the numerical operations.
///
/// Every variant carries the name of the condition that raised it, so the
/// CLI can report it verbatim (see [`Error::name`]).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("orbit exceeded the magnitude cap {cap:e} at step {step}")]
    Overflow { step: usize, cap: f64 },
    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Newton matrix (|det| = {det:e}, condition estimate {condition:e})")]
    SingularDifferential { det: f64, condition: f64 },
    #[error("linear step is not invertible (det = {det:e})")]
    SingularLinear { det: f64 },
    #[error("chain flagged volume preserving has a linear step with det = {det}")]
    NotVolumePreserving { det: String },
    #[error("inverse requested for a forward-only endomorphism")]
    NotInvertible,
    #[error("fixed point is {found}, not a saddle")]
    NotASaddle { found: String },
    #[error("graph transform contraction ratio {ratio:.3} exceeds 0.95; shrink delta")]
    DeltaTooLarge { ratio: f64 },
    #[error("graphs are sampled on different meshes")]
    MeshMismatch,
    #[error("orbit neither escaped nor reached the local graph in {iterations} steps")]
    Inconclusive { iterations: usize },
    #[error("map is not tangent to the identity at the origin (deviation {deviation:e})")]
    NotTangentToIdentity { deviation: f64 },
    #[error("direction must be normalized to (1,0)")]
    VNotNormalized,
    #[error("vector is not a characteristic direction (residual {residual:e})")]
    NotCharacteristic { residual: f64 },
    #[error("quadratic part is not divergence free (defect {defect:e})")]
    NotDivergenceFree { defect: f64 },
    #[error("characteristic direction is degenerate (lambda = 0)")]
    DegenerateDirection,
    #[error("blow-up image has x1 = 0")]
    BlowupSingular,
    #[error("no cell of the u-disc survives in the sector")]
    NoSurvivor,
    #[error("{clusters} separated clusters survive at the final resolution")]
    Ambiguous { clusters: usize },
    #[error("sample count is zero")]
    EmptySample,
    #[error("pole hit: 1 + z vanishes at step {step}")]
    PoleHit { step: usize },
    #[error("bisection exhausted precision (deepest theta tried {theta:e})")]
    NotFound { theta: f64 },
    #[error("point claimed by components {first} and {second}")]
    AmbiguousComponent { first: String, second: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("sequence map {index} is not tangent to the identity at 0 (deviation {deviation:e})")]
    NotTangentSequence { index: usize, deviation: f64 },
    #[error("map definition: {0}")]
    MapFormat(String),
}

impl Error {
    /// Stable identifier of the error condition.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Overflow { .. } => "Overflow",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SingularDifferential { .. } => "SingularDifferential",
            Error::SingularLinear { .. } => "SingularLinear",
            Error::NotVolumePreserving { .. } => "NotVolumePreserving",
            Error::NotInvertible => "NotInvertible",
            Error::NotASaddle { .. } => "NotASaddle",
            Error::DeltaTooLarge { .. } => "DeltaTooLarge",
            Error::MeshMismatch => "MeshMismatch",
            Error::Inconclusive { .. } => "Inconclusive",
            Error::NotTangentToIdentity { .. } => "NotTangentToIdentity",
            Error::VNotNormalized => "VNotNormalized",
            Error::NotCharacteristic { .. } => "NotCharacteristic",
            Error::NotDivergenceFree { .. } => "NotDivergenceFree",
            Error::DegenerateDirection => "DegenerateDirection",
            Error::BlowupSingular => "BlowupSingular",
            Error::NoSurvivor => "NoSurvivor",
            Error::Ambiguous { .. } => "Ambiguous",
            Error::EmptySample => "EmptySample",
            Error::PoleHit { .. } => "PoleHit",
            Error::NotFound { .. } => "NotFound",
            Error::AmbiguousComponent { .. } => "AmbiguousComponent",
            Error::InvalidParams(_) => "InvalidParams",
            Error::NotTangentSequence { .. } => "NotTangentSequence",
            Error::MapFormat(_) => "MapFormat",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
