use thiserror::Error;

/// Errors raised by construction and query operations. Verification
/// outcomes are never errors; they are reported through
/// [`crate::report::VerificationReport`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational literal {0:?}")]
    ParseRat(String),
    #[error("invalid point literal {0:?}")]
    ParsePoint(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid periodic structure: {0}")]
    PeriodicStructure(String),
    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("cycle {0} does not start and end at the designated point")]
    CycleEndpoint(usize),
    #[error("cycle {index} violates its declared bound: max error {max} > {bound}")]
    CycleBound {
        index: usize,
        max: String,
        bound: String,
    },
    #[error("declared bounds must be nonincreasing")]
    ScheduleOrder,
    #[error("schedule index {0} lies outside the window")]
    ScheduleIndex(usize),
    #[error("pseudo orbit carries no declared schedule")]
    MissingSchedule,
    #[error("schedule verification failed: {0}")]
    ScheduleViolation(String),
    #[error("system provides no inverse")]
    NoInverse,
    #[error("system provides no known invariant sets")]
    NoKnownSets,
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("vertex sets differ")]
    VertexMismatch,
    #[error("point {0} is not a vertex of the graph")]
    NotAVertex(String),
}
