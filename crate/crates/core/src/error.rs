use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("capacity exceeded: {requested} qubits requested, maximum is {max}")]
    Capacity { requested: usize, max: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("operator is not Hermitian (max |M - M†| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("operator is not unitary (max |U†U - I| = {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("empty ket specification")]
    EmptySpec,

    #[error("site {site} out of range for {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("site {site} used more than once")]
    SiteCollision { site: usize },

    #[error("{outcome} is not an eigenvalue of {observable}")]
    NotAnEigenvalue { observable: String, outcome: f64 },

    #[error("outcome {outcome} of {observable} has zero probability ({probability:e})")]
    ZeroProbability { observable: String, outcome: f64, probability: f64 },

    #[error("observables {first} and {second} do not commute (max |[A,B]| = {deviation:e})")]
    NonCommuting { first: String, second: String, deviation: f64 },

    #[error("observables {first} and {second} act on overlapping sites")]
    OverlappingSupports { first: String, second: String },

    #[error("wrong number of entries: expected {expected}, found {found}")]
    WrongArity { expected: usize, found: usize },

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}
