use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },

    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("cannot parse Pauli string {0:?}")]
    ParsePauli(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("generators {0} and {1} anticommute")]
    AnticommutingGenerators(usize, usize),

    #[error("generator {0} has an imaginary sign")]
    ImaginarySign(usize),

    #[error("generators contain -1 in their group; the state is empty")]
    InconsistentSigns,

    #[error("unsupported lattice: {0}")]
    UnsupportedLattice(String),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("crossing: {0}")]
    Crossing(String),

    #[error("budget `{name}` exceeded: need {required}, limit {limit}")]
    Budget { name: &'static str, limit: usize, required: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
}
