use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("channel subset is empty")]
    EmptySubset,

    #[error("channel index {0} appears more than once")]
    DuplicateChannel(usize),

    #[error("channel index {index} out of range for {channels} channels")]
    ChannelOutOfRange { index: usize, channels: usize },

    #[error("channels {0} and {1} must be distinct")]
    SameChannel(usize, usize),

    #[error("channel {0} appears both in the analyzed pair and in the conditioning set")]
    OverlappingChannels(usize),

    #[error("joint alphabet of {cells} cells exceeds the cap of {cap} cells")]
    AlphabetTooLarge { cells: u128, cap: usize },

    #[error(
        "symbol {symbol} in channel {channel} (row {row}) is outside alphabet of size {alphabet}"
    )]
    SymbolOutOfRange {
        row: usize,
        channel: usize,
        symbol: u32,
        alphabet: u32,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("regressor matrix is rank deficient at model order {order}")]
    RankDeficient { order: usize },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("model is not stationary (companion spectral radius {radius:.6})")]
    NonStationary { radius: f64 },

    #[error("Lyapunov iteration did not converge after {iterations} doubling steps")]
    LyapunovNoConvergence { iterations: usize },

    #[error("block-Toeplitz system for channels {subset:?} is singular")]
    SingularToeplitz { subset: Vec<usize> },

    #[error("information measure is negative beyond tolerance: {value:e}")]
    NegativeInformation { value: f64 },

    #[error("both measures flagged significant but max(IS, cIS) = 0")]
    ContradictoryClassification,

    #[error("missing column '{0}'")]
    MissingColumn(String),

    #[error("row {row}, column '{column}': {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
