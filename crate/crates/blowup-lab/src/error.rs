use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Two broad families matter to callers: precondition violations
/// (bad grids, bad parameters, mismatched fields) which are caught
/// before any arithmetic runs, and runtime violations (non-finite
/// intermediate states) which indicate a step-size or quadrature bug
/// rather than physical blow-up.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has {got} values but the grid has {want} nodes")]
    LengthMismatch { got: usize, want: usize },

    #[error("non-finite value {value} at node {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("potential never falls below gamma = {gamma}; a decaying coefficient is required")]
    DecayRequired { gamma: f64 },

    #[error("negative initial data {value} at node {index}; nonnegative data required")]
    NegativeData { index: usize, value: f64 },

    #[error("initial data has a positive part ({value} at node {index}); nonpositive data required")]
    PositiveData { index: usize, value: f64 },

    #[error("time {t} not covered by trajectory span [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("t = {t} lies outside the admissible window (0, {window}]")]
    OutsideWindow { t: f64, window: f64 },

    #[error("non-finite state at t = {t}: step-size bug, not blow-up")]
    NonFiniteState { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for parameter errors.
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
