use thiserror::Error;

/// Every failure the library can report.
///
/// Variants carry enough context to be rendered as a machine readable
/// record by the command line front end (see [`Error::module`] and
/// [`Error::case`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("branch intervals {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("alphabet needs at least two branches, got {0}")]
    Alphabet(usize),

    #[error("symbol {symbol} is outside the alphabet of size {alphabet}")]
    Symbol { symbol: usize, alphabet: usize },

    #[error("word of length {len} is shorter than the potential depth {depth}")]
    WordTooShort { len: usize, depth: usize },

    #[error("potentials are not compatible: {0}")]
    Depth(String),

    #[error("boundary regime needs a depth-1 step potential, got depth {0}")]
    BoundaryDepth(usize),

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("requested size {requested} exceeds the budget of {budget}")]
    Budget { requested: u128, budget: u128 },

    #[error("interior regime required: {0}")]
    Regime(String),

    #[error("level range of width {width} exceeds the cap of {cap}")]
    Width { width: usize, cap: usize },

    #[error("step potential must be integer valued, found {0}")]
    NonIntegerStep(f64),

    #[error("both the Newton and the nested solve failed: {0}")]
    SingularJacobian(String),

    #[error("point {0} is not on the repeller (gap or branch boundary)")]
    EscapeFromRepeller(f64),

    #[error("prefix of length {len} only resolves the point to width {width:e}")]
    Precision { len: usize, width: f64 },

    #[error("root bracket could not be established: {0}")]
    Bracket(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Name of the library module that raises this error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Overlap { .. }
            | Error::Range(_)
            | Error::Alphabet(_)
            | Error::Symbol { .. }
            | Error::WordTooShort { .. } => "symbolic",
            Error::Convergence { .. } | Error::Budget { .. } | Error::Bracket(_) => "pressure",
            Error::Depth(_)
            | Error::BoundaryDepth(_)
            | Error::Regime(_)
            | Error::Width { .. }
            | Error::NonIntegerStep(_) => "fibre",
            Error::SingularJacobian(_) => "spectrum",
            Error::EscapeFromRepeller(_) | Error::Precision { .. } => "sim",
            Error::Validation(_) | Error::Io(_) => "cli",
        }
    }

    /// Short stable name of the error case.
    pub fn case(&self) -> &'static str {
        match self {
            Error::Overlap { .. } => "OverlapError",
            Error::Range(_) => "RangeError",
            Error::Alphabet(_) => "AlphabetError",
            Error::Symbol { .. } => "SymbolError",
            Error::WordTooShort { .. } => "WordTooShortError",
            Error::Depth(_) => "DepthError",
            Error::BoundaryDepth(_) => "BoundaryDepthError",
            Error::Convergence { .. } => "ConvergenceError",
            Error::Budget { .. } => "BudgetError",
            Error::Regime(_) => "RegimeError",
            Error::Width { .. } => "WidthError",
            Error::NonIntegerStep(_) => "NonIntegerStepError",
            Error::SingularJacobian(_) => "SingularJacobianError",
            Error::EscapeFromRepeller(_) => "EscapeFromRepellerError",
            Error::Precision { .. } => "PrecisionError",
            Error::Bracket(_) => "BracketError",
            Error::Validation(_) => "ValidationError",
            Error::Io(_) => "IoError",
        }
    }

    /// Input problems (as opposed to numerical failures).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Overlap { .. }
                | Error::Range(_)
                | Error::Alphabet(_)
                | Error::Symbol { .. }
                | Error::WordTooShort { .. }
                | Error::Depth(_)
                | Error::NonIntegerStep(_)
                | Error::Validation(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
