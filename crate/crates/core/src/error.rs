use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("unknown symbol '{0}'")]
    UnknownSymbol(char),

    #[error("convergent denominator q = {q} is too small for this window; need q > {required}")]
    DenominatorTooSmall { q: i64, required: i64 },

    #[error("site {index} is an unfilled hole and no extension letter is declared")]
    UnfilledHole { index: i64 },

    #[error("window of {len} sites is too short; need at least {required}")]
    WindowTooShort { len: usize, required: usize },

    #[error("no legal level-{level} partition of the window")]
    NoPartition { level: usize },

    #[error("level-{level} partition is ambiguous (legal residues {residues:?}); a window of {required} sites is sufficient")]
    AmbiguousPartition {
        level: usize,
        residues: Vec<usize>,
        required: usize,
    },

    #[error("{count} templates exceed the exhaustive-search cap of {cap}; use the beam search")]
    TemplateBudget { count: u128, cap: u128 },

    #[error("level {level} exceeds the trace budget of {max}")]
    LevelBudget { level: usize, max: usize },

    #[error("product overflow at energy {energy}")]
    Overflow { energy: f64 },

    #[error("energy {0} lies outside (-2, 2)")]
    EnergyOutOfRange(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
