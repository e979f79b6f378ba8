use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol {symbol} occurs {count} times; every symbol must occur exactly twice")]
    NotDoubleOccurrence { symbol: u32, count: usize },

    #[error("operation is undefined on the empty word")]
    EmptyWord,

    #[error("factor {0} is not a maximal repeat or return factor of the word")]
    NotAMaximalFactor(String),

    #[error("inserted word shares symbol {0} with the host word")]
    AlphabetCollision(u32),

    #[error("cannot parse word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("parameter {name} = {value} is out of range ({expected})")]
    InvalidParameter {
        name: &'static str,
        value: i64,
        expected: &'static str,
    },

    #[error("vertex {0:?} is not in the graph")]
    MissingVertex(String),

    #[error("vertex {0:?} is already in the graph")]
    DuplicateVertex(String),

    #[error("self-loop at vertex {0:?}")]
    SelfLoop(String),

    #[error("zero-dimensional cells have no facets")]
    ZeroDimensionalCell,

    #[error("boundary dimension {dim} is outside 1..={top}")]
    DimensionOutOfRange { dim: usize, top: usize },

    #[error("inconsistent complex: boundary composition in degree {dim} is nonzero")]
    InconsistentComplex { dim: usize },

    #[error("malformed graph data: {0}")]
    GraphFormat(String),

    #[error("time budget exceeded")]
    BudgetExceeded,
}
