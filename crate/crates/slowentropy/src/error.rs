use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("box index n must be at least 1 (H_0 is empty)")]
    ZeroBoxIndex,

    #[error("radius must lie in (0, 1), got {0}")]
    RadiusOutOfRange(String),

    #[error("words agree on their whole common range but one is shorter; disagreement undecided")]
    InsufficientLength,

    #[error("operation is only implemented for one-sided actions with d = 1")]
    UnsupportedAction,

    #[error("power-ball windows disconnect: resolution order {resolution} is below the power {power}")]
    DisconnectedWindows { power: u32, resolution: u32 },

    #[error("depth cap {cap} is below the minimum ball depth {min_depth}")]
    CapBelowMinDepth { cap: u32, min_depth: u32 },

    #[error("enumeration cap exceeded: {count} prefixes at depth {depth}, cap {cap}")]
    EnumerationCap { count: String, depth: u32, cap: u64 },

    #[error("node budget exceeded: more than {budget} distinct tree nodes")]
    BudgetExceeded { budget: u64 },

    #[error("classification undetermined, value bracket [{lo}, {hi}]")]
    Undetermined { lo: f64, hi: f64 },

    #[error("growth analysis inconclusive: {0}")]
    UnknownGrowth(String),

    #[error("{0}")]
    InvalidDescriptor(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("measure '{name}' places mass {mass} outside its declared support")]
    SupportViolation { name: String, mass: String },

    #[error("mass distribution infeasible: {0}")]
    Infeasible(String),

    #[error("config error at '{path}': expected {expected}, found {found}")]
    Schema {
        path: String,
        expected: String,
        found: String,
    },

    #[error("config semantic error: {0}")]
    Semantic(String),

    #[error("liminf undecided on {failed} of {total} sampled points")]
    Undecided { failed: usize, total: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
