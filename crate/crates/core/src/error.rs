use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no bond with id {id} at level {level}")]
    Lookup { level: usize, id: usize },

    #[error("level {level} out of range (valid: {valid})")]
    Range { level: usize, valid: String },

    #[error("bonds {a} and {b} at level {level} do not glue at depth {depth}")]
    Composition {
        level: usize,
        depth: usize,
        a: usize,
        b: usize,
    },

    #[error("clique budget of {0} exceeded")]
    CliqueBudget(usize),

    #[error("simplices of dimension {found} exceed the dimension cap {cap}")]
    DimCap { found: usize, cap: usize },

    #[error("filtration is not monotone: face {face:?} has value {face_value} above coface {coface:?} with value {coface_value}")]
    NotMonotone {
        face: Vec<usize>,
        face_value: f64,
        coface: Vec<usize>,
        coface_value: f64,
    },

    #[error("neuron universes differ: {0} vs {1}")]
    Universe(usize, usize),

    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
