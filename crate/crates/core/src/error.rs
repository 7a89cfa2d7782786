use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("block {block:?} is not a subset of the index set 0..{len}")]
    BlockOutOfRange { block: Vec<usize>, len: usize },

    #[error("set partition does not cover the index set 0..{len} exactly once")]
    NotASetPartition { len: usize },

    #[error("negative argument {0} to double factorial")]
    NegativeDoubleFactorial(i64),

    #[error("multinomial parts sum to {sum}, expected {top}")]
    MultinomialMismatch { top: u64, sum: u64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid moduli parameters: {0}")]
    Moduli(String),

    #[error("unstable tree: {0}")]
    Unstable(String),

    #[error("{sigma} is not a housing partition for g={g}, d={d}")]
    NotHousing { sigma: String, g: u32, d: u32 },

    #[error("partition {sigma} has length above the bound {bound}")]
    LengthBound { sigma: String, bound: usize },

    #[error("block factor of an empty block")]
    EmptyBlock,

    #[error("oracle input has {symbols} symbols, above the bound {bound}")]
    OracleBound { symbols: usize, bound: usize },

    #[error("order must be a permutation of 0..{0}")]
    BadOrder(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
