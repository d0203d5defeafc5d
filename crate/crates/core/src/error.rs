use thiserror::Error;

use crate::net::NetReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be in [2, 2^32), got {0}")]
    InvalidModulus(u64),

    #[error("ring mismatch: Z/{left} vs Z/{right}")]
    RingMismatch { left: u64, right: u64 },

    #[error("{d} is not a divisor of {m}")]
    NotADivisor { d: u64, m: u64 },

    #[error("index {index} is out of range for n = {n}")]
    IndexOutOfRange { index: i32, n: usize },

    #[error("rank n must be at least 1")]
    EmptyIndexSet,

    #[error("not a partition of the index set: {0}")]
    NotAPartition(String),

    #[error("equivalence relation is not unitary: {i} ~ {j} but {} !~ {}", -i, -j)]
    NotUnitary { i: i32, j: i32 },

    #[error("invalid transvection index pair ({i}, {j})")]
    InvalidTransvection { i: i32, j: i32 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry {value} at ({row}, {col}) is not reduced modulo {m}")]
    UnreducedEntry { row: usize, col: usize, value: u64, m: u64 },

    #[error("parameter {value} is not reduced modulo {m}")]
    UnreducedParameter { value: u64, m: u64 },

    #[error("matrix fails the mirror test: a * mirror(a) differs from e at ({row}, {col})")]
    NotSymplectic { row: i32, col: i32 },

    #[error("side conditions of {relation} violated: {detail}")]
    SideCondition { relation: &'static str, detail: String },

    #[error("invalid form net: {0}")]
    InvalidNet(Box<NetReport>),

    #[error("level seed entry ({i}, {j}) is not allowed: {reason}")]
    InvalidSeed { i: i32, j: i32, reason: &'static str },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("matrix is not a one-row parabolic element for p = {p}: entry ({row}, {col})")]
    NotOneRow { p: i32, row: i32, col: i32 },

    #[error("Z/{factor} is not a CRT component of Z/{m}")]
    NotAComponent { factor: u64, m: u64 },
}
