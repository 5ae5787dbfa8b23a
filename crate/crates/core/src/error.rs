use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {modulus:?} is reducible over GF({p})")]
    Reducible { p: u64, modulus: Vec<u32> },
    #[error("group count k={k} outside the allowed range {min}..={max}")]
    KRange { k: usize, min: usize, max: usize },
    #[error("not a valid transversal design: {0}")]
    InvalidTd(String),
    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("ingredient mismatch: {0}")]
    IngredientMismatch(String),
    #[error("invalid group partition: {0}")]
    BadPartition(String),
    #[error("design has no all-ones resolution")]
    NotResolvable,
    #[error("bad class grouping: {0}")]
    BadGrouping(String),
    #[error("invalid resolution: {0}")]
    InvalidResolution(String),
    #[error("ingredient orders must satisfy a <= b <= c, got ({a}, {b}, {c})")]
    Order { a: u64, b: u64, c: u64 },
    #[error("design needs {cells} cells, budget is {budget}")]
    SizeBudget { cells: u128, budget: u64 },
    #[error("value out of range: {0}")]
    Range(String),
    #[error("malformed object: {0}")]
    Malformed(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
