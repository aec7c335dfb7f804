use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is out of range (inputs must be below 2^127)")]
    OutOfRange { value: String },

    #[error("zero has no prime factorization")]
    Zero,

    #[error("{0} is not prime")]
    NotPrime(u128),

    #[error("progression {r} mod {m} is empty by design: gcd({r}, {m}) = {gcd}")]
    DegenerateProgression { r: u64, m: u64, gcd: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid residue class {r} mod {m}: need 0 <= r < m")]
    InvalidClass { r: i128, m: i128 },

    #[error("invalid search window: {0}")]
    InvalidWindow(String),

    #[error("budget exceeded: {what} is {actual}, limit {limit}")]
    Budget {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("magnitude bound exceeded: |n - z^k| = {value} for z = {z} (limit {limit})")]
    Magnitude { z: i128, value: String, limit: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A family target produced a counterexample to the theorem it instantiates.
    #[error("THEOREM VIOLATION: {0}")]
    TheoremViolation(String),
}
