//! Error type shared across the crate.

use crate::moves::Move;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid problem: n={n}, p={p} (need n >= 1 and 3 <= p <= 65535)")]
    InvalidProblem { n: u64, p: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("peg {peg} out of range 1..={pegs}")]
    PegOutOfRange { peg: u32, pegs: u32 },

    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: Move, reason: String },

    #[error("cannot concatenate: first path ends in a different state than the second starts in")]
    EndpointMismatch,

    #[error("state code {code} out of range for {n} disks on {p} pegs")]
    CodeOutOfRange { code: u64, n: u32, p: u32 },

    #[error("state space of {states} states needs {required_bytes} bytes, over the {budget_bytes}-byte budget")]
    BudgetExceeded {
        states: u128,
        required_bytes: u128,
        budget_bytes: u64,
    },

    #[error("malformed serialized data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
