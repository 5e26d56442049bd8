//! Multi-peg Tower of Hanoi toolkit.
//!
//! The classical puzzle moves a tower of `n` disks between pegs, one disk at
//! a time, never placing a disk on a smaller one. This crate works with the
//! generalized puzzle on `p >= 3` pegs and provides four layers:
//!
//! * [`state`], [`moves`], [`path`] — the puzzle model: states, legal moves
//!   annotated with support triples, and legality-checked move sequences.
//! * [`numerics`] — exact move-count arithmetic: the presumed-optimal count
//!   `K(n, p)` in closed form and as a recurrence, split choices, and the
//!   growth law for `K(n, p) - K(n - 1, p)`.
//! * [`constructor`] — builds concrete solutions of length exactly `K(n, p)`
//!   as a lazy move stream, plus an independent validator.
//! * [`oracle`] and [`analysis`] — exhaustive breadth-first search over the
//!   full state space (exact minima, no formulas involved) and structural
//!   checks on optimal solutions: the demolish/rebuild symmetry, stack layout
//!   at the moment the largest disk moves, and base statistics.
//!
//! The oracle is the ground truth the formulas are checked against: for every
//! instance that fits in memory, `m_number` returns the true minimum and the
//! toolkit compares it against `K(n, p)`.

pub mod analysis;
pub mod constructor;
pub mod error;
pub mod moves;
pub mod numerics;
pub mod oracle;
pub mod path;
pub mod state;

pub use error::{Error, Result};
pub use moves::{Move, Triple};
pub use path::Path;
pub use state::{Problem, State};

pub use num_bigint::BigUint;
