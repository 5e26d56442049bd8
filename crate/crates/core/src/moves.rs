//! Moves and their support triples.
//!
//! Every move is annotated with a triple `(j, i, t)`: the disk `j` that
//! moved, the disk `i` it was lifted off, and the disk `t` it landed on.
//! A missing support (the disk sat on, or lands on, the bare peg) is the
//! infinity sentinel, serialized as the string `"inf"`. For a legal move the
//! finite entries always exceed `j`, since a disk only ever rests on a
//! larger one.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Support half of a move record: what the disk was resting on before the
/// move and what it rests on after. `None` encodes the bare peg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    pub lifted_from: Option<u32>,
    pub placed_on: Option<u32>,
}

/// One disk relocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MoveRepr", into = "MoveRepr")]
pub struct Move {
    pub disk: u32,
    pub from: u32,
    pub to: u32,
    pub triple: Triple,
}

impl Move {
    /// The inverse relocation. Undoing a move swaps its supports: the disk
    /// is lifted off what it had been placed on, and lands back on what it
    /// was lifted from.
    pub fn reversed(&self) -> Move {
        Move {
            disk: self.disk,
            from: self.to,
            to: self.from,
            triple: Triple {
                lifted_from: self.triple.placed_on,
                placed_on: self.triple.lifted_from,
            },
        }
    }

    /// Structural sanity of the record itself (not tied to any state):
    /// distinct pegs and finite supports larger than the moved disk.
    pub fn well_formed(&self) -> bool {
        let sup_ok = |s: Option<u32>| s.is_none_or(|d| d > self.disk);
        self.from != self.to
            && self.disk >= 1
            && sup_ok(self.triple.lifted_from)
            && sup_ok(self.triple.placed_on)
    }
}

/// Compact text form `disk:from>to`, one move per line in solution listings.
impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}>{}", self.disk, self.from, self.to)
    }
}

#[derive(Serialize, Deserialize)]
struct MoveRepr {
    disk: u32,
    from: u32,
    to: u32,
    triple: (u32, Support, Support),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Support {
    Disk(u32),
    Word(String),
}

impl From<Option<u32>> for Support {
    fn from(v: Option<u32>) -> Support {
        match v {
            Some(d) => Support::Disk(d),
            None => Support::Word("inf".to_string()),
        }
    }
}

impl TryFrom<Support> for Option<u32> {
    type Error = Error;

    fn try_from(s: Support) -> Result<Option<u32>, Error> {
        match s {
            Support::Disk(d) => Ok(Some(d)),
            Support::Word(w) if w == "inf" => Ok(None),
            Support::Word(w) => Err(Error::Malformed(format!(
                "triple entry must be a disk number or \"inf\", got \"{w}\""
            ))),
        }
    }
}

impl From<Move> for MoveRepr {
    fn from(m: Move) -> MoveRepr {
        MoveRepr {
            disk: m.disk,
            from: m.from,
            to: m.to,
            triple: (
                m.disk,
                m.triple.lifted_from.into(),
                m.triple.placed_on.into(),
            ),
        }
    }
}

impl TryFrom<MoveRepr> for Move {
    type Error = Error;

    fn try_from(r: MoveRepr) -> Result<Move, Error> {
        let (j, i, t) = r.triple;
        if j != r.disk {
            return Err(Error::Malformed(format!(
                "triple disk {j} does not match move disk {}",
                r.disk
            )));
        }
        let mv = Move {
            disk: r.disk,
            from: r.from,
            to: r.to,
            triple: Triple {
                lifted_from: i.try_into()?,
                placed_on: t.try_into()?,
            },
        };
        if !mv.well_formed() {
            return Err(Error::Malformed(format!("move {mv} is not well-formed")));
        }
        Ok(mv)
    }
}
