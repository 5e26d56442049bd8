//! Legality-checked move sequences.
//!
//! A `Path` is a nonempty run of states in which consecutive states differ
//! by exactly one legal move. Construction is the only way to obtain one, so
//! holding a `Path` is proof of legality; every derived move carries its
//! support triple.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moves::Move;
use crate::state::State;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub struct Path {
    states: Vec<State>,
    moves: Vec<Move>,
}

impl Path {
    /// The empty path sitting at one state.
    pub fn single(state: State) -> Path {
        Path {
            states: vec![state],
            moves: Vec::new(),
        }
    }

    /// Rebuilds the move sequence from a state-by-state trace. Each adjacent
    /// pair must differ in exactly one disk, by a legal move.
    pub fn from_states(states: Vec<State>) -> Result<Path> {
        if states.is_empty() {
            return Err(Error::InvalidArgument("a path needs at least one state".into()));
        }
        let mut moves = Vec::with_capacity(states.len() - 1);
        for w in states.windows(2) {
            moves.push(step_between(&w[0], &w[1])?);
        }
        Ok(Path { states, moves })
    }

    /// Applies `moves` starting from `initial`, validating every step.
    pub fn from_moves(initial: State, moves: impl IntoIterator<Item = Move>) -> Result<Path> {
        let mut path = Path::single(initial);
        for mv in moves {
            path.push(mv)?;
        }
        Ok(path)
    }

    /// Extends the path by one legal move.
    pub fn push(&mut self, mv: Move) -> Result<()> {
        let next = self.last().apply_move(&mv)?;
        self.states.push(next);
        self.moves.push(mv);
        Ok(())
    }

    /// Number of moves (one less than the number of states).
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn first(&self) -> &State {
        &self.states[0]
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("paths are nonempty")
    }

    /// Joins two paths sharing an endpoint; the length adds up exactly.
    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.last() != other.first() {
            return Err(Error::EndpointMismatch);
        }
        let mut states = self.states.clone();
        states.extend_from_slice(&other.states[1..]);
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&other.moves);
        Ok(Path { states, moves })
    }

    /// How many moves relocate a disk from `disks`.
    pub fn count_moves(&self, disks: &BTreeSet<u32>) -> u64 {
        self.moves
            .iter()
            .filter(|m| disks.contains(&m.disk))
            .count() as u64
    }

    /// Projects the path onto a nonempty disk subset. Surviving disks are
    /// renumbered `1..=|A|` in size order; pegs are untouched. Steps that
    /// moved a discarded disk collapse (consecutive duplicate states are
    /// deduplicated), so the result has exactly `count_moves(A)` moves and
    /// is itself legal: removing disks never blocks a move.
    pub fn restrict(&self, disks: &BTreeSet<u32>) -> Path {
        assert!(!disks.is_empty(), "restriction needs a nonempty disk set");
        let keep: Vec<u32> = disks
            .iter()
            .copied()
            .filter(|&d| d >= 1 && d <= self.first().disks())
            .collect();
        assert!(
            keep.len() == disks.len(),
            "restriction set mentions disks outside the problem"
        );
        let pegs = self.first().pegs();
        let mut states: Vec<State> = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let assignment: Vec<u16> = keep.iter().map(|&d| s.peg_of(d) as u16).collect();
            let sub = State::new(assignment, pegs).expect("projection of a valid state");
            if states.last() != Some(&sub) {
                states.push(sub);
            }
        }
        Path::from_states(states).expect("projection of a legal path stays legal")
    }
}

/// Recovers the single legal move between two adjacent states.
fn step_between(a: &State, b: &State) -> Result<Move> {
    if a.disks() != b.disks() || a.pegs() != b.pegs() {
        return Err(Error::InvalidArgument(
            "adjacent states describe different problems".into(),
        ));
    }
    let mut moved = None;
    for d in 1..=a.disks() {
        if a.peg_of(d) != b.peg_of(d) {
            if moved.is_some() {
                return Err(Error::InvalidArgument(
                    "adjacent states differ in more than one disk".into(),
                ));
            }
            moved = Some(d);
        }
    }
    let disk = moved.ok_or_else(|| {
        Error::InvalidArgument("adjacent states are identical".into())
    })?;
    a.move_to(disk, b.peg_of(disk))
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    pegs: u32,
    initial: Vec<u32>,
    moves: Vec<Move>,
}

impl From<Path> for PathRepr {
    fn from(p: Path) -> PathRepr {
        PathRepr {
            pegs: p.first().pegs(),
            initial: (1..=p.first().disks()).map(|d| p.first().peg_of(d)).collect(),
            moves: p.moves,
        }
    }
}

impl TryFrom<PathRepr> for Path {
    type Error = Error;

    fn try_from(r: PathRepr) -> Result<Path> {
        let assignment: Vec<u16> = r
            .initial
            .iter()
            .map(|&q| u16::try_from(q).map_err(|_| Error::PegOutOfRange { peg: q, pegs: r.pegs }))
            .collect::<Result<_>>()?;
        let initial = State::new(assignment, r.pegs)?;
        Path::from_moves(initial, r.moves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Problem;

    fn walk(start: State, steps: &[(u32, u32)]) -> Path {
        let mut path = Path::single(start);
        for &(disk, to) in steps {
            let mv = path.last().move_to(disk, to).unwrap();
            path.push(mv).unwrap();
        }
        path
    }

    fn classical_three() -> Path {
        let start = State::constant(Problem::new(3, 3).unwrap(), 1).unwrap();
        walk(
            start,
            &[(1, 2), (2, 3), (1, 3), (3, 2), (1, 1), (2, 2), (1, 2)],
        )
    }

    #[test]
    fn concat_adds_lengths() {
        let p = classical_three();
        let (a, b) = (
            Path::from_states(p.states()[..4].to_vec()).unwrap(),
            Path::from_states(p.states()[3..].to_vec()).unwrap(),
        );
        let joined = a.concat(&b).unwrap();
        assert_eq!(joined.len(), a.len() + b.len());
        assert_eq!(joined, p);
    }

    #[test]
    fn concat_with_singleton_is_identity() {
        let p = classical_three();
        let unit = Path::single(p.last().clone());
        assert_eq!(p.concat(&unit).unwrap(), p);
    }

    #[test]
    fn concat_rejects_mismatched_endpoints() {
        let p = classical_three();
        let other = Path::single(p.first().clone());
        assert!(matches!(
            p.concat(&other),
            Err(Error::EndpointMismatch)
        ));
    }

    #[test]
    fn count_moves_full_and_empty_sets() {
        let p = classical_three();
        let all: BTreeSet<u32> = [1, 2, 3].into();
        assert_eq!(p.count_moves(&all), p.len() as u64);
        assert_eq!(p.count_moves(&BTreeSet::new()), 0);
        // the largest disk of the classical solution moves exactly once
        assert_eq!(p.count_moves(&[3].into()), 1);
        assert_eq!(p.count_moves(&[1].into()), 4);
    }

    #[test]
    fn restrict_to_all_disks_is_lossless() {
        let p = classical_three();
        let all: BTreeSet<u32> = [1, 2, 3].into();
        let r = p.restrict(&all);
        assert_eq!(r.len(), p.len());
        assert_eq!(r.states(), p.states());
    }

    #[test]
    fn restrict_collapses_foreign_moves() {
        let p = classical_three();
        // disk 1 moves four times; its projected trace has exactly 4 steps
        let r = p.restrict(&[1].into());
        assert_eq!(r.len() as u64, p.count_moves(&[1].into()));
        assert_eq!(r.first().disks(), 1);
        let pegs1: Vec<u32> = r.states().iter().map(|s| s.peg_of(1)).collect();
        assert_eq!(pegs1, vec![1, 2, 3, 1, 2]);
        // a path of a disk that never moves projects to a single state
        let start = State::constant(Problem::new(2, 3).unwrap(), 1).unwrap();
        let q = walk(start, &[(1, 2), (1, 3)]);
        assert_eq!(q.restrict(&[2].into()).len(), 0);
    }

    #[test]
    fn restrict_renumbers_disks() {
        let p = classical_three();
        let r = p.restrict(&[2, 3].into());
        // old disks 2,3 become 1,2; both move exactly once
        assert_eq!(r.len(), 3);
        assert_eq!(r.first().disks(), 2);
        assert_eq!(r.moves()[0].disk, 1);
    }

    #[test]
    fn json_round_trip_keeps_moves_and_initial_state() {
        let p = classical_three();
        let text = serde_json::to_string(&p).unwrap();
        let back: Path = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["initial"], serde_json::json!([1, 1, 1]));
        assert_eq!(v["moves"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn corrupted_serialized_paths_fail_validation() {
        let p = classical_three();
        let mut v = serde_json::to_value(&p).unwrap();
        // retarget the first move onto an occupied smaller disk
        v["moves"][0]["to"] = serde_json::json!(1);
        assert!(serde_json::from_value::<Path>(v).is_err());
    }

    #[test]
    fn from_states_rejects_jumps() {
        let a = State::constant(Problem::new(2, 3).unwrap(), 1).unwrap();
        let b = State::constant(Problem::new(2, 3).unwrap(), 2).unwrap();
        assert!(Path::from_states(vec![a, b]).is_err());
    }
}
