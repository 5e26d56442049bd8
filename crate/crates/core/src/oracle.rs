//! Exhaustive ground truth by breadth-first search.
//!
//! States are packed into base-`p` integers: digit `d - 1` (little-endian)
//! is the zero-based peg of disk `d`, so codes run over `[0, p^n)` and the
//! constant state on peg 1 is code 0. Distance labels live in flat `u32`
//! arrays indexed by code; there is no hashing anywhere on the hot path.
//!
//! Between two named states the search runs bidirectionally, expanding the
//! smaller frontier level by level and stopping once no meeting point can
//! beat the best one seen. Neighbor generation visits source pegs in
//! ascending order and destinations in ascending order within each source,
//! which fixes tie-breaking; every result, including reconstructed paths
//! and samples, is a pure function of the instance.
//!
//! Memory is budgeted up front (default 2 GiB): a search that would need
//! more refuses to start and reports the state count it would have touched,
//! rather than thrashing.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};
use crate::path::Path;
use crate::state::{Problem, State};

pub const DEFAULT_BUDGET_BYTES: u64 = 2 * (1 << 30);

const UNSET: u32 = u32::MAX;

/// Ceiling on the bytes a single search may allocate for its label arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_bytes: u64,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_bytes: DEFAULT_BUDGET_BYTES,
        }
    }
}

impl SearchBudget {
    pub fn from_gib(gib: f64) -> SearchBudget {
        SearchBudget {
            max_bytes: (gib.max(0.0) * (1u64 << 30) as f64) as u64,
        }
    }
}

/// A state compressed to its base-`p` code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PackedState(pub u64);

/// Packs a state; fails only when `p^n` overflows 64 bits.
pub fn encode(state: &State) -> Result<PackedState> {
    let p = state.pegs() as u64;
    let mut code: u64 = 0;
    let mut pow: u64 = 1;
    for d in 1..=state.disks() {
        let digit = (state.peg_of(d) - 1) as u64;
        code = digit
            .checked_mul(pow)
            .and_then(|v| code.checked_add(v))
            .ok_or_else(|| too_large(state.problem()))?;
        if d < state.disks() {
            pow = pow.checked_mul(p).ok_or_else(|| too_large(state.problem()))?;
        }
    }
    Ok(PackedState(code))
}

fn too_large(problem: Problem) -> Error {
    Error::InvalidArgument(format!(
        "state space of {} disks on {} pegs exceeds 64-bit codes",
        problem.n(),
        problem.p()
    ))
}

/// Unpacks a code; the code must lie in `[0, p^n)`.
pub fn decode(code: PackedState, problem: Problem) -> Result<State> {
    let count = problem
        .state_count()
        .filter(|&c| c <= u64::MAX as u128)
        .ok_or_else(|| too_large(problem))?;
    if code.0 as u128 >= count {
        return Err(Error::CodeOutOfRange {
            code: code.0,
            n: problem.n(),
            p: problem.p(),
        });
    }
    let mut c = code.0;
    let p = problem.p() as u64;
    let assignment: Vec<u16> = (0..problem.n())
        .map(|_| {
            let digit = (c % p) as u16;
            c /= p;
            digit + 1
        })
        .collect();
    State::new(assignment, problem.p())
}

/// Checks `p^n * bytes_per_state` against the budget and returns `p^n`.
fn ensure_budget(problem: Problem, bytes_per_state: u64, budget: &SearchBudget) -> Result<u64> {
    let states = problem.state_count().unwrap_or(u128::MAX);
    let required = states.saturating_mul(bytes_per_state as u128);
    if required > budget.max_bytes as u128 {
        return Err(Error::BudgetExceeded {
            states,
            required_bytes: required,
            budget_bytes: budget.max_bytes,
        });
    }
    Ok(states as u64)
}

/// Precomputed geometry of one packed state space.
struct Space {
    n: u32,
    p: u64,
    /// `powers[d] = p^d`
    powers: Vec<u64>,
}

impl Space {
    fn new(problem: Problem) -> Space {
        let p = problem.p() as u64;
        let mut powers = Vec::with_capacity(problem.n() as usize);
        let mut v = 1u64;
        for _ in 0..problem.n() {
            powers.push(v);
            v = v.saturating_mul(p);
        }
        Space {
            n: problem.n(),
            p,
            powers,
        }
    }

    /// Fills `tops[peg]` with the topmost disk of each peg (0 = empty).
    fn tops(&self, code: u64, tops: &mut [u32]) {
        tops.fill(0);
        let mut c = code;
        for d in 1..=self.n {
            let peg = (c % self.p) as usize + 1;
            if tops[peg] == 0 {
                tops[peg] = d;
            }
            c /= self.p;
        }
    }

    /// Visits the codes one legal move away, in the canonical order:
    /// source pegs ascending, destination pegs ascending.
    fn for_each_neighbor(&self, code: u64, tops: &mut [u32], mut f: impl FnMut(u64)) {
        self.tops(code, tops);
        for from in 1..=self.p as usize {
            let disk = tops[from];
            if disk == 0 {
                continue;
            }
            let pow = self.powers[disk as usize - 1];
            let base = code - (from as u64 - 1) * pow;
            for (to, &t) in tops.iter().enumerate().skip(1) {
                if to != from && (t == 0 || t > disk) {
                    f(base + (to as u64 - 1) * pow);
                }
            }
        }
    }

    fn peg_count(&self) -> usize {
        self.p as usize
    }
}

/// Outcome of one search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub distance: u64,
    /// A shortest witness path, when requested. Reconstruction follows the
    /// canonical neighbor order, so the witness is reproducible.
    pub path: Option<Path>,
    /// States whose outgoing moves were generated.
    pub states_expanded: u64,
    /// Largest single BFS level encountered.
    pub peak_frontier: u64,
}

struct Side {
    dist: Vec<u32>,
    frontier: Vec<u64>,
    depth: u32,
}

/// Exact minimum number of moves between two states of the same problem.
pub fn bfs_distance(
    problem: Problem,
    start: &State,
    goal: &State,
    want_path: bool,
    budget: &SearchBudget,
) -> Result<SearchResult> {
    check_states(problem, &[start, goal])?;
    if start == goal {
        return Ok(SearchResult {
            distance: 0,
            path: want_path.then(|| Path::single(start.clone())),
            states_expanded: 0,
            peak_frontier: 1,
        });
    }
    let count = ensure_budget(problem, 8, budget)?;
    let space = Space::new(problem);
    let s = encode(start)?.0;
    let g = encode(goal)?.0;

    let mut fwd = Side {
        dist: vec![UNSET; count as usize],
        frontier: vec![s],
        depth: 0,
    };
    let mut bwd = Side {
        dist: vec![UNSET; count as usize],
        frontier: vec![g],
        depth: 0,
    };
    fwd.dist[s as usize] = 0;
    bwd.dist[g as usize] = 0;

    let mut best: Option<(u64, u64)> = None; // (total distance, meeting code)
    let mut expanded = 0u64;
    let mut peak = 1u64;
    let mut tops = vec![0u32; space.peg_count() + 1];

    loop {
        if let Some((total, _)) = best {
            if fwd.depth as u64 + bwd.depth as u64 + 1 >= total {
                break;
            }
        }
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (this, other) = if forward {
            (&mut fwd, &bwd)
        } else {
            (&mut bwd, &fwd)
        };
        assert!(
            !this.frontier.is_empty(),
            "the move graph is connected; frontiers only empty after meeting"
        );
        let next_depth = this.depth + 1;
        let mut next = Vec::new();
        let dist = &mut this.dist;
        for &u in &this.frontier {
            expanded += 1;
            space.for_each_neighbor(u, &mut tops, |v| {
                if dist[v as usize] == UNSET {
                    dist[v as usize] = next_depth;
                    let o = other.dist[v as usize];
                    if o != UNSET {
                        let total = next_depth as u64 + o as u64;
                        if best.is_none_or(|(b, _)| total < b) {
                            best = Some((total, v));
                        }
                    }
                    next.push(v);
                }
            });
        }
        peak = peak.max(next.len() as u64);
        this.depth = next_depth;
        this.frontier = next;
    }

    let (distance, meet) = best.expect("loop exits only with a meeting point");
    let path = if want_path {
        let mut codes = descend(&space, &fwd.dist, meet, &mut tops);
        codes.reverse(); // start ..= meet
        let back = descend(&space, &bwd.dist, meet, &mut tops);
        codes.extend_from_slice(&back[1..]); // meet ..= goal
        Some(codes_to_path(problem, &codes)?)
    } else {
        None
    };
    Ok(SearchResult {
        distance,
        path,
        states_expanded: expanded,
        peak_frontier: peak,
    })
}

/// Reference implementation: plain one-sided BFS. Exists so the meeting
/// logic above can be checked against it exhaustively.
pub fn bfs_distance_unidirectional(
    problem: Problem,
    start: &State,
    goal: &State,
    want_path: bool,
    budget: &SearchBudget,
) -> Result<SearchResult> {
    check_states(problem, &[start, goal])?;
    if start == goal {
        return Ok(SearchResult {
            distance: 0,
            path: want_path.then(|| Path::single(start.clone())),
            states_expanded: 0,
            peak_frontier: 1,
        });
    }
    let count = ensure_budget(problem, 4, budget)?;
    let space = Space::new(problem);
    let s = encode(start)?.0;
    let g = encode(goal)?.0;
    let mut tops = vec![0u32; space.peg_count() + 1];
    let scan = bfs_scan(&space, count, s, &mut tops, |code| code == g)?;
    let target = scan.target.expect("goal is reachable in a connected graph");
    let path = want_path
        .then(|| {
            let mut codes = descend(&space, &scan.dist, target, &mut tops);
            codes.reverse();
            codes_to_path(problem, &codes)
        })
        .transpose()?;
    Ok(SearchResult {
        distance: scan.dist[target as usize] as u64,
        path,
        states_expanded: scan.expanded,
        peak_frontier: scan.peak,
    })
}

struct Scan {
    dist: Vec<u32>,
    target: Option<u64>,
    expanded: u64,
    peak: u64,
}

/// Level-by-level BFS from `start`; stops at the first state satisfying
/// `stop` (checked in labeling order) or after exhausting the component.
fn bfs_scan(
    space: &Space,
    count: u64,
    start: u64,
    tops: &mut [u32],
    mut stop: impl FnMut(u64) -> bool,
) -> Result<Scan> {
    let mut dist = vec![UNSET; count as usize];
    dist[start as usize] = 0;
    if stop(start) {
        return Ok(Scan {
            dist,
            target: Some(start),
            expanded: 0,
            peak: 1,
        });
    }
    let mut frontier = vec![start];
    let mut depth = 0u32;
    let mut expanded = 0u64;
    let mut peak = 1u64;
    let mut found: Option<u64> = None;

    while found.is_none() && !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        'level: for &u in &frontier {
            expanded += 1;
            let mut hit = None;
            space.for_each_neighbor(u, tops, |v| {
                if hit.is_none() && dist[v as usize] == UNSET {
                    dist[v as usize] = depth;
                    if stop(v) {
                        hit = Some(v);
                    } else {
                        next.push(v);
                    }
                }
            });
            if hit.is_some() {
                found = hit;
                break 'level;
            }
        }
        peak = peak.max(next.len() as u64);
        frontier = next;
    }
    Ok(Scan {
        dist,
        target: found,
        expanded,
        peak,
    })
}

/// Walks distance labels down to their source; returns `from ..= source`.
fn descend(space: &Space, dist: &[u32], from: u64, tops: &mut [u32]) -> Vec<u64> {
    let mut codes = vec![from];
    let mut cur = from;
    let mut t = dist[from as usize];
    while t > 0 {
        let mut parent = None;
        space.for_each_neighbor(cur, tops, |v| {
            if parent.is_none() && dist[v as usize] == t - 1 {
                parent = Some(v);
            }
        });
        cur = parent.expect("every labeled state has a predecessor");
        codes.push(cur);
        t -= 1;
    }
    codes
}

fn codes_to_path(problem: Problem, codes: &[u64]) -> Result<Path> {
    let states: Vec<State> = codes
        .iter()
        .map(|&c| decode(PackedState(c), problem))
        .collect::<Result<_>>()?;
    Path::from_states(states)
}

fn check_states(problem: Problem, states: &[&State]) -> Result<()> {
    for s in states {
        if s.disks() != problem.n() || s.pegs() != problem.p() {
            return Err(Error::InvalidArgument(
                "state does not belong to the problem".into(),
            ));
        }
    }
    Ok(())
}

/// Exact minimum move count between the two conventional constant states
/// (all disks on peg 1, all disks on peg 2).
pub fn m_number(problem: Problem, budget: &SearchBudget) -> Result<SearchResult> {
    let start = State::constant(problem, 1)?;
    let goal = State::constant(problem, 2)?;
    bfs_distance(problem, &start, &goal, false, budget)
}

/// Length of the shortest prefix that frees the largest disk: fewest moves
/// from the constant state on peg 1 to any state where disk `n` is alone on
/// peg 1 and some other peg is empty. The largest disk itself never moves
/// during such a prefix; when a witness path is requested this is asserted,
/// not assumed.
pub fn minimal_demolishing_length(
    problem: Problem,
    want_path: bool,
    budget: &SearchBudget,
) -> Result<SearchResult> {
    let count = ensure_budget(problem, 4, budget)?;
    let space = Space::new(problem);
    let n = problem.n();
    let p = problem.p() as usize;
    let top_pow = space.powers[n as usize - 1];
    let pp = space.p;

    let mut pred_tops = vec![0u32; p + 1];
    let mut pred = |code: u64| {
        if !(code / top_pow).is_multiple_of(pp) {
            return false; // disk n has left peg 1
        }
        space.tops(code, &mut pred_tops);
        if pred_tops[1] != n {
            return false; // something smaller still sits on peg 1
        }
        (2..=p).any(|q| pred_tops[q] == 0)
    };

    let start = encode(&State::constant(problem, 1)?)?.0;
    let mut tops = vec![0u32; p + 1];
    let scan = bfs_scan(&space, count, start, &mut tops, &mut pred)?;
    let target = scan
        .target
        .expect("a demolished layout is always reachable");
    let distance = scan.dist[target as usize] as u64;
    let path = want_path
        .then(|| -> Result<Path> {
            let mut codes = descend(&space, &scan.dist, target, &mut tops);
            codes.reverse();
            let path = codes_to_path(problem, &codes)?;
            for s in path.states() {
                assert_eq!(
                    s.peg_of(n),
                    1,
                    "demolishing prefix must not move the largest disk"
                );
            }
            Ok(path)
        })
        .transpose()?;
    Ok(SearchResult {
        distance,
        path,
        states_expanded: scan.expanded,
        peak_frontier: scan.peak,
    })
}

/// Up to `limit` distinct optimal solutions (constant peg 1 to constant
/// peg 2), enumerated depth-first along decreasing distance-to-goal labels
/// in canonical neighbor order. Deterministic: same instance, same sample.
pub fn optimal_solutions_sample(
    problem: Problem,
    limit: usize,
    budget: &SearchBudget,
) -> Result<Vec<Path>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let count = ensure_budget(problem, 4, budget)?;
    let space = Space::new(problem);
    let start = encode(&State::constant(problem, 1)?)?.0;
    let goal = encode(&State::constant(problem, 2)?)?.0;
    let mut tops = vec![0u32; space.peg_count() + 1];
    // distances measured to the goal: follow them downhill from the start
    let scan = bfs_scan(&space, count, goal, &mut tops, |c| c == start)?;
    let dist = scan.dist;

    let successors = |code: u64, tops: &mut [u32]| -> Vec<u64> {
        let rem = dist[code as usize];
        let mut out = Vec::new();
        space.for_each_neighbor(code, tops, |v| {
            if dist[v as usize] != UNSET && dist[v as usize] == rem - 1 {
                out.push(v);
            }
        });
        out
    };

    let mut paths = Vec::new();
    let mut trail = vec![start];
    let mut stack = vec![successors(start, &mut tops).into_iter()];
    while let Some(options) = stack.last_mut() {
        match options.next() {
            Some(v) => {
                trail.push(v);
                if v == goal {
                    paths.push(trail.clone());
                    if paths.len() == limit {
                        break;
                    }
                    trail.pop();
                } else {
                    stack.push(successors(v, &mut tops).into_iter());
                }
            }
            None => {
                stack.pop();
                trail.pop();
            }
        }
    }

    paths
        .into_iter()
        .map(|codes| codes_to_path(problem, &codes))
        .collect()
}

/// Full distance labeling from `source` over the whole state space, in code
/// order.
pub fn distance_table(problem: Problem, source: &State, budget: &SearchBudget) -> Result<Vec<u32>> {
    check_states(problem, &[source])?;
    let count = ensure_budget(problem, 4, budget)?;
    let space = Space::new(problem);
    let s = encode(source)?.0;
    let mut tops = vec![0u32; space.peg_count() + 1];
    let scan = bfs_scan(&space, count, s, &mut tops, |_| false)?;
    Ok(scan.dist)
}

/// Binary dump: three little-endian `u32` header words (`n`, `p`, entry
/// width in bytes, always 4) followed by `p^n` little-endian `u32`
/// distances in code order.
pub fn write_distance_table<W: Write>(w: &mut W, problem: Problem, table: &[u32]) -> io::Result<()> {
    w.write_all(&problem.n().to_le_bytes())?;
    w.write_all(&problem.p().to_le_bytes())?;
    w.write_all(&4u32.to_le_bytes())?;
    for &d in table {
        w.write_all(&d.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a dump produced by [`write_distance_table`].
pub fn read_distance_table<R: Read>(r: &mut R) -> io::Result<(u32, u32, Vec<u32>)> {
    let mut word = [0u8; 4];
    let mut next = |r: &mut R| -> io::Result<u32> {
        r.read_exact(&mut word)?;
        Ok(u32::from_le_bytes(word))
    };
    let n = next(r)?;
    let p = next(r)?;
    let width = next(r)?;
    if width != 4 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unsupported entry width {width}"),
        ));
    }
    let mut table = Vec::new();
    loop {
        let mut word = [0u8; 4];
        match r.read_exact(&mut word) {
            Ok(()) => table.push(u32::from_le_bytes(word)),
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e),
        }
    }
    Ok((n, p, table))
}
