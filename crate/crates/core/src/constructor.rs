//! Builds solutions of length exactly `K(n, p)`.
//!
//! The construction follows the split recurrence. To move `m` disks between
//! two pegs with a peg set `P` (`q = |P|` pegs) available:
//!
//! 1. park the `k` smallest disks on a middle peg, using all of `P`;
//! 2. move the remaining `m - k` disks to the target, using `P` minus the
//!    middle peg (the parked tower must not be disturbed, and every parked
//!    disk is smaller than every moving disk);
//! 3. unpark the `k` smallest disks onto the target, using all of `P`.
//!
//! With three pegs the split degenerates to the classical `k = m - 1`
//! recursion. The split size `k` for `q >= 4` comes from [`KTable`], so the
//! emitted length is exactly the recurrence value, which the test suite
//! holds equal to the closed form.
//!
//! Moves are produced lazily by [`SolutionStream`]; a 20-disk three-peg
//! solution is about a million moves and streams in constant memory.
//! [`build_solution`] materializes a [`Path`] for small instances.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::moves::{Move, Triple};
use crate::numerics::{split_from_table, KTable, SplitChoice};
use crate::path::Path;
use crate::state::{Problem, State};

/// The parking peg: the lowest-numbered peg distinct from both endpoints.
pub fn choose_middle_peg(p: u32, initial_peg: u32, final_peg: u32) -> Result<u32> {
    if p < 3 {
        return Err(Error::InvalidProblem { n: 1, p: p as u64 });
    }
    for peg in [initial_peg, final_peg] {
        if peg == 0 || peg > p {
            return Err(Error::PegOutOfRange { peg, pegs: p });
        }
    }
    if initial_peg == final_peg {
        return Err(Error::InvalidArgument(
            "initial and final pegs must differ".into(),
        ));
    }
    Ok((1..=p)
        .find(|&q| q != initial_peg && q != final_peg)
        .expect("p >= 3 guarantees a third peg"))
}

/// The recursion shape for one instance, before any move is emitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanNode {
    /// No further split: a single disk, or the classical three-peg tower.
    Leaf { disks: u32, pegs: u32 },
    Split {
        disks: u32,
        pegs: u32,
        choice: SplitChoice,
        /// Subtree for the `k` parked disks on all `pegs`.
        parked: Box<PlanNode>,
        /// Subtree for the `disks - k` descending disks on `pegs - 1`.
        descent: Box<PlanNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub n: u32,
    pub p: u32,
    pub initial_peg: u32,
    pub final_peg: u32,
    pub expected_length: BigUint,
    pub root: PlanNode,
}

/// Lays out the recursion tree for `(n, p)` without emitting moves.
pub fn plan(problem: Problem, initial_peg: u32, final_peg: u32) -> Result<ConstructionPlan> {
    choose_middle_peg(problem.p(), initial_peg, final_peg)?;
    let table = table_for(problem)?;
    let root = plan_node(table.as_ref(), problem.n(), problem.p())?;
    let expected_length = match &table {
        Some(t) => t.value(problem.n(), problem.p()).clone(),
        None => (BigUint::one() << problem.n()) - 1u32,
    };
    Ok(ConstructionPlan {
        n: problem.n(),
        p: problem.p(),
        initial_peg,
        final_peg,
        expected_length,
        root,
    })
}

fn table_for(problem: Problem) -> Result<Option<KTable>> {
    if problem.p() == 3 {
        Ok(None)
    } else {
        Ok(Some(KTable::new(problem.n(), problem.p())?))
    }
}

fn plan_node(table: Option<&KTable>, m: u32, q: u32) -> Result<PlanNode> {
    if m == 1 || q == 3 {
        return Ok(PlanNode::Leaf { disks: m, pegs: q });
    }
    let table = table.expect("q >= 4 subproblems only arise when a table was built");
    let choice = split_from_table(table, m, q)?;
    Ok(PlanNode::Split {
        disks: m,
        pegs: q,
        choice,
        parked: Box::new(plan_node(Some(table), choice.k, q)?),
        descent: Box::new(plan_node(Some(table), m - choice.k, q - 1)?),
    })
}

enum Frame {
    Task {
        lo: u32,
        hi: u32,
        pegs: Vec<u32>,
        from: u32,
        to: u32,
    },
    Emit { disk: u32, from: u32, to: u32 },
}

/// Lazy move sequence for one instance. Yields the full solution in order;
/// memory stays proportional to `n`, not to the move count.
pub struct SolutionStream {
    table: Option<KTable>,
    frames: Vec<Frame>,
    /// Per-peg disk stacks, topmost last, kept in lockstep with emission so
    /// every move carries its support triple.
    stacks: Vec<Vec<u32>>,
    emitted: u64,
}

/// Stream of the moves solving `problem` from one constant state to another.
pub fn solution_moves(problem: Problem, initial_peg: u32, final_peg: u32) -> Result<SolutionStream> {
    choose_middle_peg(problem.p(), initial_peg, final_peg)?;
    let table = table_for(problem)?;
    let mut stacks = vec![Vec::new(); problem.p() as usize + 1];
    stacks[initial_peg as usize] = (1..=problem.n()).rev().collect();
    Ok(SolutionStream {
        table,
        frames: vec![Frame::Task {
            lo: 1,
            hi: problem.n(),
            pegs: (1..=problem.p()).collect(),
            from: initial_peg,
            to: final_peg,
        }],
        stacks,
        emitted: 0,
    })
}

impl SolutionStream {
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    fn expand(&mut self, lo: u32, hi: u32, pegs: Vec<u32>, from: u32, to: u32) {
        let m = hi - lo + 1;
        if m == 1 {
            self.frames.push(Frame::Emit { disk: lo, from, to });
            return;
        }
        let q = pegs.len() as u32;
        assert!(q >= 3, "multi-disk tasks always have a spare peg");
        let k = if q == 3 {
            m - 1
        } else {
            self.table
                .as_ref()
                .expect("table exists whenever q >= 4")
                .smallest_split(m, q)
        };
        let mid = *pegs
            .iter()
            .find(|&&g| g != from && g != to)
            .expect("q >= 3 guarantees a middle peg");
        let without_mid: Vec<u32> = pegs.iter().copied().filter(|&g| g != mid).collect();
        // pushed in reverse so the parking phase pops first
        self.frames.push(Frame::Task {
            lo,
            hi: lo + k - 1,
            pegs: pegs.clone(),
            from: mid,
            to,
        });
        self.frames.push(Frame::Task {
            lo: lo + k,
            hi,
            pegs: without_mid,
            from,
            to,
        });
        self.frames.push(Frame::Task {
            lo,
            hi: lo + k - 1,
            pegs,
            from,
            to: mid,
        });
    }
}

impl Iterator for SolutionStream {
    type Item = Move;

    fn next(&mut self) -> Option<Move> {
        loop {
            match self.frames.pop()? {
                Frame::Task { lo, hi, pegs, from, to } => self.expand(lo, hi, pegs, from, to),
                Frame::Emit { disk, from, to } => {
                    let src = &mut self.stacks[from as usize];
                    assert_eq!(src.pop(), Some(disk), "stream emits only top disks");
                    let lifted_from = src.last().copied();
                    let dst = &mut self.stacks[to as usize];
                    let placed_on = dst.last().copied();
                    dst.push(disk);
                    self.emitted += 1;
                    return Some(Move {
                        disk,
                        from,
                        to,
                        triple: Triple {
                            lifted_from,
                            placed_on,
                        },
                    });
                }
            }
        }
    }
}

/// Materialized solution path (every move legality-checked on the way in).
pub fn build_solution(problem: Problem, initial_peg: u32, final_peg: u32) -> Result<Path> {
    let stream = solution_moves(problem, initial_peg, final_peg)?;
    let start = State::constant(problem, initial_peg)?;
    Path::from_moves(start, stream)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    StartState,
    EndState,
    IllegalMove,
    TripleMismatch,
}

#[derive(Debug, Clone)]
pub struct Violation {
    /// 1-based move index; 0 flags the initial state itself.
    pub step: u64,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub moves: u64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Independent replay checker: feeds a move sequence through its own board
/// tracker, assuming the conventional start (all disks on `initial_peg`),
/// and reports every violation rather than stopping at the first.
pub fn validate_move_stream(
    problem: Problem,
    initial_peg: u32,
    final_peg: u32,
    moves: impl IntoIterator<Item = Move>,
) -> Result<ValidationReport> {
    let start = State::constant(problem, initial_peg)?;
    validate_from(&start, problem, final_peg, moves)
}

/// Full-path variant: also checks that the path really starts at the
/// constant state on `initial_peg`.
pub fn validate_solution(
    path: &Path,
    problem: Problem,
    initial_peg: u32,
    final_peg: u32,
) -> Result<ValidationReport> {
    let expected_start = State::constant(problem, initial_peg)?;
    let mut report = validate_from(
        path.first(),
        problem,
        final_peg,
        path.moves().iter().copied(),
    )?;
    if *path.first() != expected_start {
        report.violations.insert(
            0,
            Violation {
                step: 0,
                kind: ViolationKind::StartState,
                detail: format!(
                    "path starts at {} instead of all disks on peg {initial_peg}",
                    path.first()
                ),
            },
        );
    }
    Ok(report)
}

fn validate_from(
    start: &State,
    problem: Problem,
    final_peg: u32,
    moves: impl IntoIterator<Item = Move>,
) -> Result<ValidationReport> {
    if final_peg == 0 || final_peg > problem.p() {
        return Err(Error::PegOutOfRange {
            peg: final_peg,
            pegs: problem.p(),
        });
    }
    if start.disks() != problem.n() || start.pegs() != problem.p() {
        return Err(Error::InvalidArgument(
            "start state does not match the problem".into(),
        ));
    }
    let n = problem.n();
    let mut assignment: Vec<u32> = (1..=n).map(|d| start.peg_of(d)).collect();
    let mut stacks: Vec<Vec<u32>> = vec![Vec::new(); problem.p() as usize + 1];
    for d in (1..=n).rev() {
        stacks[assignment[d as usize - 1] as usize].push(d);
    }

    let mut violations = Vec::new();
    let mut step = 0u64;
    for mv in moves {
        step += 1;
        let mut flag = |kind, detail: String| {
            violations.push(Violation { step, kind, detail });
        };
        if mv.disk == 0 || mv.disk > n || mv.from == 0 || mv.from > problem.p() || mv.to == 0
            || mv.to > problem.p() || mv.from == mv.to
        {
            flag(
                ViolationKind::IllegalMove,
                format!("move {mv} is outside the problem"),
            );
            continue;
        }
        let actual = assignment[mv.disk as usize - 1];
        let mut legal = true;
        if actual != mv.from {
            flag(
                ViolationKind::IllegalMove,
                format!("move {mv}: disk {} is on peg {actual}", mv.disk),
            );
            legal = false;
        } else if stacks[mv.from as usize].last() != Some(&mv.disk) {
            flag(
                ViolationKind::IllegalMove,
                format!("move {mv}: disk {} is buried", mv.disk),
            );
            legal = false;
        }
        match stacks[mv.to as usize].last() {
            Some(&t) if t < mv.disk => {
                flag(
                    ViolationKind::IllegalMove,
                    format!("move {mv}: destination holds smaller disk {t}"),
                );
                legal = false;
            }
            _ => {}
        }
        if legal {
            let expect = Triple {
                lifted_from: stacks[mv.from as usize]
                    .iter()
                    .rev()
                    .nth(1)
                    .copied(),
                placed_on: stacks[mv.to as usize].last().copied(),
            };
            if mv.triple != expect {
                flag(
                    ViolationKind::TripleMismatch,
                    format!("move {mv}: support triple does not match the board"),
                );
            }
            stacks[mv.from as usize].pop();
            stacks[mv.to as usize].push(mv.disk);
        } else {
            // force-apply so later steps are still checked against a board
            let old = assignment[mv.disk as usize - 1] as usize;
            stacks[old].retain(|&d| d != mv.disk);
            let dst = &mut stacks[mv.to as usize];
            let pos = dst.partition_point(|&d| d > mv.disk);
            dst.insert(pos, mv.disk);
        }
        assignment[mv.disk as usize - 1] = mv.to;
    }

    let stragglers: Vec<u32> = (1..=n).filter(|&d| assignment[d as usize - 1] != final_peg).collect();
    if !stragglers.is_empty() {
        violations.push(Violation {
            step,
            kind: ViolationKind::EndState,
            detail: format!("disks {stragglers:?} did not end on peg {final_peg}"),
        });
    }
    Ok(ValidationReport {
        moves: step,
        violations,
    })
}
