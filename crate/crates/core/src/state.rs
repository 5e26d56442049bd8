//! Puzzle instances and board states.
//!
//! A state records, for each disk, the peg it currently sits on. Disks are
//! numbered `1..=n` by increasing size and pegs `1..=p`. The stack order on a
//! peg is implied: smaller disks always sit above larger ones, so the peg
//! assignment alone determines the full board layout.

use crate::error::{Error, Result};
use crate::moves::{Move, Triple};

/// A puzzle instance: `n` disks on `p` pegs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Problem {
    n: u32,
    p: u32,
}

impl Problem {
    /// Requires `n >= 1` and `3 <= p <= 65535`. The peg ceiling keeps peg
    /// indices representable in the packed per-disk storage.
    pub fn new(n: u32, p: u32) -> Result<Problem> {
        if n < 1 || p < 3 || p > u16::MAX as u32 {
            return Err(Error::InvalidProblem {
                n: n as u64,
                p: p as u64,
            });
        }
        Ok(Problem { n, p })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `p^n`, the number of distinct states, if it fits in a `u128`.
    pub fn state_count(&self) -> Option<u128> {
        let mut total: u128 = 1;
        for _ in 0..self.n {
            total = total.checked_mul(self.p as u128)?;
        }
        Some(total)
    }
}

/// A full board layout: `assignment[d - 1]` is the peg of disk `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    pegs: u32,
    assignment: Vec<u16>,
}

impl State {
    /// Builds a state from a per-disk peg assignment (1-indexed pegs).
    pub fn new(assignment: Vec<u16>, pegs: u32) -> Result<State> {
        if assignment.is_empty() || !(3..=u16::MAX as u32).contains(&pegs) {
            return Err(Error::InvalidProblem {
                n: assignment.len() as u64,
                p: pegs as u64,
            });
        }
        for &peg in &assignment {
            if peg == 0 || peg as u32 > pegs {
                return Err(Error::PegOutOfRange {
                    peg: peg as u32,
                    pegs,
                });
            }
        }
        Ok(State { pegs, assignment })
    }

    /// The state with every disk of `problem` stacked on `peg`.
    pub fn constant(problem: Problem, peg: u32) -> Result<State> {
        if peg == 0 || peg > problem.p() {
            return Err(Error::PegOutOfRange {
                peg,
                pegs: problem.p(),
            });
        }
        Ok(State {
            pegs: problem.p(),
            assignment: vec![peg as u16; problem.n() as usize],
        })
    }

    pub fn disks(&self) -> u32 {
        self.assignment.len() as u32
    }

    pub fn pegs(&self) -> u32 {
        self.pegs
    }

    pub fn problem(&self) -> Problem {
        Problem {
            n: self.disks(),
            p: self.pegs,
        }
    }

    /// Peg of `disk` (1-indexed). Panics if `disk` is out of range.
    pub fn peg_of(&self, disk: u32) -> u32 {
        self.assignment[disk as usize - 1] as u32
    }

    pub fn assignment(&self) -> &[u16] {
        &self.assignment
    }

    /// True when every disk sits on the same peg.
    pub fn is_constant(&self) -> bool {
        self.assignment.iter().all(|&q| q == self.assignment[0])
    }

    /// The common peg when the state is constant.
    pub fn constant_peg(&self) -> Option<u32> {
        if self.is_constant() {
            Some(self.assignment[0] as u32)
        } else {
            None
        }
    }

    /// The smallest (topmost) disk on `peg`, or `None` when the peg is empty.
    pub fn top_disk(&self, peg: u32) -> Option<u32> {
        self.assignment
            .iter()
            .position(|&q| q as u32 == peg)
            .map(|i| i as u32 + 1)
    }

    /// Every peg as a bottom-to-top disk list. Derived on demand; the peg
    /// assignment is the single source of truth.
    pub fn stacks(&self) -> Vec<Vec<u32>> {
        let mut stacks = vec![Vec::new(); self.pegs as usize + 1];
        for disk in (1..=self.disks()).rev() {
            stacks[self.peg_of(disk) as usize].push(disk);
        }
        stacks
    }

    /// The disk directly below `disk` on its current peg, or `None` when it
    /// rests on the peg floor.
    pub fn disk_below(&self, disk: u32) -> Option<u32> {
        let peg = self.assignment[disk as usize - 1];
        self.assignment[disk as usize..]
            .iter()
            .position(|&q| q == peg)
            .map(|off| disk + off as u32 + 1)
    }

    /// Constructs the move of `disk` to peg `to` in this state, with its
    /// support triple, checking legality.
    pub fn move_to(&self, disk: u32, to: u32) -> Result<Move> {
        if disk == 0 || disk > self.disks() {
            return Err(Error::InvalidArgument(format!(
                "disk {disk} out of range 1..={}",
                self.disks()
            )));
        }
        if to == 0 || to > self.pegs {
            return Err(Error::PegOutOfRange {
                peg: to,
                pegs: self.pegs,
            });
        }
        let from = self.peg_of(disk);
        let mv = Move {
            disk,
            from,
            to,
            triple: Triple {
                lifted_from: self.disk_below(disk),
                placed_on: self.top_disk(to),
            },
        };
        self.check_legal(&mv)?;
        Ok(mv)
    }

    fn check_legal(&self, mv: &Move) -> Result<()> {
        let illegal = |reason: &str| Error::IllegalMove {
            mv: *mv,
            reason: reason.to_string(),
        };
        if mv.from == mv.to {
            return Err(illegal("source and destination peg coincide"));
        }
        if mv.disk == 0 || mv.disk > self.disks() {
            return Err(illegal("no such disk"));
        }
        if mv.from == 0 || mv.from > self.pegs || mv.to == 0 || mv.to > self.pegs {
            return Err(illegal("peg out of range"));
        }
        if self.peg_of(mv.disk) != mv.from {
            return Err(illegal("disk is not on the source peg"));
        }
        if self.top_disk(mv.from) != Some(mv.disk) {
            return Err(illegal("a smaller disk sits on top of the moved disk"));
        }
        match self.top_disk(mv.to) {
            Some(t) if t < mv.disk => {
                return Err(illegal("destination top disk is smaller than the moved disk"))
            }
            _ => {}
        }
        let expect = Triple {
            lifted_from: self.disk_below(mv.disk),
            placed_on: self.top_disk(mv.to),
        };
        if mv.triple != expect {
            return Err(illegal("support triple does not match the state"));
        }
        Ok(())
    }

    /// All legal moves in this state, source pegs ascending and destination
    /// pegs ascending within the same source. This ordering is relied on by
    /// every search in the crate; it is what makes results reproducible.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut tops = vec![0u32; self.pegs as usize + 1];
        for (i, &q) in self.assignment.iter().enumerate() {
            if tops[q as usize] == 0 {
                tops[q as usize] = i as u32 + 1;
            }
        }
        let mut out = Vec::new();
        for from in 1..=self.pegs {
            let disk = tops[from as usize];
            if disk == 0 {
                continue;
            }
            let lifted_from = self.disk_below(disk);
            for to in 1..=self.pegs {
                if to == from {
                    continue;
                }
                let t = tops[to as usize];
                if t == 0 || t > disk {
                    out.push(Move {
                        disk,
                        from,
                        to,
                        triple: Triple {
                            lifted_from,
                            placed_on: if t == 0 { None } else { Some(t) },
                        },
                    });
                }
            }
        }
        out
    }

    /// Applies a legal move, returning the successor state.
    pub fn apply_move(&self, mv: &Move) -> Result<State> {
        self.check_legal(mv)?;
        let mut next = self.clone();
        next.assignment[mv.disk as usize - 1] = mv.to as u16;
        Ok(next)
    }

    /// Relabels pegs by a permutation: `perm[q - 1]` is the new name of peg
    /// `q`. Legality only depends on relative disk sizes, so a relabeled
    /// state has the mirrored move structure.
    pub fn permute_pegs(&self, perm: &[u32]) -> Result<State> {
        if perm.len() != self.pegs as usize {
            return Err(Error::InvalidArgument(format!(
                "permutation has {} entries, state has {} pegs",
                perm.len(),
                self.pegs
            )));
        }
        let mut seen = vec![false; self.pegs as usize + 1];
        for &q in perm {
            if q == 0 || q > self.pegs || seen[q as usize] {
                return Err(Error::InvalidArgument(
                    "peg map is not a permutation".to_string(),
                ));
            }
            seen[q as usize] = true;
        }
        let assignment = self
            .assignment
            .iter()
            .map(|&q| perm[q as usize - 1] as u16)
            .collect();
        Ok(State {
            pegs: self.pegs,
            assignment,
        })
    }

    /// Swaps two peg labels, leaving all others fixed.
    pub fn swap_pegs(&self, a: u32, b: u32) -> Result<State> {
        let mut perm: Vec<u32> = (1..=self.pegs).collect();
        if a == 0 || a > self.pegs || b == 0 || b > self.pegs {
            return Err(Error::PegOutOfRange {
                peg: a.max(b),
                pegs: self.pegs,
            });
        }
        perm[a as usize - 1] = b;
        perm[b as usize - 1] = a;
        self.permute_pegs(&perm)
    }
}

impl std::fmt::Display for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.assignment.iter().map(|q| q.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
