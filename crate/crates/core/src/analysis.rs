//! Structural analysis of solutions.
//!
//! Every solution from one constant state to another moves the largest disk
//! at least once, so it splits at the first such move (the pivot) into a
//! prefix that frees the largest disk, the pivot itself, and a suffix that
//! rebuilds the tower. The checks in this module probe three facts about
//! optimal solutions through that lens:
//!
//! * the exact minimum equals twice the minimal demolishing length plus one;
//! * after the pivot, pegs other than the one holding the smallest stack
//!   bottom stay untouched by larger disks throughout the prefix;
//! * samples whose base is at least the instance level are no shorter than
//!   the presumed-optimal count.
//!
//! All verdicts come from replaying concrete paths produced by [`oracle`]
//! searches; nothing here trusts the formulas in [`numerics`].
//!
//! [`oracle`]: crate::oracle
//! [`numerics`]: crate::numerics

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::moves::Move;
use crate::numerics::{find_r, k_closed};
use crate::oracle::{m_number, minimal_demolishing_length, optimal_solutions_sample, SearchBudget};
use crate::path::Path;
use crate::state::{Problem, State};

/// A solution split at the first move of its largest disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub prefix: Path,
    pub pivot: Move,
    pub suffix: Path,
}

impl Decomposition {
    /// The prefix extended by the pivot: everything up to and including the
    /// first move of the largest disk.
    pub fn demolishing(&self) -> Path {
        let head = self.prefix.last().clone();
        let with_pivot = Path::from_moves(head, vec![self.pivot]).expect("pivot was legal");
        self.prefix.concat(&with_pivot).expect("endpoints shared")
    }

    /// Undoes [`decompose`]; always reproduces the original path.
    pub fn reassemble(&self) -> Path {
        self.demolishing()
            .concat(&self.suffix)
            .expect("endpoints shared")
    }
}

/// Splits `path` at the first move of its largest disk.
pub fn decompose(path: &Path) -> Result<Decomposition> {
    let n = path.first().disks();
    let idx = path
        .moves()
        .iter()
        .position(|m| m.disk == n)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("disk {n} never moves; nothing to split at"))
        })?;
    let states = path.states();
    let prefix = Path::from_states(states[..=idx].to_vec())?;
    let suffix = Path::from_states(states[idx + 1..].to_vec())?;
    Ok(Decomposition {
        prefix,
        pivot: path.moves()[idx],
        suffix,
    })
}

/// Reverses the path and swaps pegs `a` and `b` in every state. An
/// involution: applying it twice gives back the original path.
pub fn reflect(path: &Path, a: u32, b: u32) -> Result<Path> {
    let states: Result<Vec<State>> = path
        .states()
        .iter()
        .rev()
        .map(|s| s.swap_pegs(a, b))
        .collect();
    Path::from_states(states?)
}

/// The middle state of a decomposition and the statistic read off it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseReport {
    /// State immediately before the first move of the largest disk.
    pub middle_state: State,
    /// Largest disk below `n - 1` parked away from disk `n - 1`'s peg
    /// (0 when every smaller disk shares that peg).
    pub anchor: u32,
    /// `n - anchor - 1`.
    pub base: u32,
}

/// Computes the base of a solution: at the state before the largest disk
/// first moves, find the largest disk `k < n` not sharing a peg with disk
/// `n - 1`; the base is `n - k - 1`. Requires at least two disks.
pub fn base_of(path: &Path) -> Result<BaseReport> {
    let n = path.first().disks();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the base statistic needs at least two disks".into(),
        ));
    }
    let d = decompose(path)?;
    let mu = d.prefix.last().clone();
    debug_assert_eq!(mu.top_disk(mu.peg_of(n)), Some(n), "largest disk is free");
    let home = mu.peg_of(n - 1);
    let anchor = (1..n - 1)
        .rev()
        .find(|&d| mu.peg_of(d) != home)
        .unwrap_or(0);
    Ok(BaseReport {
        middle_state: mu,
        anchor,
        base: n - anchor - 1,
    })
}

/// Exact minimum versus minimal demolishing length for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DemolishingIdentity {
    pub minimum: u64,
    pub demolishing: u64,
}

impl DemolishingIdentity {
    /// The identity under test: minimum == 2 * demolishing + 1.
    pub fn holds(&self) -> bool {
        self.minimum == 2 * self.demolishing + 1
    }
}

/// Measures both sides of the demolishing identity by exhaustive search.
pub fn check_demolishing_identity(
    problem: Problem,
    budget: &SearchBudget,
) -> Result<DemolishingIdentity> {
    let minimum = m_number(problem, budget)?.distance;
    let demolishing = minimal_demolishing_length(problem, false, budget)?.distance;
    Ok(DemolishingIdentity {
        minimum,
        demolishing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExclusionViolation {
    /// Index of the offending state within the path (0 = initial).
    pub state: u64,
    pub disk: u32,
    pub peg: u32,
}

/// Result of the bottom-exclusion scan over one demolishing path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomExclusionReport {
    /// Bottom disks of the nonempty pegs at the end, descending.
    pub bottoms: Vec<u32>,
    /// Peg holding the smallest bottom disk; `None` when fewer than three
    /// pegs are occupied and the check is vacuous.
    pub guarded_peg: Option<u32>,
    pub violations: Vec<ExclusionViolation>,
}

impl BottomExclusionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn vacuous(&self) -> bool {
        self.guarded_peg.is_none()
    }
}

/// Scans a demolishing path (prefix plus pivot; the last move must be by
/// the largest disk). Let `j` be the smallest disk at the bottom of an
/// occupied peg in the final state, other than disks `n` and `n - 1`. The
/// claim checked: no disk larger than `j` ever visits `j`'s peg anywhere
/// along the path. With fewer than three occupied pegs there is no such
/// `j` and the report is vacuous.
pub fn check_bottom_exclusion(demolishing: &Path) -> Result<BottomExclusionReport> {
    let n = demolishing.first().disks();
    let last_move = demolishing
        .moves()
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty path has no pivot".into()))?;
    if last_move.disk != n {
        return Err(Error::InvalidArgument(format!(
            "a demolishing path ends with disk {n} moving, found disk {}",
            last_move.disk
        )));
    }
    let end = demolishing.last();
    let mut bottoms: Vec<(u32, u32)> = end
        .stacks()
        .into_iter()
        .enumerate()
        .filter_map(|(peg, stack)| stack.first().map(|&d| (d, peg as u32)))
        .collect();
    bottoms.sort_unstable_by(|a, b| b.cmp(a));
    // disks n and n-1 always head this list; a third stack, if any, is
    // rooted in a smaller disk, and the smallest of those is the guard
    let guarded = match bottoms.last() {
        Some(&(d, peg)) if bottoms.len() >= 3 => {
            debug_assert!(d < n - 1);
            Some((d, peg))
        }
        _ => None,
    };
    let mut violations = Vec::new();
    if let Some((j, peg)) = guarded {
        for (idx, state) in demolishing.states().iter().enumerate() {
            for disk in j + 1..=n {
                if state.peg_of(disk) == peg {
                    violations.push(ExclusionViolation {
                        state: idx as u64,
                        disk,
                        peg,
                    });
                }
            }
        }
    }
    Ok(BottomExclusionReport {
        bottoms: bottoms.into_iter().map(|(d, _)| d).collect(),
        guarded_peg: guarded.map(|(_, peg)| peg),
        violations,
    })
}

/// Base statistics over a sample of optimal solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBoundReport {
    pub samples: u64,
    /// Level of the instance.
    pub level: u32,
    /// Presumed-optimal count.
    pub presumed: BigUint,
    /// Common length of the sampled solutions.
    pub optimum: u64,
    /// Sample count per observed base value.
    pub histogram: BTreeMap<u32, u64>,
    /// Whether every sample with base >= level is at least `presumed` long.
    pub bound_holds: bool,
}

/// Samples optimal solutions and tests the base bound on each: a sample
/// whose base reaches the instance level must be at least the
/// presumed-optimal count long.
pub fn check_base_bound(
    problem: Problem,
    limit: usize,
    budget: &SearchBudget,
) -> Result<BaseBoundReport> {
    let samples = optimal_solutions_sample(problem, limit, budget)?;
    let (histogram, bound_holds, optimum) = base_stats(problem, &samples)?;
    Ok(BaseBoundReport {
        samples: samples.len() as u64,
        level: find_r(problem.n(), problem.p())?,
        presumed: k_closed(problem.n(), problem.p())?,
        optimum,
        histogram,
        bound_holds,
    })
}

/// Histogram of bases, the bound verdict, and the common sample length.
/// Single-disk instances have no base; their histogram is empty and the
/// bound holds vacuously.
fn base_stats(problem: Problem, samples: &[Path]) -> Result<(BTreeMap<u32, u64>, bool, u64)> {
    let level = find_r(problem.n(), problem.p())?;
    let presumed = k_closed(problem.n(), problem.p())?;
    let mut histogram = BTreeMap::new();
    let mut holds = true;
    let mut optimum = 0u64;
    for path in samples {
        optimum = path.len() as u64;
        if problem.n() < 2 {
            continue;
        }
        let base = base_of(path)?.base;
        *histogram.entry(base).or_insert(0u64) += 1;
        if base >= level && BigUint::from(path.len() as u64) < presumed {
            holds = false;
        }
    }
    Ok((histogram, holds, optimum))
}

/// Exact value or a budget-induced gap in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellOutcome {
    Computed(u64),
    Skipped,
}

impl CellOutcome {
    pub fn value(&self) -> Option<u64> {
        match self {
            CellOutcome::Computed(v) => Some(*v),
            CellOutcome::Skipped => None,
        }
    }
}

impl Serialize for CellOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CellOutcome::Computed(v) => s.serialize_u64(*v),
            CellOutcome::Skipped => s.serialize_str("skipped"),
        }
    }
}

fn biguint_as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Everything the analyses say about one instance. Serializes to the wire
/// record emitted by the command-line tools; field names and value shapes
/// are part of that contract.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub n: u32,
    pub p: u32,
    pub r: u32,
    #[serde(rename = "K", serialize_with = "biguint_as_string")]
    pub presumed: BigUint,
    #[serde(rename = "M")]
    pub exact: CellOutcome,
    pub demolish_len: Option<u64>,
    pub theorem31_ok: Option<bool>,
    pub theorem32_ok: Option<bool>,
    pub theorem41_ok: Option<bool>,
    pub base_histogram: BTreeMap<u32, u64>,
    /// Exact count and presumed count agree. Not part of the wire record.
    #[serde(skip)]
    pub agreement: Option<bool>,
    /// BFS expansions behind `exact` and `demolish_len`. Not part of the
    /// wire record.
    #[serde(skip)]
    pub states_expanded: u64,
}

impl InstanceReport {
    /// Placeholder for an instance whose searches would exceed the memory
    /// budget. Formula-level fields are still filled in.
    pub fn skipped(problem: Problem) -> Result<InstanceReport> {
        Ok(InstanceReport {
            n: problem.n(),
            p: problem.p(),
            r: find_r(problem.n(), problem.p())?,
            presumed: k_closed(problem.n(), problem.p())?,
            exact: CellOutcome::Skipped,
            demolish_len: None,
            theorem31_ok: None,
            theorem32_ok: None,
            theorem41_ok: None,
            base_histogram: BTreeMap::new(),
            agreement: None,
            states_expanded: 0,
        })
    }
}

/// Runs every check on one instance: exact search, demolishing identity,
/// bottom exclusion and base bound over a deterministic sample of at most
/// `sample_limit` optimal solutions.
pub fn analyze_instance(
    problem: Problem,
    sample_limit: usize,
    budget: &SearchBudget,
) -> Result<InstanceReport> {
    let n = problem.n();
    let p = problem.p();
    let r = find_r(n, p)?;
    let presumed = k_closed(n, p)?;

    let exact = m_number(problem, budget)?;
    let demolish = minimal_demolishing_length(problem, false, budget)?;
    let theorem31_ok = exact.distance == 2 * demolish.distance + 1;

    let samples = optimal_solutions_sample(problem, sample_limit, budget)?;
    let mut theorem32_ok = true;
    for path in &samples {
        let report = check_bottom_exclusion(&decompose(path)?.demolishing())?;
        if !report.holds() {
            theorem32_ok = false;
        }
    }
    let (base_histogram, theorem41_ok, _) = base_stats(problem, &samples)?;

    Ok(InstanceReport {
        n,
        p,
        r,
        agreement: Some(BigUint::from(exact.distance) == presumed),
        presumed,
        exact: CellOutcome::Computed(exact.distance),
        demolish_len: Some(demolish.distance),
        theorem31_ok: Some(theorem31_ok),
        theorem32_ok: Some(theorem32_ok),
        theorem41_ok: Some(theorem41_ok),
        base_histogram,
        states_expanded: exact.states_expanded + demolish.states_expanded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::{build_solution, validate_solution};

    fn problem(n: u32, p: u32) -> Problem {
        Problem::new(n, p).unwrap()
    }

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn decompose_splits_at_the_pivot() {
        let pr = problem(3, 3);
        let path = build_solution(pr, 1, 2).unwrap();
        let d = decompose(&path).unwrap();
        assert_eq!(d.prefix.len(), 3);
        assert_eq!(d.suffix.len(), 3);
        assert_eq!(d.pivot.disk, 3);
        assert_eq!((d.pivot.from, d.pivot.to), (1, 2));
        assert_eq!(d.demolishing().len(), 4);
        assert_eq!(d.reassemble(), path);
    }

    #[test]
    fn decompose_requires_the_largest_disk_to_move() {
        let start = State::constant(problem(2, 3), 1).unwrap();
        let step = start.move_to(1, 3).unwrap();
        let path = Path::from_moves(start, vec![step]).unwrap();
        assert!(decompose(&path).is_err());
    }

    #[test]
    fn reflection_is_an_involution_that_swaps_endpoints() {
        let pr = problem(4, 4);
        let path = build_solution(pr, 1, 2).unwrap();
        let r = reflect(&path, 1, 2).unwrap();
        assert_eq!(r.len(), path.len());
        assert_eq!(r.first().constant_peg(), Some(1));
        assert_eq!(r.last().constant_peg(), Some(2));
        assert_eq!(reflect(&r, 1, 2).unwrap(), path);
        assert!(validate_solution(&r, pr, 1, 2).unwrap().ok());
    }

    #[test]
    fn sampled_optima_rebuild_from_their_own_prefix() {
        // prefix + pivot + reflected prefix is again a valid optimal solution
        let b = budget();
        for (n, p) in [(3, 3), (4, 4), (3, 4)] {
            let pr = problem(n, p);
            for path in optimal_solutions_sample(pr, 8, &b).unwrap() {
                let d = decompose(&path).unwrap();
                assert_eq!(d.prefix.len(), d.suffix.len());
                let rebuilt = d
                    .demolishing()
                    .concat(&reflect(&d.prefix, 1, 2).unwrap())
                    .unwrap();
                assert_eq!(rebuilt.len(), path.len());
                assert!(validate_solution(&rebuilt, pr, 1, 2).unwrap().ok());
            }
        }
    }

    #[test]
    fn base_of_small_instances() {
        let b = budget();
        let two = &optimal_solutions_sample(problem(2, 4), 5, &b).unwrap()[0];
        let report = base_of(two).unwrap();
        assert_eq!(report.anchor, 0);
        assert_eq!(report.base, 1);

        let three = &optimal_solutions_sample(problem(3, 3), 5, &b).unwrap()[0];
        let report = base_of(three).unwrap();
        assert_eq!(report.anchor, 0, "both small disks share a peg");
        assert_eq!(report.base, 2);
        assert_eq!(report.middle_state.top_disk(1), Some(3));

        let single = build_solution(problem(1, 3), 1, 2).unwrap();
        assert!(base_of(&single).is_err());
    }

    #[test]
    fn demolishing_identity_on_small_instances() {
        let b = budget();
        for (n, p, m, d) in [(1, 3, 1, 0), (2, 3, 3, 1), (3, 3, 7, 3), (4, 4, 9, 4)] {
            let id = check_demolishing_identity(problem(n, p), &b).unwrap();
            assert_eq!(id.minimum, m);
            assert_eq!(id.demolishing, d);
            assert!(id.holds());
        }
    }

    #[test]
    fn bottom_exclusion_vacuous_with_two_stacks() {
        let b = budget();
        let path = &optimal_solutions_sample(problem(3, 3), 1, &b).unwrap()[0];
        let report = check_bottom_exclusion(&decompose(path).unwrap().demolishing()).unwrap();
        assert!(report.vacuous());
        assert!(report.holds());
        assert_eq!(report.bottoms, vec![3, 2]);
    }

    #[test]
    fn bottom_exclusion_guards_the_small_bottom() {
        let b = budget();
        for path in optimal_solutions_sample(problem(3, 4), 10, &b).unwrap() {
            let report = check_bottom_exclusion(&decompose(&path).unwrap().demolishing()).unwrap();
            assert_eq!(report.bottoms, vec![3, 2, 1]);
            let guarded = report.guarded_peg.unwrap();
            assert!(guarded >= 3, "pegs 1 and 2 hold the two big disks");
            assert!(report.holds());
        }
    }

    #[test]
    fn bottom_exclusion_rejects_paths_without_pivot() {
        let start = State::constant(problem(2, 3), 1).unwrap();
        let step = start.move_to(1, 3).unwrap();
        let path = Path::from_moves(start, vec![step]).unwrap();
        assert!(check_bottom_exclusion(&path).is_err());
    }

    #[test]
    fn base_bound_holds_on_sampled_optima() {
        let b = budget();
        let report = check_base_bound(problem(4, 4), 64, &b).unwrap();
        assert!(report.bound_holds);
        assert_eq!(report.level, 2);
        assert_eq!(report.presumed, BigUint::from(9u32));
        assert_eq!(report.optimum, 9);
        assert_eq!(report.histogram.values().sum::<u64>(), report.samples);
    }

    #[test]
    fn instance_report_has_the_pinned_shape() {
        let rep = analyze_instance(problem(3, 3), 16, &budget()).unwrap();
        assert_eq!(rep.agreement, Some(true));
        let v = serde_json::to_value(&rep).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            vec![
                "K",
                "M",
                "base_histogram",
                "demolish_len",
                "n",
                "p",
                "r",
                "theorem31_ok",
                "theorem32_ok",
                "theorem41_ok",
            ]
        );
        assert_eq!(v["K"], "7");
        assert_eq!(v["M"], 7);
        assert_eq!(v["demolish_len"], 3);
        assert_eq!(v["theorem31_ok"], true);
        assert_eq!(v["theorem32_ok"], true);
        assert_eq!(v["theorem41_ok"], true);
        assert_eq!(v["base_histogram"]["2"], 1);
        assert_eq!(v["base_histogram"].as_object().unwrap().len(), 1);
    }

    #[test]
    fn skipped_report_keeps_formula_fields() {
        let rep = InstanceReport::skipped(problem(20, 4)).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["M"], "skipped");
        assert_eq!(v["K"], "289");
        assert!(v["demolish_len"].is_null());
        assert!(v["theorem31_ok"].is_null());
        assert_eq!(v["base_histogram"].as_object().unwrap().len(), 0);
    }
}
