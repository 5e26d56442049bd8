//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (visible under `cargo test -- --nocapture`). Ranges and
//! time bounds are pinned here on purpose; loosening them is a contract
//! change, not a refactor.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hanoi_core::analysis::{base_of, check_bottom_exclusion, decompose};
use hanoi_core::constructor::{solution_moves, validate_move_stream};
use hanoi_core::numerics::{binomial, find_r, k_closed, k_delta, k_dp, KTable};
use hanoi_core::oracle::{
    bfs_distance, decode, m_number, minimal_demolishing_length, optimal_solutions_sample,
    PackedState, SearchBudget,
};
use hanoi_core::{Problem, State};

fn done(name: &str, started: Instant, bound: Option<Duration>) {
    let elapsed = started.elapsed();
    if let Some(limit) = bound {
        assert!(
            elapsed < limit,
            "{name} took {elapsed:?}, over its {limit:?} budget"
        );
    }
    println!("[acceptance] {name}: PASS ({elapsed:?})");
}

fn problem(n: u32, p: u32) -> Problem {
    Problem::new(n, p).unwrap()
}

fn pow2(e: u32) -> BigUint {
    BigUint::from(1u32) << e
}

#[test]
fn criterion_01_three_peg_closed_form_is_doubling() {
    let t = Instant::now();
    for n in 1..=30 {
        assert_eq!(k_closed(n, 3).unwrap(), pow2(n) - 1u32, "n={n}");
    }
    done("c01 three-peg closed form", t, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_02_search_matches_doubling_on_three_pegs() {
    let t = Instant::now();
    let b = SearchBudget::default();
    for n in 1..=10 {
        let m = m_number(problem(n, 3), &b).unwrap().distance;
        assert_eq!(BigUint::from(m), pow2(n) - 1u32, "n={n}");
    }
    done("c02 search vs doubling, p=3", t, Some(Duration::from_secs(5)));
}

#[test]
fn criterion_03_search_matches_formula_on_four_pegs() {
    let t = Instant::now();
    let b = SearchBudget::default(); // 2 GiB; the n=10 sweep needs ~8 MB
    for n in 1..=10 {
        let m = m_number(problem(n, 4), &b).unwrap().distance;
        assert_eq!(BigUint::from(m), k_closed(n, 4).unwrap(), "n={n}");
    }
    done(
        "c03 search vs formula, p=4, n<=10",
        t,
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn criterion_04_search_matches_formula_on_five_pegs() {
    let t = Instant::now();
    let b = SearchBudget::default();
    for n in 1..=8 {
        let m = m_number(problem(n, 5), &b).unwrap().distance;
        assert_eq!(BigUint::from(m), k_closed(n, 5).unwrap(), "n={n}");
    }
    done(
        "c04 search vs formula, p=5, n<=8",
        t,
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn criterion_05_closed_form_equals_dynamic_program() {
    let t = Instant::now();
    let table = KTable::new(200, 10).unwrap();
    for p in 3..=10 {
        for n in 1..=200 {
            assert_eq!(&k_closed(n, p).unwrap(), table.value(n, p), "n={n} p={p}");
        }
    }
    // the one-shot entry point goes through the same fill
    for (n, p) in [(1, 3), (2, 10), (3, 4), (17, 5), (60, 7), (200, 10)] {
        assert_eq!(k_dp(n, p).unwrap(), k_closed(n, p).unwrap());
    }
    done("c05 closed form vs DP", t, Some(Duration::from_secs(5)));
}

#[test]
fn criterion_06_increments_are_powers_of_two_by_level() {
    let t = Instant::now();
    for p in 3..=8 {
        for n in 2..=500 {
            let r = find_r(n, p).unwrap();
            let delta = k_delta(n, p).unwrap();
            let at_floor = binomial((r + p - 3) as u64, (p - 2) as u64) == BigUint::from(n);
            let expected = if at_floor { pow2(r - 1) } else { pow2(r) };
            assert_eq!(delta, expected, "n={n} p={p} r={r} floor={at_floor}");
        }
    }
    done("c06 increment law", t, None);
}

#[test]
fn criterion_07_constructed_solutions_hit_the_formula_exactly() {
    let t = Instant::now();
    for p in 3..=6 {
        for n in 1..=20 {
            let pr = problem(n, p);
            let expected = k_closed(n, p).unwrap();
            for from in 1..=p {
                for to in 1..=p {
                    if from == to {
                        continue;
                    }
                    let stream = solution_moves(pr, from, to).unwrap();
                    let report = validate_move_stream(pr, from, to, stream).unwrap();
                    assert!(report.ok(), "(n={n} p={p} {from}->{to}): {report:?}");
                    assert_eq!(
                        BigUint::from(report.moves),
                        expected,
                        "(n={n} p={p} {from}->{to})"
                    );
                }
            }
        }
    }
    done(
        "c07 constructor exactness, n<=20, p<=6, all peg pairs",
        t,
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn criterion_08_minimum_is_twice_demolishing_plus_one() {
    let t = Instant::now();
    let b = SearchBudget::default();
    for p in [3, 4, 5] {
        for n in 1..=8 {
            let pr = problem(n, p);
            let m = m_number(pr, &b).unwrap().distance;
            let d = minimal_demolishing_length(pr, false, &b).unwrap().distance;
            assert_eq!(m, 2 * d + 1, "n={n} p={p}");
        }
    }
    done("c08 demolishing identity, n<=8, p in {3,4,5}", t, None);
}

#[test]
fn criterion_09_no_large_disk_enters_the_guarded_peg() {
    let t = Instant::now();
    let b = SearchBudget::default();
    for n in 1..=7 {
        let pr = problem(n, 4);
        let samples = optimal_solutions_sample(pr, 50, &b).unwrap();
        assert!(!samples.is_empty());
        for (i, path) in samples.iter().enumerate() {
            let prefix = decompose(path).unwrap().demolishing();
            let report = check_bottom_exclusion(&prefix).unwrap();
            assert!(
                report.holds(),
                "n={n} sample {i}: violations {:?}",
                report.violations
            );
        }
    }
    done("c09 bottom exclusion over samples, n<=7, p=4", t, None);
}

#[test]
fn criterion_10_samples_with_high_base_are_never_short() {
    let t = Instant::now();
    let b = SearchBudget::default();
    for n in 1..=7 {
        let pr = problem(n, 4);
        let r = find_r(n, 4).unwrap();
        let k = k_closed(n, 4).unwrap();
        for (i, path) in optimal_solutions_sample(pr, 50, &b)
            .unwrap()
            .iter()
            .enumerate()
        {
            if n < 2 {
                continue; // no base statistic with a single disk
            }
            let base = base_of(path).unwrap().base;
            if base >= r {
                assert!(
                    BigUint::from(path.len() as u64) >= k,
                    "n={n} sample {i}: base {base} >= level {r} but length {} < {k}",
                    path.len()
                );
            }
        }
    }
    done("c10 base bound over samples, n<=7, p=4", t, None);
}

#[test]
fn criterion_11_random_walks_never_beat_the_search() {
    let t = Instant::now();
    let b = SearchBudget::default();
    let mut rng = StdRng::seed_from_u64(0xacce97);
    for (n, p) in [(7, 3), (8, 3), (4, 4), (6, 4), (4, 5), (3, 6)] {
        let pr = problem(n, p);
        let count = pr.state_count().unwrap() as u64;
        for _ in 0..1000 {
            let start = decode(PackedState(rng.gen_range(0..count)), pr).unwrap();
            let steps = rng.gen_range(0..=40);
            let walk = common::random_walk(start, steps, &mut rng);
            let d = bfs_distance(pr, walk.first(), walk.last(), false, &b)
                .unwrap()
                .distance;
            assert!(
                d <= walk.len() as u64,
                "(n={n} p={p}): walk of {} moves beats distance {d}",
                walk.len()
            );
        }
    }
    done("c11 walks vs search, 1000 walks per instance", t, None);
}

#[test]
fn acceptance_preconditions_hold() {
    // guards the suite itself: budget default is 2 GiB and instances exist
    assert_eq!(SearchBudget::default().max_bytes, 2 * (1 << 30));
    assert!(Problem::new(20, 6).is_ok());
    let s = State::constant(problem(3, 3), 1).unwrap();
    assert_eq!(s.legal_moves().len(), 2);
}
