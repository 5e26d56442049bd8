//! Property tests over randomly generated states and walks.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use hanoi_core::oracle::{decode, encode, PackedState};
use hanoi_core::{Path, Problem, State};

/// A uniformly random state of an (n, p)-problem.
fn arb_state() -> impl Strategy<Value = State> {
    (1u32..=7, 3u32..=6).prop_flat_map(|(n, p)| {
        prop::collection::vec(1..=p as u16, n as usize)
            .prop_map(move |assignment| State::new(assignment, p).unwrap())
    })
}

fn arb_walk() -> impl Strategy<Value = Path> {
    (1u32..=6, 3u32..=6, 0usize..=25, any::<u64>()).prop_map(|(n, p, steps, seed)| {
        let problem = Problem::new(n, p).unwrap();
        let start = State::constant(problem, 1 + (seed % p as u64) as u32).unwrap();
        common::random_walk(start, steps, &mut StdRng::seed_from_u64(seed))
    })
}

proptest! {
    #[test]
    fn walks_survive_json_round_trips(path in arb_walk()) {
        let json = serde_json::to_string(&path).unwrap();
        let back: Path = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, path);
    }

    #[test]
    fn splitting_and_rejoining_is_lossless(path in arb_walk(), at in any::<prop::sample::Index>()) {
        let cut = at.index(path.len() + 1);
        let head = Path::from_states(path.states()[..=cut].to_vec()).unwrap();
        let tail = Path::from_states(path.states()[cut..].to_vec()).unwrap();
        prop_assert_eq!(head.concat(&tail).unwrap(), path);
    }

    #[test]
    fn restriction_length_equals_move_count(path in arb_walk(), mask in any::<u64>()) {
        let n = path.first().disks();
        let subset: BTreeSet<u32> = (1..=n).filter(|d| mask >> (d - 1) & 1 == 1).collect();
        if !subset.is_empty() {
            let restricted = path.restrict(&subset);
            prop_assert_eq!(restricted.len() as u64, path.count_moves(&subset));
            prop_assert_eq!(restricted.first().disks(), subset.len() as u32);
        }
    }

    #[test]
    fn restriction_to_every_disk_is_identity(path in arb_walk()) {
        let n = path.first().disks();
        let all: BTreeSet<u32> = (1..=n).collect();
        prop_assert_eq!(path.restrict(&all), path);
    }

    #[test]
    fn moves_are_undone_by_their_reversals(state in arb_state()) {
        for mv in state.legal_moves() {
            prop_assert!(mv.well_formed());
            let there = state.apply_move(&mv).unwrap();
            let back = there.apply_move(&mv.reversed()).unwrap();
            prop_assert_eq!(&back, &state);
        }
    }

    #[test]
    fn packed_codes_round_trip(state in arb_state()) {
        let code = encode(&state).unwrap();
        prop_assert!((code.0 as u128) < state.problem().state_count().unwrap());
        prop_assert_eq!(decode(code, state.problem()).unwrap(), state);
    }

    #[test]
    fn peg_permutations_preserve_mobility(state in arb_state(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let p = state.pegs();
        let mut perm: Vec<u32> = (1..=p).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(seed));
        let relabeled = state.permute_pegs(&perm).unwrap();
        prop_assert_eq!(relabeled.legal_moves().len(), state.legal_moves().len());
        // disk order on each peg is invariant under relabeling
        for d in 1..=state.disks() {
            prop_assert_eq!(relabeled.peg_of(d), perm[state.peg_of(d) as usize - 1]);
        }
    }

    #[test]
    fn walk_moves_carry_consistent_triples(path in arb_walk()) {
        for (i, mv) in path.moves().iter().enumerate() {
            let before = &path.states()[i];
            prop_assert_eq!(mv.triple.placed_on, path.states()[i + 1].disk_below(mv.disk));
            prop_assert_eq!(
                mv.triple.lifted_from,
                before.disk_below(mv.disk),
                "lifted support is what the disk rested on before the move"
            );
        }
    }

    #[test]
    fn codes_out_of_range_are_rejected(n in 1u32..=6, p in 3u32..=5, extra in 0u64..100) {
        let problem = Problem::new(n, p).unwrap();
        let count = problem.state_count().unwrap() as u64;
        let err = decode(PackedState(count + extra), problem);
        prop_assert!(err.is_err());
    }
}
