use hanoi_core::{Path, State};
use rand::rngs::StdRng;
use rand::Rng;

/// Uniform random legal walk of exactly `steps` moves.
pub fn random_walk(start: State, steps: usize, rng: &mut StdRng) -> Path {
    let mut path = Path::single(start);
    for _ in 0..steps {
        let options = path.last().legal_moves();
        let mv = options[rng.gen_range(0..options.len())];
        path.push(mv).expect("enumerated moves are legal");
    }
    path
}
