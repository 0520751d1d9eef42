//! Fixed workloads shared by the benchmarks.

use haarshift::{DyadicFunction, DyadicInterval, ExactFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One pair per case class, with `K` several levels away from `I`.
pub fn representative_pairs() -> Vec<(&'static str, DyadicInterval, DyadicInterval)> {
    vec![
        ("equal", DyadicInterval::new(-6, 45), DyadicInterval::new(-6, 45)),
        ("covering", DyadicInterval::new(-6, 45), DyadicInterval::new(6, 0)),
        ("interior", DyadicInterval::new(6, 1), DyadicInterval::new(-6, 5000)),
        ("gap", DyadicInterval::new(-6, 45), DyadicInterval::new(-2, 60)),
        ("opposite", DyadicInterval::new(-6, 45), DyadicInterval::new(0, -3)),
    ]
}

/// Seeded function with small integer leaves on `root`.
pub fn random_function(root: DyadicInterval, depth: u32, seed: u64) -> ExactFunction {
    DyadicFunction::random(root, depth, 8, &mut ChaCha8Rng::seed_from_u64(seed))
}
