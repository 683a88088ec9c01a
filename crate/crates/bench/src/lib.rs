//! Shared inputs for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simplexrank::{fixtures, InputSet};

/// `count` reproducible random instances over `n` items.
pub fn instances(seed: u64, count: usize, n: usize) -> Vec<InputSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| fixtures::random_instance(&mut rng, n, 3, false))
        .collect()
}
