//! Reference instances and random generators for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{rank_of, InputSet, ScoreVector};

/// Five treatments ranked by complexity, effectiveness and quality of life.
pub fn anne() -> InputSet {
    let inputs = [[1., 2., 3., 4., 5.], [1., 3., 2., 4., 5.], [5., 1., 2., 3., 4.]]
        .into_iter()
        .map(|v| ScoreVector::ranking(v.to_vec()).expect("valid ranking"))
        .collect();
    InputSet::new(
        (1..=5).map(|i| format!("T{i}")).collect(),
        inputs,
        ["complexity", "effectiveness", "quality of life"]
            .map(String::from)
            .to_vec(),
    )
    .expect("valid fixture")
}

/// A uniformly random permutation of `1..=n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<u32> {
    let mut p: Vec<u32> = (1..=n as u32).collect();
    p.shuffle(rng);
    p
}

/// A random ranking with ties: positions of `n` values drawn from `1..=n`.
pub fn random_tied_ranking<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<u32> {
    let raw: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(1..=n as u32))).collect();
    rank_of(&ScoreVector::rating(raw).expect("finite")).positions().to_vec()
}

/// `j` random inputs over `n` items. With `ties`, each input is tied with
/// probability one half.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n: usize, j: usize, ties: bool) -> InputSet {
    let rankings: Vec<Vec<u32>> = (0..j)
        .map(|_| {
            if ties && rng.random_bool(0.5) {
                random_tied_ranking(rng, n)
            } else {
                random_permutation(rng, n)
            }
        })
        .collect();
    InputSet::from_rankings(&rankings).expect("valid random rankings")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_rankings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..8 {
            let mut p = random_permutation(&mut rng, n);
            p.sort();
            assert_eq!(p, (1..=n as u32).collect::<Vec<_>>());
            let t = random_tied_ranking(&mut rng, n);
            assert!(crate::model::RankLabel::from_positions(t).is_ok());
        }
        let set = random_instance(&mut rng, 6, 5, true);
        assert_eq!((set.n_items(), set.n_inputs()), (6, 5));
    }
}
