use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Presentations of each gain per group.
pub const DEFAULT_REPETITIONS: usize = 5;

/// Gains 0.5, 0.6, ..., 1.5.
pub fn default_gains() -> Vec<f64> {
    (5..=15).map(|i| i as f64 / 10.0).collect()
}

/// Fisher–Yates permutation of `gains` repeated `reps` times, driven by a ChaCha8 stream
/// seeded with `seed`.
pub fn shuffle_gains(seed: u64, gains: &[f64], reps: usize) -> Vec<f64> {
    let mut seq: Vec<f64> = (0..reps).flat_map(|_| gains.iter().copied()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..seq.len()).rev() {
        let j = rng.random_range(0..=i);
        seq.swap(i, j);
    }
    seq
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_a_permutation_of_the_multiset() {
        let gains = default_gains();
        let mut out = shuffle_gains(7, &gains, 5);
        assert_eq!(out.len(), 55);
        let mut expected: Vec<f64> = (0..5).flat_map(|_| gains.iter().copied()).collect();
        out.sort_by(f64::total_cmp);
        expected.sort_by(f64::total_cmp);
        assert_eq!(out, expected);
    }

    #[test]
    fn deterministic_per_seed() {
        let gains = default_gains();
        assert_eq!(shuffle_gains(3, &gains, 5), shuffle_gains(3, &gains, 5));
        let seqs: Vec<_> = (0..5).map(|s| shuffle_gains(s, &gains, 5)).collect();
        for i in 0..5 {
            for j in i + 1..5 {
                assert_ne!(seqs[i], seqs[j]);
            }
        }
    }

    #[test]
    fn default_gain_grid() {
        let g = default_gains();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[5], 1.0);
        assert_eq!(g[10], 1.5);
    }
}
