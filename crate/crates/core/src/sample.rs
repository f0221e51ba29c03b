//! Random instances for property tests, benchmarks and the acceptance suite.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::words::{extension_pool, ExclusionSet, Letter, Level, Word, WordSystem};

/// A uniformly "thinned" word system: level `n` keeps each word of the pool
/// `X_{n−1}A ∩ AX_{n−1}` independently with probability `density`.
///
/// Every word system over `alphabet` has positive probability, which makes
/// this the generator of choice for roundtrip properties.
pub fn random_word_system<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: usize,
    horizon: usize,
    density: f64,
) -> WordSystem {
    let mut levels: Vec<Level> = vec![Level::from([Word::empty()])];
    for _ in 1..=horizon {
        let pool = extension_pool(alphabet, levels.last().unwrap());
        let next = pool.into_iter().filter(|_| rng.gen_bool(density)).collect();
        levels.push(next);
    }
    WordSystem::new_unchecked(alphabet, levels)
}

/// Random exclusion set with `count` distinct words of lengths in
/// `1..=max_len`; may be unreduced.
pub fn random_exclusions<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: usize,
    count: usize,
    max_len: usize,
) -> ExclusionSet {
    let mut words = BTreeSet::new();
    if alphabet == 0 || max_len == 0 {
        return ExclusionSet::empty(alphabet);
    }
    let mut attempts = 0;
    while words.len() < count && attempts < 100 * (count + 1) {
        attempts += 1;
        let len = rng.gen_range(1..=max_len);
        let word: Word = (0..len)
            .map(|_| rng.gen_range(0..alphabet) as Letter)
            .collect();
        words.insert(word);
    }
    ExclusionSet::new(alphabet, words).expect("letters are in range")
}

/// Random reduced exclusion set whose total length does not exceed
/// `total_length`.
pub fn random_reduced_exclusions<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: usize,
    total_length: usize,
) -> ExclusionSet {
    let mut chosen = ExclusionSet::empty(alphabet);
    if alphabet == 0 {
        return chosen;
    }
    let mut budget = rng.gen_range(0..=total_length);
    while budget > 0 {
        let len = rng.gen_range(1..=budget.min(4));
        let word: Word = (0..len)
            .map(|_| rng.gen_range(0..alphabet) as Letter)
            .collect();
        let candidate = chosen.union(&ExclusionSet::new(alphabet, [word]).unwrap());
        if candidate.is_reduced() {
            chosen = candidate;
        }
        budget -= len;
    }
    chosen
}

/// Random graph where each ordered pair is an edge with probability `density`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, vertices: usize, density: f64) -> Graph {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..vertices {
        for j in 0..vertices {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    pairs.shuffle(rng);
    Graph::new(vertices, pairs).expect("vertices are in range")
}
