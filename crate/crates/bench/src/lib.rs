//! Fixed benchmark inputs, shared by the criterion harness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wordsys_core::sample::{random_reduced_exclusions, random_word_system};
use wordsys_core::{ExclusionSet, Word, WordSystem};

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed)
}

/// Binary words avoiding `11`.
pub fn fibonacci_exclusions() -> ExclusionSet {
    ExclusionSet::new(2, [Word::from([1, 1])]).unwrap()
}

/// A reproducible ternary exclusion set of total length at most 8.
pub fn ternary_exclusions() -> ExclusionSet {
    random_reduced_exclusions(&mut rng(), 3, 8)
}

/// A reproducible ternary word system of horizon 6.
pub fn ternary_system() -> WordSystem {
    random_word_system(&mut rng(), 3, 6, 0.8)
}
