use std::collections::BTreeSet;
use std::fmt;

use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// One level of a word system: words of a common length in lexicographic order.
pub type Level = BTreeSet<Word>;

/// Why a leveled family fails to be a word system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Level 0 is not exactly `{Λ}`.
    BaseLevel,
    /// `word ∈ X_{m+n}` does not factor through `X_m × X_n`; `missing` is
    /// the prefix or suffix that is absent from its level.
    Closure {
        m: usize,
        n: usize,
        word: Word,
        missing: Word,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BaseLevel => f.write_str("level 0 must be exactly {Λ}"),
            Violation::Closure {
                m,
                n,
                word,
                missing,
            } => write!(
                f,
                "at ({m},{n}): {word} has subword {missing} missing from level {}",
                missing.len()
            ),
        }
    }
}

/// A horizon-bounded word system `X₀, …, X_N` over the alphabet `{0, …, d−1}`.
///
/// Construction validates closure under subwords, so every value of this type
/// is a genuine word system truncated at its horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSystem {
    alphabet: usize,
    levels: Vec<Level>,
}

/// Validates a leveled family against the word-system invariants.
///
/// Letters and lengths are hard errors; a closure failure is reported as
/// `Ok(Some(violation))` naming the first failing `(m, n)` in order of
/// increasing `m + n`, then increasing `m`.
pub fn check_word_system(alphabet: usize, levels: &[Level]) -> Result<Option<Violation>> {
    for (level, words) in levels.iter().enumerate() {
        for word in words {
            if word.len() != level {
                return Err(Error::BadLength {
                    level,
                    found: word.len(),
                });
            }
            word.check_alphabet(alphabet)?;
        }
    }
    if levels.is_empty() || levels[0].len() != 1 {
        return Ok(Some(Violation::BaseLevel));
    }
    for total in 2..levels.len() {
        for m in 1..total {
            let n = total - m;
            for word in &levels[total] {
                let prefix = word.prefix(m);
                if !levels[m].contains(&prefix) {
                    return Ok(Some(Violation::Closure {
                        m,
                        n,
                        word: word.clone(),
                        missing: prefix,
                    }));
                }
                let suffix = word.suffix(n);
                if !levels[n].contains(&suffix) {
                    return Ok(Some(Violation::Closure {
                        m,
                        n,
                        word: word.clone(),
                        missing: suffix,
                    }));
                }
            }
        }
    }
    if let Some(first_empty) = (1..levels.len()).find(|&n| levels[n].is_empty()) {
        debug_assert!(levels[first_empty..].iter().all(BTreeSet::is_empty));
    }
    Ok(None)
}

impl WordSystem {
    /// Builds and validates a word system from its levels `X₀..X_N`.
    pub fn new(alphabet: usize, levels: Vec<Level>) -> Result<Self> {
        match check_word_system(alphabet, &levels)? {
            None => Ok(WordSystem { alphabet, levels }),
            Some(violation) => Err(Error::NotClosed(violation)),
        }
    }

    /// Convenience constructor from nested letter vectors, level 0 included.
    pub fn from_words(alphabet: usize, levels: Vec<Vec<Vec<Letter>>>) -> Result<Self> {
        let levels = levels
            .into_iter()
            .map(|level| level.into_iter().map(Word::new).collect())
            .collect();
        Self::new(alphabet, levels)
    }

    pub(crate) fn new_unchecked(alphabet: usize, levels: Vec<Level>) -> Self {
        debug_assert_eq!(check_word_system(alphabet, &levels), Ok(None));
        WordSystem { alphabet, levels }
    }

    /// The full word system: every word of length `≤ horizon`.
    pub fn full(alphabet: usize, horizon: usize) -> Self {
        let levels = (0..=horizon)
            .map(|n| Word::all(alphabet, n).collect())
            .collect();
        WordSystem { alphabet, levels }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.levels
            .get(word.len())
            .is_some_and(|level| level.contains(word))
    }

    /// Cardinalities `#X₀, …, #X_N`.
    pub fn counts(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.len() as u64).collect()
    }

    /// The same system cut down to a smaller horizon.
    pub fn truncate(&self, horizon: usize) -> WordSystem {
        let keep = horizon.min(self.horizon()) + 1;
        WordSystem {
            alphabet: self.alphabet,
            levels: self.levels[..keep].to_vec(),
        }
    }

    /// `X_{n−1}A ∩ AX_{n−1}`: the words of length `n` whose two subwords of
    /// length `n−1` both survive. Requires `1 ≤ n ≤ N + 1`.
    pub fn extension_pool(&self, n: usize) -> Level {
        extension_pool(self.alphabet, &self.levels[n - 1])
    }
}

/// `XA ∩ AX` for a level `X` of words of a common length.
pub(crate) fn extension_pool(alphabet: usize, previous: &Level) -> Level {
    let mut pool = Level::new();
    for word in previous {
        for a in 0..alphabet as Letter {
            let candidate = word.push(a);
            if previous.contains(&candidate.suffix(word.len())) {
                pool.insert(candidate);
            }
        }
    }
    pool
}
