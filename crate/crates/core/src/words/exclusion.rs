use std::collections::BTreeSet;

use super::system::{Level, WordSystem};
use super::word::{contains_factor, Letter, Word};
use crate::error::{Error, Result};

/// A finite set of nonempty excluded words over `{0, …, d−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionSet {
    alphabet: usize,
    words: BTreeSet<Word>,
}

impl ExclusionSet {
    pub fn new(alphabet: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        for word in &words {
            if word.is_empty() {
                return Err(Error::EmptyWord);
            }
            word.check_alphabet(alphabet)?;
        }
        Ok(ExclusionSet { alphabet, words })
    }

    pub fn from_letters(alphabet: usize, words: Vec<Vec<Letter>>) -> Result<Self> {
        Self::new(alphabet, words.into_iter().map(Word::new))
    }

    pub fn empty(alphabet: usize) -> Self {
        ExclusionSet {
            alphabet,
            words: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Sum of the lengths of all excluded words.
    pub fn total_length(&self) -> usize {
        self.words.iter().map(Word::len).sum()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// No member is a proper subword of another member.
    pub fn is_reduced(&self) -> bool {
        self.words.iter().all(|w| !self.has_proper_subword_of(w))
    }

    fn has_proper_subword_of(&self, word: &Word) -> bool {
        self.words
            .range(..word.clone())
            .take_while(|other| other.len() < word.len())
            .any(|other| contains_factor(word.letters(), other.letters()))
    }

    pub fn union(&self, other: &ExclusionSet) -> ExclusionSet {
        ExclusionSet {
            alphabet: self.alphabet.max(other.alphabet),
            words: self.words.union(&other.words).cloned().collect(),
        }
    }

    /// Members of length at most `max_len`.
    pub fn restricted_to(&self, max_len: usize) -> ExclusionSet {
        ExclusionSet {
            alphabet: self.alphabet,
            words: self
                .words
                .iter()
                .filter(|w| w.len() <= max_len)
                .cloned()
                .collect(),
        }
    }

    /// Whether some member occurs as a subword ending at the last letter of
    /// `word`.
    fn excludes_suffix_of(&self, word: &Word, by_length: &[Vec<&Word>]) -> bool {
        let letters = word.letters();
        by_length
            .iter()
            .enumerate()
            .skip(1)
            .take_while(|(len, _)| *len <= letters.len())
            .any(|(len, words)| {
                let tail = &letters[letters.len() - len..];
                words.iter().any(|w| w.letters() == tail)
            })
    }
}

/// The word system `X(E)` of all words avoiding every member of `E`,
/// materialized up to `horizon`.
pub fn from_exclusions(
    alphabet: usize,
    excluded: &ExclusionSet,
    horizon: usize,
) -> Result<WordSystem> {
    for word in excluded.words() {
        word.check_alphabet(alphabet)?;
    }
    let mut by_length: Vec<Vec<&Word>> = vec![Vec::new(); excluded.max_len() + 1];
    for word in excluded.words() {
        by_length[word.len()].push(word);
    }

    let mut levels: Vec<Level> = vec![Level::from([Word::empty()])];
    for n in 1..=horizon {
        let mut next = Level::new();
        for word in &levels[n - 1] {
            for a in 0..alphabet as Letter {
                let candidate = word.push(a);
                // Every other subword of `candidate` is a subword of `word`.
                if !excluded.excludes_suffix_of(&candidate, &by_length) {
                    next.insert(candidate);
                }
            }
        }
        levels.push(next);
    }
    Ok(WordSystem::new_unchecked(alphabet, levels))
}

/// The reduced set of excluded words generating `X`, truncated to words of
/// length at most the horizon.
///
/// Level by level, `Rₙ = (X_{n−1}A ∩ AX_{n−1}) \ Xₙ`. Members longer than the
/// horizon are not computable from a truncated system and are omitted, which
/// is exactly enough for `from_exclusions(antidictionary(X), N)` to give back
/// `X`.
pub fn antidictionary(system: &WordSystem) -> ExclusionSet {
    let mut words = BTreeSet::new();
    for n in 1..=system.horizon() {
        let pool = system.extension_pool(n);
        words.extend(pool.difference(system.level(n)).cloned());
    }
    ExclusionSet {
        alphabet: system.alphabet(),
        words,
    }
}

/// Drops every member that contains a strictly shorter member as a subword.
pub fn reduce_exclusions(excluded: &ExclusionSet) -> ExclusionSet {
    let words = excluded
        .words()
        .iter()
        .filter(|w| !excluded.has_proper_subword_of(w))
        .cloned()
        .collect();
    ExclusionSet {
        alphabet: excluded.alphabet(),
        words,
    }
}
