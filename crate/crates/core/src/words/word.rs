use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Letter index. Alphabets are always `{0, …, d−1}`.
pub type Letter = u32;

/// A finite word over an integer alphabet.
///
/// The ordering is length-then-lexicographic, so a set of words iterates
/// shortest first and, within one length, in [`lex_compare`] order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    /// The empty word Λ.
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(a: Letter) -> Self {
        Word(vec![a])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// Word of the letters `range`; panics when out of bounds.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.slice(0..len)
    }

    pub fn suffix(&self, len: usize) -> Word {
        self.slice(self.len() - len..self.len())
    }

    /// This word with `a` appended.
    pub fn push(&self, a: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.extend_from_slice(&self.0);
        letters.push(a);
        Word(letters)
    }

    /// Largest letter plus one, i.e. the smallest alphabet containing the word.
    pub fn alphabet_bound(&self) -> usize {
        self.0.iter().map(|&a| a as usize + 1).max().unwrap_or(0)
    }

    pub fn check_alphabet(&self, alphabet: usize) -> Result<()> {
        match self.0.iter().find(|&&a| a as usize >= alphabet) {
            Some(&letter) => Err(Error::InvalidLetter { letter, alphabet }),
            None => Ok(()),
        }
    }

    /// Position of this word in the lexicographic enumeration of `Aⁿ`,
    /// i.e. its value as a base-`alphabet` numeral.
    pub fn rank_in(&self, alphabet: usize) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &a| acc * alphabet + a as usize)
    }

    /// Inverse of [`Word::rank_in`] for words of length `len`.
    pub fn unrank(mut index: usize, alphabet: usize, len: usize) -> Word {
        let mut letters = vec![0; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % alphabet) as Letter;
            index /= alphabet;
        }
        Word(letters)
    }

    /// All words of length `len` over `alphabet`, in lexicographic order.
    pub fn all(alphabet: usize, len: usize) -> impl Iterator<Item = Word> {
        let total = if len == 0 {
            1
        } else {
            alphabet
                .checked_pow(len as u32)
                .expect("word space too large")
        };
        (0..total).map(move |i| Word::unrank(i, alphabet, len))
    }

    /// Iterator over the contiguous subwords of length `len`, left to right.
    pub fn factors(&self, len: usize) -> impl Iterator<Item = &[Letter]> {
        let count = if len <= self.len() {
            self.len() - len + 1
        } else {
            0
        };
        (0..count).map(move |i| &self.0[i..i + len])
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl<const N: usize> From<[Letter; N]> for Word {
    fn from(letters: [Letter; N]) -> Self {
        Word(letters.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("Λ");
        }
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Concatenation `xy`.
pub fn concat(x: &Word, y: &Word) -> Word {
    let mut letters = Vec::with_capacity(x.len() + y.len());
    letters.extend_from_slice(&x.0);
    letters.extend_from_slice(&y.0);
    Word(letters)
}

/// Whether `y` occurs as a contiguous block of `w`.
pub fn is_subword(y: &Word, w: &Word) -> bool {
    contains_factor(w.letters(), y.letters())
}

pub(crate) fn contains_factor(haystack: &[Letter], needle: &[Letter]) -> bool {
    if needle.is_empty() {
        return true;
    }
    if needle.len() > haystack.len() {
        return false;
    }
    haystack
        .windows(needle.len())
        .any(|window| window == needle)
}

/// Lexicographic comparison of two words of equal length.
pub fn lex_compare(v: &Word, w: &Word) -> Result<Ordering> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: v.len(),
            right: w.len(),
        });
    }
    Ok(v.0.cmp(&w.0))
}
