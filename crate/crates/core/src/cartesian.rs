//! Cartesian systems: leveled finite sets `X₀ = {Λ}, X₁, …, X_N` with
//! injections `i_{m,n}: X_{m+n} → X_m × X_n` that are coassociative.
//!
//! Elements are opaque string identifiers. Each level is kept sorted, so an
//! element is addressed by its index and `X₁` in sorted order is the alphabet
//! used by [`standardize`]. The injections with an index 0 are the canonical
//! bijections and are never stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::words::{Letter, Word, WordSystem};

/// Injection table for one `(m, n)`: entry `x` is the index pair `i_{m,n}(x)`.
type Table = Vec<(usize, usize)>;

/// Injection tables keyed by element identifier, as read from a document.
pub type NamedTables = BTreeMap<(usize, usize), BTreeMap<String, (String, String)>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianSystem {
    levels: Vec<Vec<String>>,
    tables: BTreeMap<(usize, usize), Table>,
}

/// First failure found by [`validate_cartesian`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartesianViolation {
    /// Two elements of `X_{m+n}` share an image under `i_{m,n}`.
    NotInjective {
        m: usize,
        n: usize,
        first: String,
        second: String,
    },
    /// `(i_{r,s} × id)∘i_{r+s,t}` and `(id × i_{s,t})∘i_{r,s+t}` differ at `element`.
    NotCoassociative {
        r: usize,
        s: usize,
        t: usize,
        element: String,
    },
}

impl fmt::Display for CartesianViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartesianViolation::NotInjective {
                m,
                n,
                first,
                second,
            } => write!(
                f,
                "i_{{{m},{n}}} maps {first:?} and {second:?} to the same pair"
            ),
            CartesianViolation::NotCoassociative { r, s, t, element } => {
                write!(f, "coassociativity fails at ({r},{s},{t}) for {element:?}")
            }
        }
    }
}

/// Order in which [`decompose_with`] splits off letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracketing {
    /// `i_{1,n−1}`, then `i_{1,n−2}` on the remainder, and so on.
    LeftFirst,
    /// `i_{n−1,1}`, then `i_{n−2,1}` on the remainder, and so on.
    RightFirst,
    /// Split in the middle and recurse on both halves.
    Balanced,
}

impl CartesianSystem {
    /// Builds a system from element identifiers and injection tables.
    ///
    /// Levels may be given in any order; they are sorted. A table is needed
    /// for every `m, n ≥ 1` with `m + n ≤ N` and must be total on `X_{m+n}`.
    pub fn new(levels: Vec<Vec<String>>, injections: &NamedTables) -> Result<Self> {
        if levels.first().map(Vec::len) != Some(1) {
            return Err(Error::ShapeError(
                "level 0 must contain exactly one element".into(),
            ));
        }
        let mut sorted = Vec::with_capacity(levels.len());
        let mut index: Vec<HashMap<String, usize>> = Vec::with_capacity(levels.len());
        for (n, mut level) in levels.into_iter().enumerate() {
            level.sort();
            if let Some(pair) = level.windows(2).find(|p| p[0] == p[1]) {
                return Err(Error::DuplicateElement {
                    level: n,
                    element: pair[0].clone(),
                });
            }
            index.push(level.iter().cloned().zip(0..).collect());
            sorted.push(level);
        }
        let horizon = sorted.len() - 1;

        if let Some(&(m, n)) = injections
            .keys()
            .find(|&&(m, n)| m == 0 || n == 0 || m + n > horizon)
        {
            return Err(Error::ShapeError(format!(
                "unexpected injection table ({m},{n}) for horizon {horizon}"
            )));
        }

        let mut tables = BTreeMap::new();
        for (m, n) in required_pairs(horizon) {
            let named = injections.get(&(m, n)).ok_or(Error::MissingTable {
                m,
                n,
                element: None,
            })?;
            if let Some(stray) = named.keys().find(|x| !index[m + n].contains_key(*x)) {
                return Err(Error::RangeError {
                    m,
                    n,
                    element: stray.clone(),
                });
            }
            let mut table = Vec::with_capacity(sorted[m + n].len());
            for x in &sorted[m + n] {
                let (u, v) = named.get(x).ok_or_else(|| Error::MissingTable {
                    m,
                    n,
                    element: Some(x.clone()),
                })?;
                let range_error = || Error::RangeError {
                    m,
                    n,
                    element: x.clone(),
                };
                let u = *index[m].get(u).ok_or_else(range_error)?;
                let v = *index[n].get(v).ok_or_else(range_error)?;
                table.push((u, v));
            }
            tables.insert((m, n), table);
        }
        Ok(CartesianSystem {
            levels: sorted,
            tables,
        })
    }

    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    /// Sorted identifiers of `Xₙ`.
    pub fn level(&self, n: usize) -> &[String] {
        &self.levels[n]
    }

    pub fn counts(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.len() as u64).collect()
    }

    /// Index of an element of `Xₙ`.
    pub fn position(&self, n: usize, id: &str) -> Option<usize> {
        self.levels[n]
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .ok()
    }

    /// `i_{m,n}(x)` as indices into `X_m` and `X_n`; index-0 maps are the
    /// canonical bijections.
    pub fn inject(&self, m: usize, n: usize, x: usize) -> (usize, usize) {
        match (m, n) {
            (0, _) => (0, x),
            (_, 0) => (x, 0),
            _ => self.tables[&(m, n)][x],
        }
    }

    /// The stored tables with identifiers instead of indices.
    pub fn named_tables(&self) -> NamedTables {
        self.tables
            .iter()
            .map(|(&(m, n), table)| {
                let named = table
                    .iter()
                    .enumerate()
                    .map(|(x, &(u, v))| {
                        (
                            self.levels[m + n][x].clone(),
                            (self.levels[m][u].clone(), self.levels[n][v].clone()),
                        )
                    })
                    .collect();
                ((m, n), named)
            })
            .collect()
    }
}

fn required_pairs(horizon: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=horizon).flat_map(|total| (1..total).map(move |m| (m, total - m)))
}

/// Checks injectivity of every table, then coassociativity for every triple
/// `r, s, t ≥ 1` with `r + s + t ≤ N`. Returns the first failure.
pub fn validate_cartesian(system: &CartesianSystem) -> Option<CartesianViolation> {
    for (m, n) in required_pairs(system.horizon()) {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for (x, &pair) in system.tables[&(m, n)].iter().enumerate() {
            if let Some(&earlier) = seen.get(&pair) {
                return Some(CartesianViolation::NotInjective {
                    m,
                    n,
                    first: system.levels[m + n][earlier].clone(),
                    second: system.levels[m + n][x].clone(),
                });
            }
            seen.insert(pair, x);
        }
    }
    for total in 3..=system.horizon() {
        for r in 1..total - 1 {
            for s in 1..total - r {
                let t = total - r - s;
                for x in 0..system.levels[total].len() {
                    let (left, c) = system.inject(r + s, t, x);
                    let (a, b) = system.inject(r, s, left);
                    let (a2, right) = system.inject(r, s + t, x);
                    let (b2, c2) = system.inject(s, t, right);
                    if (a, b, c) != (a2, b2, c2) {
                        return Some(CartesianViolation::NotCoassociative {
                            r,
                            s,
                            t,
                            element: system.levels[total][x].clone(),
                        });
                    }
                }
            }
        }
    }
    None
}

fn ensure_valid(system: &CartesianSystem) -> Result<()> {
    match validate_cartesian(system) {
        None => Ok(()),
        Some(violation) => Err(Error::NotValid(violation.to_string())),
    }
}

/// Identifier used for a word: its letters joined by commas (`""` for Λ).
pub fn word_id(word: &Word) -> String {
    word.letters()
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// The Cartesian system of a word system: elements are the words and
/// `i_{m,n}` splits a word into its prefix of length `m` and suffix of
/// length `n`.
pub fn from_word_system(system: &WordSystem) -> CartesianSystem {
    let mut levels = Vec::with_capacity(system.horizon() + 1);
    // position of each word (in word order) within the sorted id list
    let mut positions: Vec<HashMap<&Word, usize>> = Vec::with_capacity(system.horizon() + 1);
    for level in system.levels() {
        let mut ids: Vec<(String, &Word)> = level.iter().map(|w| (word_id(w), w)).collect();
        ids.sort();
        positions.push(ids.iter().enumerate().map(|(i, (_, w))| (*w, i)).collect());
        levels.push(ids.into_iter().map(|(id, _)| id).collect::<Vec<_>>());
    }
    let mut tables = BTreeMap::new();
    for (m, n) in required_pairs(system.horizon()) {
        let mut table = vec![(0, 0); levels[m + n].len()];
        for (word, &x) in &positions[m + n] {
            let prefix = word.prefix(m);
            let suffix = word.suffix(n);
            table[x] = (positions[m][&prefix], positions[n][&suffix]);
        }
        tables.insert((m, n), table);
    }
    CartesianSystem { levels, tables }
}

/// The word over `X₁` (letters are indices into the sorted `X₁`) obtained by
/// splitting `x ∈ Xₙ` with left-first bracketing.
pub fn decompose(system: &CartesianSystem, n: usize, x: usize) -> Word {
    decompose_with(system, n, x, Bracketing::LeftFirst)
}

pub fn decompose_with(
    system: &CartesianSystem,
    n: usize,
    x: usize,
    bracketing: Bracketing,
) -> Word {
    let mut letters = Vec::with_capacity(n);
    split_into(system, n, x, bracketing, &mut letters);
    Word::new(letters)
}

fn split_into(
    system: &CartesianSystem,
    n: usize,
    x: usize,
    bracketing: Bracketing,
    out: &mut Vec<Letter>,
) {
    match n {
        0 => {}
        1 => out.push(x as Letter),
        _ => {
            let m = match bracketing {
                Bracketing::LeftFirst => 1,
                Bracketing::RightFirst => n - 1,
                Bracketing::Balanced => n / 2,
            };
            let (left, right) = system.inject(m, n - m, x);
            split_into(system, m, left, bracketing, out);
            split_into(system, n - m, right, bracketing, out);
        }
    }
}

/// The isomorphic word system over the alphabet `{0, …, #X₁−1}`.
pub fn standardize(system: &CartesianSystem) -> Result<WordSystem> {
    ensure_valid(system)?;
    let alphabet = system.levels.get(1).map_or(0, Vec::len);
    let levels = (0..=system.horizon())
        .map(|n| {
            (0..system.levels[n].len())
                .map(|x| decompose(system, n, x))
                .collect()
        })
        .collect();
    WordSystem::new(alphabet, levels)
}

/// `Yₙ = X_{nk}` with `j_{m,n} = i_{mk,nk}`.
pub fn thin_stride(system: &CartesianSystem, k: usize) -> Result<CartesianSystem> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "stride k must be at least 1".into(),
        ));
    }
    let horizon = system.horizon() / k;
    let levels = (0..=horizon)
        .map(|n| system.levels[n * k].clone())
        .collect();
    let tables = required_pairs(horizon)
        .map(|(m, n)| ((m, n), system.tables[&(m * k, n * k)].clone()))
        .collect();
    Ok(CartesianSystem { levels, tables })
}

/// `Y₀ = {Λ}`, `Yₙ = X_{n+k}` for `n ≥ 1`, with
/// `j_{m,n} = (P₁∘i_{m+k,n}, P₂∘i_{m,k+n})`: the `k` middle letters are
/// shared by both factors.
pub fn thin_overlap(system: &CartesianSystem, k: usize) -> Result<CartesianSystem> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "overlap k must be at least 1".into(),
        ));
    }
    let source = system.horizon();
    if source < k + 1 {
        return Err(Error::HorizonTooSmall { horizon: source, k });
    }
    let horizon = source - k;
    let mut levels = vec![system.levels[0].clone()];
    levels.extend((1..=horizon).map(|n| system.levels[n + k].clone()));
    let tables = required_pairs(horizon)
        .map(|(m, n)| {
            let table = (0..system.levels[m + n + k].len())
                .map(|x| {
                    let (left, _) = system.inject(m + k, n, x);
                    let (_, right) = system.inject(m, k + n, x);
                    (left, right)
                })
                .collect();
            ((m, n), table)
        })
        .collect();
    Ok(CartesianSystem { levels, tables })
}
