//! Which sequences `d₁, d₂, …` are cardinality sequences of word systems?
//!
//! - [`check_necessary`] lists failures of known necessary conditions;
//! - [`construct_nested`] builds a word system from nested cubes when the
//!   integer-root condition `⌈ᵐ⁺¹√d_{m+1}⌉ ≤ ⌊ᵐ√d_m⌋` holds;
//! - [`search_prefix`] decides a finite prefix exhaustively. Realizing every
//!   finite prefix is enough to realize the whole sequence, so a finite
//!   search is the right question to ask.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::words::{extension_pool, Letter, Level, Word, WordSystem};

/// Target cardinalities `d₁, …, d_k`; `d₀ = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TargetSequence(Vec<u64>);

impl TargetSequence {
    pub fn new(values: Vec<u64>) -> Self {
        TargetSequence(values)
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `d_n` for `1 ≤ n ≤ k`.
    pub fn get(&self, n: usize) -> u64 {
        self.0[n - 1]
    }
}

impl From<Vec<u64>> for TargetSequence {
    fn from(values: Vec<u64>) -> Self {
        TargetSequence(values)
    }
}

impl FromStr for TargetSequence {
    type Err = std::num::ParseIntError;

    /// Comma-separated `d₁,…,d_k`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(TargetSequence::default());
        }
        s.split(',')
            .map(|part| part.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map(TargetSequence)
    }
}

impl fmt::Display for TargetSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

fn pow_saturating(base: u64, exponent: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exponent {
        acc = acc.saturating_mul(base as u128);
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// Largest `r` with `rⁿ ≤ x`, by integer bisection.
pub fn floor_nth_root(x: u64, n: u32) -> u64 {
    assert!(n >= 1, "root index must be positive");
    if n == 1 {
        return x;
    }
    let (mut lo, mut hi) = (0u64, x.min(1 << 32));
    // invariant: lo^n <= x, and every r > hi has r^n > x
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if pow_saturating(mid, n) <= x as u128 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Smallest `r` with `rⁿ ≥ x`.
pub fn ceil_nth_root(x: u64, n: u32) -> u64 {
    let r = floor_nth_root(x, n);
    if pow_saturating(r, n) == x as u128 {
        r
    } else {
        r + 1
    }
}

/// A failed necessary condition, with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NecessaryViolation {
    /// `d_{m+n+j} > d_{m+j}·d_{n+j}` (reported for `m ≤ n`).
    Submultiplicativity { m: usize, n: usize, j: usize },
    /// `d_zero = 0` but `d_later > 0`.
    ZeroPropagation { zero: usize, later: usize },
    /// `d_j ≤ 2` but `d_{j+1} > 2`, for `j ≥ 2`.
    TwoBound { j: usize },
}

impl fmt::Display for NecessaryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NecessaryViolation::Submultiplicativity { m, n, j } => write!(
                f,
                "d_{} > d_{}·d_{} (m={m}, n={n}, j={j})",
                m + n + j,
                m + j,
                n + j
            ),
            NecessaryViolation::ZeroPropagation { zero, later } => {
                write!(f, "d_{zero} = 0 but d_{later} > 0")
            }
            NecessaryViolation::TwoBound { j } => {
                write!(f, "d_{j} <= 2 forces d_{} <= 2", j + 1)
            }
        }
    }
}

impl NecessaryViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            NecessaryViolation::Submultiplicativity { .. } => "submultiplicativity",
            NecessaryViolation::ZeroPropagation { .. } => "zero_propagation",
            NecessaryViolation::TwoBound { .. } => "two_bound",
        }
    }
}

/// Necessary-condition failures for `values[i] = d_{i+1}`.
pub(crate) fn necessary_violations(values: &[BigUint]) -> Vec<NecessaryViolation> {
    let k = values.len();
    let d = |i: usize| &values[i - 1];
    let two = BigUint::from(2u8);
    let mut found = Vec::new();
    for total in 2..=k {
        for j in 0..total - 1 {
            let rest = total - j;
            for m in 1..=rest / 2 {
                let n = rest - m;
                if n == 0 {
                    continue;
                }
                if *d(total) > d(m + j) * d(n + j) {
                    found.push(NecessaryViolation::Submultiplicativity { m, n, j });
                }
            }
        }
    }
    if let Some(zero) = (1..=k).find(|&i| d(i).is_zero()) {
        found.extend(
            (zero + 1..=k)
                .filter(|&later| !d(later).is_zero())
                .map(|later| NecessaryViolation::ZeroPropagation { zero, later }),
        );
    }
    for j in 2..k {
        if *d(j) <= two && *d(j + 1) > two {
            found.push(NecessaryViolation::TwoBound { j });
        }
    }
    found
}

/// Every failure of the known necessary conditions:
///
/// - `d_{m+n+j} ≤ d_{m+j}·d_{n+j}` for `m, n ≥ 1`, `j ≥ 0`;
/// - `dₙ = 0 ⇒ d_m = 0` for `m > n`;
/// - `d_j ≤ 2 ⇒ d_{j+1} ≤ 2` for `j ≥ 2`.
///
/// An empty list means no known obstruction, not realizability.
pub fn check_necessary(seq: &TargetSequence) -> Vec<NecessaryViolation> {
    let values: Vec<BigUint> = seq.values().iter().map(|&v| BigUint::from(v)).collect();
    necessary_violations(&values)
}

/// The word system with `X₁ = {0, …, d₁−1}` and, for `n ≥ 2`, `Xₙ` the cube
/// `{0, …, ⌊ⁿ√dₙ⌋−1}ⁿ` topped up with the lexicographically smallest words
/// of `{0, …, ⌈ⁿ√dₙ⌉−1}ⁿ` to exactly `dₙ` words.
///
/// Requires `⌈ᵐ⁺¹√d_{m+1}⌉ ≤ ⌊ᵐ√d_m⌋` for `1 ≤ m < k`; the first failing `m`
/// is reported as [`Error::PreconditionViolated`].
pub fn construct_nested(seq: &TargetSequence) -> Result<WordSystem> {
    let k = seq.len();
    for m in 1..k {
        if ceil_nth_root(seq.get(m + 1), m as u32 + 1) > floor_nth_root(seq.get(m), m as u32) {
            return Err(Error::PreconditionViolated(m));
        }
    }
    let alphabet = match seq.values().first() {
        Some(&d1) => {
            usize::try_from(d1).map_err(|_| Error::InvalidParameter("alphabet too large".into()))?
        }
        None => 0,
    };
    let mut levels: Vec<Level> = vec![Level::from([Word::empty()])];
    for n in 1..=k {
        let target = seq.get(n);
        let lo = floor_nth_root(target, n as u32) as usize;
        let hi = ceil_nth_root(target, n as u32) as usize;
        let mut level: Level = Word::all(lo, n).collect();
        let fillers = Word::all(hi, n)
            .filter(|w| w.letters().iter().any(|&a| a as usize >= lo))
            .take(target as usize - level.len());
        level.extend(fillers);
        levels.push(level);
    }
    WordSystem::new(alphabet, levels)
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Largest alphabet for which level-2 candidates are reduced modulo letter
/// permutations.
const SYMMETRY_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A word system realizing the whole prefix, re-validated.
    Witness(WordSystem),
    /// No word system realizes the prefix. `violations` is nonempty when a
    /// necessary condition already rules it out; otherwise the search was
    /// exhaustive.
    Unrealizable { violations: Vec<NecessaryViolation> },
    /// The node budget ran out. `prefix` realizes `d₁..d_{realized}`, the
    /// deepest prefix reached.
    BudgetExceeded { realized: usize, prefix: WordSystem },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Candidate levels examined.
    pub nodes: u64,
}

struct PrefixSearch<'a> {
    targets: &'a [u64],
    alphabet: usize,
    budget: u64,
    nodes: u64,
    levels: Vec<Level>,
    deepest: Vec<Level>,
    permutations: Vec<Vec<Letter>>,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl PrefixSearch<'_> {
    fn run(&mut self) -> Step {
        let n = self.levels.len();
        if n > self.targets.len() {
            return Step::Found;
        }
        let need = self.targets[n - 1] as usize;
        let pool: Vec<Word> = extension_pool(self.alphabet, &self.levels[n - 1])
            .into_iter()
            .collect();
        if pool.len() < need {
            return Step::Exhausted;
        }
        for combo in (0..pool.len()).combinations(need) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::OutOfBudget;
            }
            let level: Level = combo.iter().map(|&i| pool[i].clone()).collect();
            if n == 2 && !self.is_orbit_minimum(&level) {
                continue;
            }
            self.levels.push(level);
            if self.levels.len() > self.deepest.len() {
                self.deepest = self.levels.clone();
            }
            match self.run() {
                Step::Exhausted => {
                    self.levels.pop();
                }
                other => return other,
            }
        }
        Step::Exhausted
    }

    /// Whether no letter permutation maps `level` to a lexicographically
    /// smaller set. Only applied at level 2, where `X₁` is the whole
    /// alphabet and every permutation is an automorphism of the search.
    fn is_orbit_minimum(&self, level: &Level) -> bool {
        let current: Vec<&Word> = level.iter().collect();
        self.permutations.iter().all(|perm| {
            let image: Level = level
                .iter()
                .map(|w| w.letters().iter().map(|&a| perm[a as usize]).collect())
                .collect();
            image.iter().collect::<Vec<_>>() >= current
        })
    }
}

/// Exhaustive depth-first search for a word system with `#Xᵢ = dᵢ`,
/// `i = 1..=k`, over the alphabet `{0, …, d₁−1}`.
///
/// Level `n` is chosen as a `dₙ`-subset of `X_{n−1}A ∩ AX_{n−1}`, which is
/// exactly the set of words whose proper subwords all survive, in
/// lexicographic subset order. Level 2 is taken up to letter permutations.
/// Sequences failing [`check_necessary`] are rejected without searching.
pub fn search_prefix(seq: &TargetSequence, budget: u64) -> SearchReport {
    let violations = check_necessary(seq);
    if !violations.is_empty() {
        return SearchReport {
            outcome: SearchOutcome::Unrealizable { violations },
            nodes: 0,
        };
    }
    let base: Level = Level::from([Word::empty()]);
    if seq.is_empty() {
        return SearchReport {
            outcome: SearchOutcome::Witness(WordSystem::new_unchecked(0, vec![base])),
            nodes: 0,
        };
    }
    let alphabet = seq.get(1);
    // the level-2 pool alone has d₁² words
    if alphabet.saturating_mul(alphabet) > budget {
        return SearchReport {
            outcome: SearchOutcome::BudgetExceeded {
                realized: 0,
                prefix: WordSystem::new_unchecked(0, vec![base]),
            },
            nodes: 0,
        };
    }
    let alphabet = alphabet as usize;
    let first: Level = (0..alphabet as Letter).map(Word::letter).collect();
    let permutations = if alphabet <= SYMMETRY_LIMIT {
        (0..alphabet as Letter).permutations(alphabet).collect()
    } else {
        Vec::new()
    };
    let mut search = PrefixSearch {
        targets: seq.values(),
        alphabet,
        budget,
        nodes: 0,
        levels: vec![base, first],
        deepest: Vec::new(),
        permutations,
    };
    search.deepest = search.levels.clone();
    let step = search.run();
    let outcome = match step {
        Step::Found => {
            let witness =
                WordSystem::new(alphabet, search.levels).expect("search only builds closed levels");
            debug_assert_eq!(&witness.counts()[1..], seq.values());
            SearchOutcome::Witness(witness)
        }
        Step::Exhausted => SearchOutcome::Unrealizable {
            violations: Vec::new(),
        },
        Step::OutOfBudget => {
            let realized = search.deepest.len() - 1;
            SearchOutcome::BudgetExceeded {
                realized,
                prefix: WordSystem::new_unchecked(alphabet, search.deepest),
            }
        }
    };
    SearchReport {
        outcome,
        nodes: search.nodes,
    }
}
