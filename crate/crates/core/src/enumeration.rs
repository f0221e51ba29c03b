//! Counting words that avoid a finite set of excluded words.
//!
//! The avoidance automaton is the trie of the excluded words with failure
//! links (the Aho–Corasick construction). Its live states are the proper
//! prefixes of excluded words; a transition that would complete an excluded
//! word goes to `DEAD`. Counting accepted words of each length is a dynamic
//! program over state occupancies, and the live-state transfer matrix gives a
//! linear recurrence for the whole series.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::{reduce_exclusions, ExclusionSet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoidanceAutomaton {
    alphabet: usize,
    /// `transitions[state][letter]`, `None` meaning `DEAD`. State 0 is the start.
    transitions: Vec<Vec<Option<usize>>>,
    /// The prefix each live state stands for.
    labels: Vec<Word>,
}

impl AvoidanceAutomaton {
    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Number of live states.
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn next(&self, state: usize, letter: Letter) -> Option<usize> {
        self.transitions[state][letter as usize]
    }

    pub fn label(&self, state: usize) -> &Word {
        &self.labels[state]
    }

    /// Whether the word avoids every excluded word.
    pub fn accepts(&self, word: &Word) -> bool {
        word.letters()
            .iter()
            .try_fold(self.start(), |state, &a| self.next(state, a))
            .is_some()
    }

    /// `T[i][j]`: number of letters leading from live state `i` to `j`.
    pub fn transfer_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.state_count();
        let mut t = vec![vec![0u64; n]; n];
        for (i, row) in self.transitions.iter().enumerate() {
            for target in row.iter().flatten() {
                t[i][*target] += 1;
            }
        }
        t
    }
}

/// Builds the avoidance automaton; the exclusion set is reduced first.
pub fn build_automaton(alphabet: usize, excluded: &ExclusionSet) -> Result<AvoidanceAutomaton> {
    for word in excluded.words() {
        word.check_alphabet(alphabet)?;
    }
    let reduced = reduce_exclusions(excluded);

    // trie
    let mut children: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet]];
    let mut terminal = vec![false];
    let mut labels = vec![Word::empty()];
    for word in reduced.words() {
        let mut node = 0;
        for &a in word.letters() {
            node = match children[node][a as usize] {
                Some(child) => child,
                None => {
                    children.push(vec![None; alphabet]);
                    terminal.push(false);
                    labels.push(labels[node].push(a));
                    let child = children.len() - 1;
                    children[node][a as usize] = Some(child);
                    child
                }
            };
        }
        terminal[node] = true;
    }

    // failure links in breadth-first order; goto[node][a] is the longest
    // trie node that is a suffix of label(node)·a
    let nodes = children.len();
    let mut goto = vec![vec![0usize; alphabet]; nodes];
    let mut dead = terminal.clone();
    let mut fail = vec![0usize; nodes];
    let mut queue = VecDeque::new();
    for a in 0..alphabet {
        match children[0][a] {
            Some(child) => {
                goto[0][a] = child;
                queue.push_back(child);
            }
            None => goto[0][a] = 0,
        }
    }
    while let Some(node) = queue.pop_front() {
        dead[node] = dead[node] || dead[fail[node]];
        for a in 0..alphabet {
            match children[node][a] {
                Some(child) => {
                    fail[child] = goto[fail[node]][a];
                    goto[node][a] = child;
                    queue.push_back(child);
                }
                None => goto[node][a] = goto[fail[node]][a],
            }
        }
    }

    // renumber live nodes; node 0 is live unless Λ were excluded, which
    // ExclusionSet forbids
    let mut live_index = vec![None; nodes];
    let mut live_labels = Vec::new();
    for node in 0..nodes {
        if !dead[node] {
            live_index[node] = Some(live_labels.len());
            live_labels.push(labels[node].clone());
        }
    }
    let transitions = (0..nodes)
        .filter(|&node| !dead[node])
        .map(|node| (0..alphabet).map(|a| live_index[goto[node][a]]).collect())
        .collect();
    Ok(AvoidanceAutomaton {
        alphabet,
        transitions,
        labels: live_labels,
    })
}

/// Coefficients `c₀, …, c_N` with `cₙ = #Xₙ(R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexitySeries {
    counts: Vec<BigUint>,
}

impl ComplexitySeries {
    pub fn new(counts: Vec<BigUint>) -> Self {
        ComplexitySeries { counts }
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Counts as machine integers, if they all fit.
    pub fn to_u64(&self) -> Option<Vec<u64>> {
        self.counts.iter().map(ToPrimitive::to_u64).collect()
    }

    /// Violations of `c₀ = 1`, zero propagation and
    /// `c_{m+n+k} ≤ c_{m+k}·c_{n+k}` within the horizon.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut found = Vec::new();
        if self.counts.first().is_none_or(|c| *c != BigUint::from(1u8)) {
            found.push("c_0 must be 1".to_string());
        }
        found.extend(
            crate::realizability::necessary_violations(&self.counts[1..])
                .into_iter()
                .map(|v| v.to_string()),
        );
        found
    }
}

/// `#Xₙ(R)` for `n = 0..=horizon` by dynamic programming over the automaton.
pub fn series(
    alphabet: usize,
    excluded: &ExclusionSet,
    horizon: usize,
) -> Result<ComplexitySeries> {
    let automaton = build_automaton(alphabet, excluded)?;
    Ok(series_of(&automaton, horizon))
}

pub fn series_of(automaton: &AvoidanceAutomaton, horizon: usize) -> ComplexitySeries {
    let states = automaton.state_count();
    let mut occupancy = vec![BigUint::zero(); states];
    occupancy[automaton.start()] = BigUint::from(1u8);
    let mut counts = Vec::with_capacity(horizon + 1);
    counts.push(occupancy.iter().sum());
    for _ in 0..horizon {
        let mut next = vec![BigUint::zero(); states];
        for (state, count) in occupancy.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for target in automaton.transitions[state].iter().flatten() {
                next[*target] += count;
            }
        }
        occupancy = next;
        counts.push(occupancy.iter().sum());
    }
    ComplexitySeries { counts }
}

/// `cₙ = Σᵢ aᵢ·c_{n−i}` for `i = 1..=order`, valid for `n ≥ order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub coefficients: Vec<BigInt>,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Extends `initial` (at least `order` terms) to `len` terms.
    pub fn extend(&self, initial: &[BigInt], len: usize) -> Vec<BigInt> {
        let mut terms = initial.to_vec();
        while terms.len() < len {
            let n = terms.len();
            let next = self
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, a)| a * &terms[n - 1 - i])
                .sum();
            terms.push(next);
        }
        terms
    }

    /// Characteristic polynomial coefficients, highest degree first:
    /// `x^s − a₁x^{s−1} − … − a_s`.
    pub fn characteristic_polynomial(&self) -> Vec<BigInt> {
        std::iter::once(BigInt::from(1))
            .chain(self.coefficients.iter().map(|a| -a))
            .collect()
    }
}

/// Recurrence from the characteristic polynomial of the live-state transfer
/// matrix (Faddeev–LeVerrier over the integers; every division is exact).
pub fn linear_recurrence(alphabet: usize, excluded: &ExclusionSet) -> Result<Recurrence> {
    let automaton = build_automaton(alphabet, excluded)?;
    Ok(recurrence_of(&automaton))
}

pub fn recurrence_of(automaton: &AvoidanceAutomaton) -> Recurrence {
    let t: Vec<Vec<BigInt>> = automaton
        .transfer_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let s = t.len();
    // char poly x^s + p[1] x^{s-1} + … + p[s]
    let mut p = vec![BigInt::zero(); s + 1];
    p[0] = BigInt::from(1);
    let mut m = vec![vec![BigInt::zero(); s]; s];
    for k in 1..=s {
        // M_k = T·M_{k−1} + p[k−1]·I
        let mut next = mat_mul(&t, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &p[k - 1];
        }
        m = next;
        let tm = mat_mul(&t, &m);
        let trace: BigInt = (0..s).map(|i| tm[i][i].clone()).sum();
        p[k] = -trace / BigInt::from(k);
    }
    Recurrence {
        coefficients: p[1..].iter().map(|c| -c).collect(),
    }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Approximate exponential growth rate of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEstimate {
    /// Estimated dominant eigenvalue of the transfer matrix (approximate).
    pub value: f64,
    pub iterations: usize,
    /// Whether successive estimates agreed to a relative 10⁻⁹.
    pub converged: bool,
}

pub const GROWTH_TOLERANCE: f64 = 1e-9;
const GROWTH_MAX_ITERATIONS: usize = 200_000;

/// Power iteration on `T + I` started from the all-ones vector; the shift
/// keeps the Perron root strictly dominant for periodic `T`.
///
/// This is floating point and therefore approximate.
pub fn growth_rate(automaton: &AvoidanceAutomaton) -> GrowthEstimate {
    let t = automaton.transfer_matrix();
    let n = t.len();
    let mut v = vec![1.0f64; n];
    let mut previous = f64::NAN;
    for iteration in 1..=GROWTH_MAX_ITERATIONS {
        let mut w: Vec<f64> = (0..n)
            .map(|i| v[i] + (0..n).map(|j| t[i][j] as f64 * v[j]).sum::<f64>())
            .collect();
        let norm_v: f64 = v.iter().sum();
        let norm_w: f64 = w.iter().sum();
        let estimate = norm_w / norm_v - 1.0;
        for x in &mut w {
            *x /= norm_w;
        }
        v = w;
        let scale = estimate.abs().max(1.0);
        if (estimate - previous).abs() <= GROWTH_TOLERANCE * scale {
            return GrowthEstimate {
                value: estimate,
                iterations: iteration,
                converged: true,
            };
        }
        previous = estimate;
    }
    GrowthEstimate {
        value: previous,
        iterations: GROWTH_MAX_ITERATIONS,
        converged: false,
    }
}

/// Entry `i` is 1 iff the word agrees with itself shifted right by `i`.
pub fn autocorrelation(word: &Word) -> Result<Vec<u8>> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let w = word.letters();
    Ok((0..w.len())
        .map(|i| u8::from(w[i..] == w[..w.len() - i]))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceReport {
    pub r_series: Vec<BigUint>,
    pub s_series: Vec<BigUint>,
    /// `#Xₙ({r}) ≥ #Xₙ({s})` for every `n ≤ N`.
    pub r_dominates: bool,
    /// `#Xₙ({s}) ≥ #Xₙ({r})` for every `n ≤ N`.
    pub s_dominates: bool,
    pub r_autocorrelation: Vec<u8>,
    pub s_autocorrelation: Vec<u8>,
    /// Componentwise `autocorr(r) ≤ autocorr(s)`; reported, not relied on.
    pub r_autocorrelation_le_s: bool,
    pub s_autocorrelation_le_r: bool,
}

/// Compares the systems excluding a single word `r` or `s` of equal length.
pub fn dominance_compare(
    alphabet: usize,
    r: &Word,
    s: &Word,
    horizon: usize,
) -> Result<DominanceReport> {
    if r.len() != s.len() {
        return Err(Error::LengthMismatch {
            left: r.len(),
            right: s.len(),
        });
    }
    let r_autocorrelation = autocorrelation(r)?;
    let s_autocorrelation = autocorrelation(s)?;
    let r_series = series(
        alphabet,
        &ExclusionSet::new(alphabet, [r.clone()])?,
        horizon,
    )?
    .counts;
    let s_series = series(
        alphabet,
        &ExclusionSet::new(alphabet, [s.clone()])?,
        horizon,
    )?
    .counts;
    let pairs = || r_series.iter().zip(&s_series);
    let le = |a: &[u8], b: &[u8]| a.iter().zip(b).all(|(x, y)| x <= y);
    Ok(DominanceReport {
        r_dominates: pairs().all(|(x, y)| x >= y),
        s_dominates: pairs().all(|(x, y)| y >= x),
        r_autocorrelation_le_s: le(&r_autocorrelation, &s_autocorrelation),
        s_autocorrelation_le_r: le(&s_autocorrelation, &r_autocorrelation),
        r_series,
        s_series,
        r_autocorrelation,
        s_autocorrelation,
    })
}
