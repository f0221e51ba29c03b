//! Brute-force oracles shared by the integration tests. None of them calls
//! into the library's algorithms; they only enumerate and filter.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wordsys_core::words::Letter;
use wordsys_core::{QMatrix, Word, WordSystem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every word of length `n` over `0..d`, in lexicographic order.
pub fn all_words(d: usize, n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..d as Letter).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn contains_factor(w: &[Letter], f: &[Letter]) -> bool {
    f.len() <= w.len() && w.windows(f.len()).any(|x| x == f)
}

/// Levels of the words avoiding every excluded word as a factor.
pub fn avoiding(d: usize, excluded: &[Vec<Letter>], horizon: usize) -> Vec<BTreeSet<Vec<Letter>>> {
    (0..=horizon)
        .map(|n| {
            all_words(d, n)
                .into_iter()
                .filter(|w| excluded.iter().all(|f| !contains_factor(w, f)))
                .collect()
        })
        .collect()
}

pub fn levels_of(system: &WordSystem) -> Vec<BTreeSet<Vec<Letter>>> {
    system
        .levels()
        .iter()
        .map(|level| level.iter().map(|w| w.letters().to_vec()).collect())
        .collect()
}

/// Closure under factors, checked on every factor of every word.
pub fn is_factorial(levels: &[BTreeSet<Vec<Letter>>]) -> bool {
    levels[0].len() == 1
        && levels.iter().all(|level| {
            level.iter().all(|w| {
                (0..=w.len()).all(|i| (i..=w.len()).all(|j| levels[j - i].contains(&w[i..j])))
            })
        })
}

/// Minimal absent words up to the horizon: absent, with both maximal proper
/// factors present.
pub fn minimal_absent(d: usize, levels: &[BTreeSet<Vec<Letter>>]) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    for n in 1..levels.len() {
        for w in all_words(d, n) {
            if !levels[n].contains(&w)
                && levels[n - 1].contains(&w[1..])
                && levels[n - 1].contains(&w[..n - 1])
            {
                out.insert(w);
            }
        }
    }
    out
}

/// Number of vertex sequences of length `n` following edges.
pub fn walks(d: usize, edges: &BTreeSet<(usize, usize)>, n: usize) -> u64 {
    all_words(d, n)
        .iter()
        .filter(|w| {
            w.windows(2)
                .all(|p| edges.contains(&(p[0] as usize, p[1] as usize)))
        })
        .count() as u64
}

pub fn biguints(values: &[u64]) -> Vec<BigUint> {
    values.iter().map(|&v| BigUint::from(v)).collect()
}

pub fn q(p: i64, r: i64) -> BigRational {
    BigRational::new(p.into(), r.into())
}

/// A random rational orthogonal matrix: a signed permutation, composed with
/// the rotation by (3/5, 4/5) on the first two coordinates when possible.
pub fn random_orthogonal<R: Rng>(rng: &mut R, size: usize) -> QMatrix {
    let mut perm: Vec<usize> = (0..size).collect();
    for i in (1..size).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut dense = vec![vec![BigRational::zero(); size]; size];
    for (i, &j) in perm.iter().enumerate() {
        dense[i][j] = if rng.gen_bool(0.5) {
            BigRational::one()
        } else {
            -BigRational::one()
        };
    }
    let signed = QMatrix::from_dense(dense);
    if size >= 2 && rng.gen_bool(0.7) {
        let mut rot = vec![vec![BigRational::zero(); size]; size];
        for (i, row) in rot.iter_mut().enumerate() {
            row[i] = BigRational::one();
        }
        rot[0][0] = q(3, 5);
        rot[0][1] = q(-4, 5);
        rot[1][0] = q(4, 5);
        rot[1][1] = q(3, 5);
        &QMatrix::from_dense(rot) * &signed
    } else {
        signed
    }
}

pub fn word(letters: &[Letter]) -> Word {
    Word::new(letters.to_vec())
}
