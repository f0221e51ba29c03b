mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use wordsys_core::cartesian::{
    self, from_word_system as cartesian_of, standardize, thin_overlap, thin_stride,
    validate_cartesian,
};
use wordsys_core::enumeration::{build_automaton, recurrence_of, series, series_of};
use wordsys_core::graph::{graph_system, path_count, Graph};
use wordsys_core::realizability::{
    check_necessary, construct_nested, search_prefix, SearchOutcome,
};
use wordsys_core::sample::{random_graph, random_reduced_exclusions, random_word_system};
use wordsys_core::subproduct::{
    self, dims, extract_word_system, isometries, standard_form, symmetric_family, Nesting,
};
use wordsys_core::words::{antidictionary, from_exclusions, reduce_exclusions};
use wordsys_core::{AbstractSubproduct, ExclusionSet, QMatrix, TargetSequence, WordSystem};

use common::*;

fn system(seed: u64, d: usize, horizon: usize, density: f64) -> WordSystem {
    random_word_system(&mut rng(seed), d, horizon, density)
}

fn exclusion_letters(e: &ExclusionSet) -> Vec<Vec<u32>> {
    e.words().iter().map(|w| w.letters().to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_systems_are_factorial(seed: u64, d in 1usize..=3, n in 0usize..=5, density in 0.2f64..1.0) {
        let x = system(seed, d, n, density);
        prop_assert!(is_factorial(&levels_of(&x)));
    }

    #[test]
    fn antidictionary_matches_minimal_absent_words(seed: u64, d in 1usize..=3, n in 0usize..=5, density in 0.2f64..1.0) {
        let x = system(seed, d, n, density);
        let anti = antidictionary(&x);
        let expected = minimal_absent(d, &levels_of(&x));
        let got: BTreeSet<_> = exclusion_letters(&anti).into_iter().collect();
        prop_assert_eq!(got, expected);
        prop_assert!(anti.is_reduced());
        prop_assert_eq!(from_exclusions(d, &anti, n).unwrap(), x);
    }

    #[test]
    fn from_exclusions_matches_filter(seed: u64, d in 1usize..=3, total in 0usize..=8, n in 0usize..=6) {
        let e = random_reduced_exclusions(&mut rng(seed), d, total);
        let x = from_exclusions(d, &e, n).unwrap();
        prop_assert_eq!(levels_of(&x), avoiding(d, &exclusion_letters(&e), n));
    }

    #[test]
    fn reducing_keeps_the_system(seed: u64, d in 1usize..=3, count in 0usize..6, n in 0usize..=5) {
        let e = wordsys_core::sample::random_exclusions(&mut rng(seed), d, count, 4);
        let r = reduce_exclusions(&e);
        prop_assert!(r.is_reduced());
        prop_assert!(r.words().is_subset(e.words()));
        prop_assert_eq!(from_exclusions(d, &r, n).unwrap(), from_exclusions(d, &e, n).unwrap());
    }

    #[test]
    fn union_of_exclusions_intersects_levels(seed: u64, d in 1usize..=3, n in 0usize..=5) {
        let mut g = rng(seed);
        let r = random_reduced_exclusions(&mut g, d, 6);
        let s = random_reduced_exclusions(&mut g, d, 6);
        let both = from_exclusions(d, &r.union(&s), n).unwrap();
        let xr = from_exclusions(d, &r, n).unwrap();
        let xs = from_exclusions(d, &s, n).unwrap();
        for k in 0..=n {
            let meet: BTreeSet<_> = xr.level(k).intersection(xs.level(k)).cloned().collect();
            prop_assert_eq!(both.level(k), &meet);
        }
    }

    #[test]
    fn graph_systems_exclude_non_edges(seed: u64, d in 1usize..=4, density in 0.0f64..1.0, n in 0usize..=5) {
        let g = random_graph(&mut rng(seed), d, density);
        let x = graph_system(&g, n);
        prop_assert_eq!(&x, &from_exclusions(d, &g.non_edges(), n).unwrap());
        for k in 0..=n {
            let expected = walks(d, g.edges(), k);
            prop_assert_eq!(x.level(k).len() as u64, expected);
            prop_assert_eq!(path_count(&g, k), BigUint::from(expected));
        }
    }

    #[test]
    fn series_matches_enumeration(seed: u64, d in 1usize..=3, total in 0usize..=8, n in 0usize..=8) {
        let e = random_reduced_exclusions(&mut rng(seed), d, total);
        let s = series(d, &e, n).unwrap();
        let x = from_exclusions(d, &e, n).unwrap();
        prop_assert_eq!(s.counts(), &biguints(&x.counts())[..]);
    }

    #[test]
    fn recurrence_extends_the_series(seed: u64, d in 1usize..=3, total in 0usize..=8) {
        let e = random_reduced_exclusions(&mut rng(seed), d, total);
        let automaton = build_automaton(d, &e).unwrap();
        let rec = recurrence_of(&automaton);
        let len = 3 * automaton.state_count().max(1) + 1;
        let counts: Vec<BigInt> = series_of(&automaton, len - 1)
            .counts()
            .iter()
            .map(|c| BigInt::from(c.clone()))
            .collect();
        let extended = rec.extend(&counts[..rec.order()], len);
        prop_assert_eq!(extended, counts);
    }

    #[test]
    fn thinning_preserves_cartesian_structure(seed: u64, d in 1usize..=3, n in 2usize..=6, k in 1usize..=2, density in 0.3f64..1.0) {
        let x = system(seed, d, n, density);
        let c = cartesian_of(&x);
        let stride = thin_stride(&c, k).unwrap();
        prop_assert_eq!(validate_cartesian(&stride), None);
        for m in 0..=stride.horizon() {
            prop_assert_eq!(stride.level(m).len(), x.level(m * k).len());
        }
        if n > k {
            let overlap = thin_overlap(&c, k).unwrap();
            prop_assert_eq!(validate_cartesian(&overlap), None);
            for m in 1..=overlap.horizon() {
                prop_assert_eq!(overlap.level(m).len(), x.level(m + k).len());
            }
        }
    }

    #[test]
    fn overlap_standardization_is_window_recoding(seed: u64, d in 1usize..=3, n in 2usize..=6, k in 1usize..=2, density in 0.3f64..1.0) {
        prop_assume!(n > k);
        let x = system(seed, d, n, density);
        let y = standardize(&thin_overlap(&cartesian_of(&x), k).unwrap()).unwrap();
        prop_assert_eq!(levels_of(&y), window_oracle(&x, k));
    }

    #[test]
    fn standardization_inverts_word_ids(seed: u64, d in 1usize..=3, n in 0usize..=5, density in 0.2f64..1.0) {
        let x = system(seed, d, n, density);
        let c = cartesian_of(&x);
        prop_assert_eq!(validate_cartesian(&c), None);
        // decompose returns positions in X₁, which are letters only when X₁ = A
        prop_assume!(n >= 1 && c.level(1).len() == d);
        for b in [cartesian::Bracketing::LeftFirst, cartesian::Bracketing::RightFirst, cartesian::Bracketing::Balanced] {
            for m in 0..=n {
                for (i, w) in x.level(m).iter().enumerate() {
                    prop_assert_eq!(&cartesian::decompose_with(&c, m, i, b), w);
                }
            }
        }
    }

    #[test]
    fn random_systems_pass_necessary_conditions(seed: u64, d in 1usize..=3, n in 1usize..=6, density in 0.2f64..1.0) {
        let x = system(seed, d, n, density);
        let counts = x.counts();
        let target = TargetSequence::new(counts[1..].to_vec());
        prop_assert_eq!(check_necessary(&target), vec![]);
    }
}

/// Level `m` holds the `(k+1)`-window recodings of the words of `X_{m+k}`;
/// window letters are ranked lexicographically within `X_{k+1}`.
fn window_oracle(x: &WordSystem, k: usize) -> Vec<BTreeSet<Vec<u32>>> {
    let windows: Vec<Vec<u32>> = levels_of(x)[k + 1].iter().cloned().collect();
    let rank: BTreeMap<&[u32], u32> = windows
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i as u32))
        .collect();
    let mut out = vec![BTreeSet::from([Vec::new()])];
    for m in 1..=x.horizon() - k {
        out.push(
            x.level(m + k)
                .iter()
                .map(|w| w.letters().windows(k + 1).map(|f| rank[f]).collect())
                .collect(),
        );
    }
    out
}

/// `W'_{m,n} = U_{m+n}·W_{m,n}·(U_m ⊗ U_n)ᵀ` with `U₁ = 1`, so the standard
/// form is unchanged.
fn twisted(x: &WordSystem, seed: u64) -> AbstractSubproduct {
    let plain = AbstractSubproduct::from_word_system(x);
    let mut g = rng(seed);
    let us: Vec<QMatrix> = (0..=x.horizon())
        .map(|n| {
            let size = plain.fiber_dim(n);
            if n <= 1 {
                QMatrix::identity(size)
            } else {
                random_orthogonal(&mut g, size)
            }
        })
        .collect();
    let products = plain
        .products()
        .iter()
        .map(|(&(m, n), w)| {
            let right = us[m].kron(&us[n]).transpose();
            ((m, n), &(&us[m + n] * w) * &right)
        })
        .collect();
    AbstractSubproduct::new(plain.fiber_dims().to_vec(), products).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projector_bridge_roundtrip(seed: u64, d in 1usize..=3, n in 0usize..=4, density in 0.3f64..1.0) {
        let x = system(seed, d, n, density);
        let family = subproduct::from_word_system(&x).unwrap();
        prop_assert_eq!(subproduct::validate_projector_family(&family), None);
        prop_assert_eq!(dims(&family), x.counts());
        prop_assert_eq!(extract_word_system(&family).unwrap(), x);
    }

    #[test]
    fn standard_form_ignores_fiber_bases(seed: u64, d in 1usize..=3, n in 1usize..=4, density in 0.4f64..1.0) {
        let x = system(seed, d, n, density);
        prop_assume!(x.level(1).len() == d);
        let abstract_system = twisted(&x, seed ^ 0x9e37);
        abstract_system.validate().unwrap();
        let expected = subproduct::from_word_system(&x).unwrap();
        prop_assert_eq!(&standard_form(&abstract_system).unwrap(), &expected);
        let left: Vec<QMatrix> = isometries(&abstract_system, Nesting::Left)
            .unwrap()
            .iter()
            .map(|j| j * &j.transpose())
            .collect();
        prop_assert_eq!(left, expected.projectors().to_vec());
    }
}

#[test]
fn symmetric_extraction_is_weakly_increasing() {
    for d in 1..=3 {
        for n in 0..=4 {
            let x = extract_word_system(&symmetric_family(d, n).unwrap()).unwrap();
            let expected: Vec<BTreeSet<Vec<u32>>> = (0..=n)
                .map(|m| {
                    all_words(d, m)
                        .into_iter()
                        .filter(|w| w.windows(2).all(|p| p[0] <= p[1]))
                        .collect()
                })
                .collect();
            assert_eq!(levels_of(&x), expected, "d={d} n={n}");
        }
    }
}

fn floor_root(x: u64, n: u32) -> u64 {
    (0..=x)
        .take_while(|r| r.checked_pow(n).is_some_and(|p| p <= x))
        .last()
        .unwrap_or(0)
}

fn ceil_root(x: u64, n: u32) -> u64 {
    (0..=x)
        .find(|r| r.checked_pow(n).is_none_or(|p| p >= x))
        .unwrap()
}

#[test]
fn nested_construction_matches_its_precondition() {
    let mut g = rng(7);
    for _ in 0..300 {
        use rand::Rng;
        let k = g.gen_range(1..=3);
        let values: Vec<u64> = (0..k).map(|_| g.gen_range(0..=30)).collect();
        let target = TargetSequence::new(values.clone());
        let first_failure = (1..k)
            .find(|&m| ceil_root(values[m], m as u32 + 1) > floor_root(values[m - 1], m as u32));
        match construct_nested(&target) {
            Ok(x) => {
                assert_eq!(first_failure, None, "{values:?}");
                assert!(is_factorial(&levels_of(&x)));
                assert_eq!(&x.counts()[1..], &values[..]);
            }
            Err(wordsys_core::Error::PreconditionViolated(m)) => {
                assert_eq!(first_failure, Some(m), "{values:?}");
            }
            Err(e) => panic!("{values:?}: {e}"),
        }
    }
}

#[test]
fn search_realizes_counts_of_random_systems() {
    for seed in 0..40 {
        let x = system(seed, 2 + (seed as usize % 2), 3, 0.7);
        let target = TargetSequence::new(x.counts()[1..].to_vec());
        let report = search_prefix(&target, 2_000_000);
        match report.outcome {
            SearchOutcome::Witness(w) => {
                assert!(is_factorial(&levels_of(&w)));
                assert_eq!(w.counts(), x.counts(), "seed {seed}");
            }
            other => panic!("seed {seed}, target {target}: {other:?}"),
        }
    }
}

#[test]
fn search_refutes_exactly_the_unrealizable_small_targets() {
    // brute force over every binary word system of horizon 3
    let mut realizable = BTreeSet::new();
    let pools: Vec<Vec<Vec<u32>>> = (1..=3).map(|n| all_words(2, n)).collect();
    for mask1 in 0u32..(1 << 2) {
        for mask2 in 0u32..(1 << 4) {
            for mask3 in 0u32..(1 << 8) {
                let pick = |pool: &Vec<Vec<u32>>, mask: u32| -> BTreeSet<Vec<u32>> {
                    pool.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, w)| w.clone())
                        .collect()
                };
                let levels = vec![
                    BTreeSet::from([Vec::new()]),
                    pick(&pools[0], mask1),
                    pick(&pools[1], mask2),
                    pick(&pools[2], mask3),
                ];
                if levels[1].len() == 2 && is_factorial(&levels) {
                    realizable.insert((levels[2].len() as u64, levels[3].len() as u64));
                }
            }
        }
    }
    for d2 in 0..=4u64 {
        for d3 in 0..=8u64 {
            let report = search_prefix(&TargetSequence::new(vec![2, d2, d3]), 1_000_000);
            let found = matches!(report.outcome, SearchOutcome::Witness(_));
            assert_eq!(found, realizable.contains(&(d2, d3)), "(2,{d2},{d3})");
        }
    }
}

#[test]
fn complement_identity_on_small_graphs() {
    let mut g = rng(11);
    for _ in 0..200 {
        use rand::Rng;
        let d = g.gen_range(1..=6);
        let density = g.gen_range(0.0..1.0);
        let graph = random_graph(&mut g, d, density);
        let (lhs, rhs) = wordsys_core::graph::complement_identity(&graph);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, BigInt::from(walks(d, graph.edges(), 3)));
    }
}

#[test]
fn graph_complement_swaps_edges() {
    let g = Graph::new(3, [(0, 1), (2, 2)]).unwrap();
    let c = g.complement();
    assert_eq!(c.edges().len(), 7);
    assert!(g.edges().is_disjoint(c.edges()));
    assert_eq!(c.complement(), g);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_antidictionary_has_non_edges_at_length_two(seed: u64, d in 1usize..=4, density in 0.0f64..1.0, n in 2usize..=5) {
        let g = random_graph(&mut rng(seed), d, density);
        let anti = antidictionary(&graph_system(&g, n));
        let pairs: BTreeSet<_> = anti.words().iter().filter(|w| w.len() == 2).cloned().collect();
        let non_edges = g.non_edges();
        prop_assert_eq!(&pairs, non_edges.words());
    }
}

#[test]
fn max_paths_is_monotone_in_edges() {
    use wordsys_core::graph::{max_paths, MaxPathsOptions};
    for d in 1..=3usize {
        let best: Vec<u64> = (0..=d * d)
            .map(|e| max_paths(d, e, MaxPathsOptions::default()).unwrap().maximum)
            .collect();
        assert!(best.windows(2).all(|p| p[0] <= p[1]), "d={d}: {best:?}");
        let canonical: Vec<u64> = (0..=d * d)
            .map(|e| {
                let options = MaxPathsOptions {
                    canonical: true,
                    budget: None,
                };
                max_paths(d, e, options).unwrap().maximum
            })
            .collect();
        assert_eq!(best, canonical);
    }
}
