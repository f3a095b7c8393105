mod common;

use cmc_core::{best_per_size, enumerate_fits, fit_subset, CandidateSet, EngineOptions, SubsetMask};
use common::{naive_best_per_size, random_dataset, rel_diff};
use proptest::prelude::*;

fn engine(prune: bool) -> EngineOptions {
    EngineOptions { prune, ..EngineOptions::default() }
}

#[test]
fn search_matches_exhaustive_oracle() {
    for seed in 0..50u64 {
        let p = 1 + (seed as usize % 8);
        let n = p + 3 + (seed as usize % 17);
        let data = random_dataset(seed, n, p);
        let oracle = naive_best_per_size(&data);
        for prune in [true, false] {
            let found = best_per_size(&data, &CandidateSet::AllSubsets, &engine(prune)).unwrap();
            assert_eq!(found.max_size(), p);
            for (s, (mask, rss)) in oracle.iter().enumerate() {
                let got = found.get(s).unwrap();
                assert_eq!(&got.mask, mask, "seed {seed} size {s} prune {prune}");
                assert!(rel_diff(got.rss, *rss) < 1e-9, "seed {seed} size {s}: {} vs {rss}", got.rss);
            }
        }
    }
}

#[test]
fn best_per_size_mode_agrees_with_all_subsets() {
    let data = random_dataset(7, 40, 10);
    let a = best_per_size(&data, &CandidateSet::AllSubsets, &EngineOptions::default()).unwrap();
    let b = best_per_size(&data, &CandidateSet::BestPerSize, &EngineOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn enumeration_covers_every_mask_once() {
    let data = random_dataset(3, 20, 5);
    let mut seen: Vec<u64> = enumerate_fits(&data, &CandidateSet::AllSubsets, &EngineOptions::default())
        .unwrap()
        .map(|f| f.mask.bits())
        .collect();
    seen.sort_unstable();
    assert_eq!(seen, (0..32).collect::<Vec<_>>());
}

#[test]
fn enumerated_rss_matches_direct_fit() {
    let data = random_dataset(11, 25, 6);
    for fit in enumerate_fits(&data, &CandidateSet::AllSubsets, &EngineOptions::default()).unwrap() {
        let direct = fit_subset(&data, &fit.mask).unwrap();
        assert!(rel_diff(fit.rss, direct.rss) < 1e-9);
    }
}

#[test]
fn explicit_list_keeps_only_listed_masks() {
    let data = random_dataset(5, 30, 6);
    let list = vec![SubsetMask::new([2, 5]), SubsetMask::new([1]), SubsetMask::new([3, 4])];
    let best = best_per_size(&data, &CandidateSet::explicit(list.clone()), &EngineOptions::default()).unwrap();
    assert!(best.get(0).is_none());
    assert_eq!(best.get(1).unwrap().mask, list[1]);
    let r25 = fit_subset(&data, &list[0]).unwrap().rss;
    let r34 = fit_subset(&data, &list[2]).unwrap().rss;
    let expect = if r25 <= r34 { &list[0] } else { &list[2] };
    assert_eq!(&best.get(2).unwrap().mask, expect);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn best_rss_is_non_increasing_in_size(seed in 0u64..10_000, p in 1usize..10, extra in 2usize..30) {
        let data = random_dataset(seed, p + extra, p);
        let best = best_per_size(&data, &CandidateSet::AllSubsets, &EngineOptions::default()).unwrap();
        let rss: Vec<f64> = best.iter().map(|(_, e)| e.rss).collect();
        prop_assert_eq!(rss.len(), p + 1);
        for w in rss.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn pruning_never_changes_the_answer(seed in 0u64..10_000, p in 1usize..12) {
        let data = random_dataset(seed, p + 10, p);
        let a = best_per_size(&data, &CandidateSet::AllSubsets, &engine(true)).unwrap();
        let b = best_per_size(&data, &CandidateSet::AllSubsets, &engine(false)).unwrap();
        for ((_, x), (_, y)) in a.iter().zip(b.iter()) {
            prop_assert_eq!(&x.mask, &y.mask);
            prop_assert!(rel_diff(x.rss, y.rss) < 1e-10);
        }
    }
}
