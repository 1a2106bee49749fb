use itertools::Itertools;
use ppm_core::even_odd::EvenMapMode;
use ppm_core::{
    is_witness, match_dp, match_dp_with, match_even_odd_with, match_naive, validate_embedding,
    DpOptions, EvenOddOptions, Error, PartialEmbedding, Permutation, Strategy as Order,
};
use proptest::prelude::*;

fn perm(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn pair() -> impl Strategy<Value = (Permutation, Permutation)> {
    (perm(11), perm(6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn even_odd_agrees_with_naive((text, pattern) in pair()) {
        let want = match_naive(&text, &pattern).contains;
        for mode in [EvenMapMode::Enumerate, EvenMapMode::Backtrack] {
            let r = match_even_odd_with(&text, &pattern, EvenOddOptions { mode, ..Default::default() });
            prop_assert_eq!(r.contains, want, "{:?}", mode);
            if let Some(w) = &r.witness {
                prop_assert!(is_witness(&text, &pattern, w));
            }
        }
    }

    #[test]
    fn dp_agrees_with_naive_under_every_order((text, pattern) in pair()) {
        let want = match_naive(&text, &pattern).contains;
        for st in Order::ALL {
            let order = match st.build(&pattern) {
                Ok(o) => o,
                Err(Error::NonPlanar) => continue,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            let r = match_dp(&text, &pattern, &order, true);
            prop_assert_eq!(r.contains, want, "{}", st.name());
            prop_assert_eq!(r.witness.is_some(), want);
            if let Some(w) = &r.witness {
                prop_assert!(is_witness(&text, &pattern, w));
            }
        }
    }

    #[test]
    fn unpruned_dp_agrees((text, pattern) in pair()) {
        let order = Order::M.build(&pattern).unwrap();
        let opts = DpOptions { pairwise_pruning: false, ..Default::default() };
        prop_assert_eq!(
            match_dp_with(&text, &pattern, &order, opts).contains,
            match_naive(&text, &pattern).contains
        );
    }

    #[test]
    fn witnesses_validate((text, pattern) in pair()) {
        if let Some(w) = match_naive(&text, &pattern).witness {
            let map = PartialEmbedding::from_witness(&w);
            prop_assert!(validate_embedding(&text, &pattern, &map).unwrap());
        }
    }
}

// A total map passes validation exactly when its index tuple is an occurrence.
#[test]
fn validation_is_exact_on_small_inputs() {
    for n in 1..=6usize {
        for tv in (1..=n as u32).permutations(n) {
            let text = Permutation::new(tv).unwrap();
            for k in 1..=n.min(4) {
                for pv in (1..=k as u32).permutations(k) {
                    let pattern = Permutation::new(pv).unwrap();
                    let mut any = false;
                    for w in (1..=n).permutations(k) {
                        let map = PartialEmbedding::from_witness(&w);
                        let ok = validate_embedding(&text, &pattern, &map).unwrap();
                        assert_eq!(ok, is_witness(&text, &pattern, &w), "{text} {pattern} {w:?}");
                        any |= ok;
                    }
                    assert_eq!(any, match_naive(&text, &pattern).contains, "{text} {pattern}");
                }
            }
        }
    }
}

// The pruned backtracking oracle against plain enumeration of index tuples.
#[test]
fn naive_matches_full_enumeration() {
    for n in 0..=7usize {
        for tv in (1..=n as u32).permutations(n).step_by(7) {
            let text = Permutation::new(tv).unwrap();
            for k in 0..=4usize {
                for pv in (1..=k as u32).permutations(k) {
                    let pattern = Permutation::new(pv).unwrap();
                    let full = (1..=n).combinations(k).any(|w| is_witness(&text, &pattern, &w));
                    assert_eq!(match_naive(&text, &pattern).contains, full, "{text} / {pattern}");
                }
            }
        }
    }
}

#[test]
fn longer_pattern_is_reported() {
    let text = Permutation::parse("2 1").unwrap();
    let pattern = Permutation::parse("1 2 3").unwrap();
    let r = match_naive(&text, &pattern);
    assert!(!r.contains && r.pattern_longer);
}
