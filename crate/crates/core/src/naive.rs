//! Brute-force containment: backtracking over increasing index tuples.
//!
//! Every prefix of the tuple is kept order-isomorphic to the matching prefix
//! of the pattern, so the search explores subsequences in lexicographic order
//! and stops at the lexicographically smallest occurrence.

use web_time::Instant;

use crate::perm::Permutation;
use crate::result::{Budget, Limits, MatchResult, Stats};

pub fn match_naive(text: &Permutation, pattern: &Permutation) -> MatchResult {
    match_naive_with(text, pattern, Limits::none())
}

pub fn match_naive_with(text: &Permutation, pattern: &Permutation, limits: Limits) -> MatchResult {
    let start = Instant::now();
    let n = text.len();
    let k = pattern.len();
    let mut stats = Stats::default();
    if k > n {
        stats.elapsed = start.elapsed();
        return MatchResult::too_long(stats);
    }
    let tv: Vec<u32> = text.values().to_vec();
    let pv: Vec<u32> = pattern.values().to_vec();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut budget = Budget::new(limits);
    let found = extend(&tv, &pv, &mut chosen, 0, &mut stats, &mut budget);
    stats.elapsed = start.elapsed();
    if found {
        MatchResult::found(Some(chosen.iter().map(|i| i + 1).collect()), stats)
    } else if budget.exhausted() {
        MatchResult::stopped(stats)
    } else {
        MatchResult::avoided(stats)
    }
}

fn extend(
    tv: &[u32],
    pv: &[u32],
    chosen: &mut Vec<usize>,
    from: usize,
    stats: &mut Stats,
    budget: &mut Budget,
) -> bool {
    let j = chosen.len();
    let k = pv.len();
    if j == k {
        return true;
    }
    let n = tv.len();
    // leave room for the remaining k - j - 1 entries
    let last = n - (k - j);
    for i in from..=last {
        stats.candidates += 1;
        if !budget.tick(1) {
            return false;
        }
        let consistent = chosen
            .iter()
            .zip(pv)
            .all(|(&c, &pl)| (pl < pv[j]) == (tv[c] < tv[i]));
        if consistent {
            chosen.push(i);
            if extend(tv, pv, chosen, i + 1, stats, budget) {
                return true;
            }
            chosen.pop();
            if budget.exhausted() {
                return false;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::is_witness;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn intro_examples() {
        let t = perm("1 5 4 6 3 7 8 2");
        let r = match_naive(&t, &perm("2 3 1"));
        assert!(r.contains);
        assert_eq!(r.witness, Some(vec![2, 4, 5]));
        assert!(!match_naive(&t, &perm("3 1 2")).contains);
    }

    #[test]
    fn pattern_in_itself() {
        let p = perm("3 1 4 2 5");
        let r = match_naive(&p, &p);
        assert_eq!(r.witness, Some(vec![1, 2, 3, 4, 5]));
    }

    #[test]
    fn longer_pattern_is_flagged() {
        let r = match_naive(&perm("1 2"), &perm("1 2 3"));
        assert!(!r.contains);
        assert!(r.pattern_longer);
    }

    #[test]
    fn empty_pattern_is_contained() {
        let r = match_naive(&perm("2 1"), &Permutation::identity(0));
        assert!(r.contains);
        assert_eq!(r.witness, Some(vec![]));
    }

    #[test]
    fn step_limit_stops_search() {
        let t = Permutation::identity(300);
        let p = perm("2 1");
        let r = match_naive_with(&t, &p, Limits::with_max_steps(10));
        assert!(!r.contains);
        assert!(r.timed_out);
    }

    #[test]
    fn witness_is_valid() {
        let t = perm("6 2 7 1 8 3 5 4");
        let p = perm("2 1 3");
        let r = match_naive(&t, &p);
        assert!(is_witness(&t, &p, r.witness.as_ref().unwrap()));
    }
}
