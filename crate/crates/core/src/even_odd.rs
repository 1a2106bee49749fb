//! Polynomial-space matching by the even-odd method.
//!
//! Every order-preserving placement of the even-index pattern points is
//! tried in lexicographic order; each is then extended over the odd-index
//! points taken by increasing value, always choosing the lowest text point
//! inside the box cut out by the already placed neighbors. The greedy choice
//! is safe: if any valid embedding extends the current map, so does the one
//! using the lowest point.

use std::ops::ControlFlow;

use web_time::Instant;

use crate::perm::Permutation;
use crate::result::{Budget, Limits, MatchResult, Stats};

/// Even-index points (ascending index) and odd-index points (ascending value),
/// all as 1-based pattern indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenOddPartition {
    pub even: Vec<usize>,
    pub odd_by_value: Vec<usize>,
}

pub fn even_odd_partition(pattern: &Permutation) -> EvenOddPartition {
    let k = pattern.len();
    let even: Vec<usize> = (2..=k).step_by(2).collect();
    let odd_by_value: Vec<usize> = (1..=k)
        .map(|y| pattern.position(y))
        .filter(|x| x % 2 == 1)
        .collect();
    EvenOddPartition { even, odd_by_value }
}

/// Open box `x_lo < x < x_hi`, `y_lo < y < y_hi` constraining one odd point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintBox {
    pub x_lo: usize,
    pub x_hi: usize,
    pub y_lo: usize,
    /// `None` when the box is open upwards.
    pub y_hi: Option<usize>,
}

/// How initial even maps are produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EvenMapMode {
    /// All gap-feasible index tuples, each filtered by one value-order pass.
    #[default]
    Enumerate,
    /// Left-to-right placement that abandons a prefix as soon as its values
    /// break the pattern's order.
    Backtrack,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvenOddOptions {
    pub mode: EvenMapMode,
    pub limits: Limits,
}

/// Precomputed pattern-side data shared by enumeration and sweep.
struct Plan {
    k: usize,
    n: usize,
    part: EvenOddPartition,
    /// indices into `part.even`, sorted by pattern value
    even_by_value: Vec<usize>,
    /// 1 when the pattern ends in an odd-index point
    tail: usize,
}

impl Plan {
    fn new(text: &Permutation, pattern: &Permutation) -> Self {
        let part = even_odd_partition(pattern);
        let mut even_by_value: Vec<usize> = (0..part.even.len()).collect();
        even_by_value.sort_by_key(|&j| pattern.value(part.even[j]));
        let k = pattern.len();
        Plan {
            k,
            n: text.len(),
            part,
            even_by_value,
            tail: k % 2,
        }
    }

    fn h(&self) -> usize {
        self.part.even.len()
    }

    /// Largest admissible text index for the `j`-th even point (0-based j).
    fn max_at(&self, j: usize) -> usize {
        (self.n - self.tail).saturating_sub(2 * (self.h() - 1 - j))
    }

    fn values_ordered(&self, text: &Permutation, g0: &[usize]) -> bool {
        self.even_by_value
            .windows(2)
            .all(|w| text.value(g0[w[0]]) < text.value(g0[w[1]]))
    }
}

/// Streams initial maps for the even-index points, as 1-based text indices in
/// even-point order. A map is offered only if consecutive images leave room
/// for the odd points between them (one free index before the first image,
/// between neighbours, and after the last when the pattern length is odd)
/// and its values are ordered like the pattern's even values.
///
/// Returns the number of gap-feasible tuples generated before the value
/// check; with even `k` this equals `C(n - k/2, k/2)` when run to completion.
pub fn enumerate_even_maps<F>(text: &Permutation, pattern: &Permutation, mut f: F) -> u64
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let plan = Plan::new(text, pattern);
    let mut raw = 0;
    let mut budget = Budget::new(Limits::none());
    let _ = for_each_tuple(&plan, None, &mut raw, &mut budget, |g0| {
        if plan.values_ordered(text, g0) {
            f(g0)
        } else {
            ControlFlow::Continue(())
        }
    });
    raw
}

/// Gap-feasible tuples in lexicographic order, optionally with a fixed first
/// coordinate. `raw` counts the tuples produced.
fn for_each_tuple<F>(
    plan: &Plan,
    first: Option<usize>,
    raw: &mut u64,
    budget: &mut Budget,
    mut f: F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let h = plan.h();
    if plan.k > plan.n {
        return ControlFlow::Continue(());
    }
    if h == 0 {
        *raw += 1;
        return f(&[]);
    }
    let mut t: Vec<usize> = (0..h).map(|j| 2 * (j + 1)).collect();
    if let Some(e1) = first {
        if e1 < 2 || e1 > plan.max_at(0) {
            return ControlFlow::Continue(());
        }
        for (j, slot) in t.iter_mut().enumerate() {
            *slot = e1 + 2 * j;
        }
    }
    if t[h - 1] > plan.max_at(h - 1) {
        return ControlFlow::Continue(());
    }
    let lowest_free = usize::from(first.is_some());
    loop {
        *raw += 1;
        if !budget.tick(h as u64) {
            return ControlFlow::Break(());
        }
        f(&t)?;
        // rightmost coordinate that can still move
        let Some(j) = (lowest_free..h).rev().find(|&j| t[j] < plan.max_at(j)) else {
            return ControlFlow::Continue(());
        };
        t[j] += 1;
        for i in j + 1..h {
            t[i] = t[i - 1] + 2;
        }
    }
}

/// Backtracking variant: same admissible maps in the same order, but each
/// even point is checked against the already placed ones when it is placed.
fn for_each_backtracking<F>(
    plan: &Plan,
    text: &Permutation,
    pattern: &Permutation,
    first: Option<usize>,
    raw: &mut u64,
    budget: &mut Budget,
    mut f: F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let h = plan.h();
    if plan.k > plan.n {
        return ControlFlow::Continue(());
    }
    if h == 0 {
        *raw += 1;
        return f(&[]);
    }
    let pvals: Vec<usize> = plan.part.even.iter().map(|&x| pattern.value(x)).collect();
    let mut t = Vec::with_capacity(h);
    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&[usize]) -> ControlFlow<()>>(
        plan: &Plan,
        text: &Permutation,
        pvals: &[usize],
        first: Option<usize>,
        t: &mut Vec<usize>,
        raw: &mut u64,
        budget: &mut Budget,
        f: &mut F,
    ) -> ControlFlow<()> {
        let j = t.len();
        if j == pvals.len() {
            *raw += 1;
            return f(t);
        }
        let lo = if j == 0 { 2 } else { t[j - 1] + 2 };
        let hi = plan.max_at(j);
        let (lo, hi) = match (j, first) {
            (0, Some(e1)) => (e1.max(lo), e1.min(hi)),
            _ => (lo, hi),
        };
        for x in lo..=hi {
            if !budget.tick(j as u64 + 1) {
                return ControlFlow::Break(());
            }
            let v = text.value(x);
            let ok = t
                .iter()
                .zip(pvals)
                .all(|(&tx, &pv)| (pv < pvals[j]) == (text.value(tx) < v));
            if ok {
                t.push(x);
                let r = rec(plan, text, pvals, first, t, raw, budget, f);
                t.pop();
                r?;
            }
        }
        ControlFlow::Continue(())
    }
    rec(plan, text, &pvals, first, &mut t, raw, budget, &mut f)
}

/// Constraint box for odd point `x` given the partial map `img`
/// (1-based pattern index to 1-based text index, 0 = unmapped).
fn constraint_box(
    text: &Permutation,
    pattern: &Permutation,
    img: &[usize],
    x: usize,
) -> ConstraintBox {
    let k = pattern.len();
    let n = text.len();
    let x_lo = if x > 1 { img[x - 1] } else { 0 };
    let x_hi = if x < k { img[x + 1] } else { n + 1 };
    let y = pattern.value(x);
    let y_lo = if y > 1 {
        let d = pattern.position(y - 1);
        debug_assert!(img[d] != 0, "down-neighbor must already be placed");
        text.value(img[d])
    } else {
        0
    };
    let y_hi = if y < k {
        let u = pattern.position(y + 1);
        (u % 2 == 0).then(|| text.value(img[u]))
    } else {
        None
    };
    ConstraintBox {
        x_lo,
        x_hi,
        y_lo,
        y_hi,
    }
}

/// Greedy extension of an even map over the odd points. `g0[j]` is the text
/// index of pattern point `2(j+1)`. Returns the full witness, or `None` on
/// the first empty box.
pub fn extend_odd_sweep(
    text: &Permutation,
    pattern: &Permutation,
    g0: &[usize],
) -> Option<Vec<usize>> {
    let part = even_odd_partition(pattern);
    let mut steps = 0;
    sweep(text, pattern, &part, g0, &mut steps)
}

fn sweep(
    text: &Permutation,
    pattern: &Permutation,
    part: &EvenOddPartition,
    g0: &[usize],
    steps: &mut u64,
) -> Option<Vec<usize>> {
    let k = pattern.len();
    let mut img = vec![0usize; k + 2];
    for (&x, &t) in part.even.iter().zip(g0) {
        img[x] = t;
    }
    for &x in &part.odd_by_value {
        let b = constraint_box(text, pattern, &img, x);
        let y_hi = b.y_hi.unwrap_or(usize::MAX);
        let mut best: Option<(usize, usize)> = None;
        for tx in b.x_lo + 1..b.x_hi {
            *steps += 1;
            let ty = text.value(tx);
            if ty > b.y_lo && ty < y_hi && best.is_none_or(|(_, by)| ty < by) {
                best = Some((tx, ty));
            }
        }
        img[x] = best?.0;
    }
    let witness: Vec<usize> = img[1..=k].to_vec();
    assert!(
        witness.windows(2).all(|w| w[0] < w[1]),
        "greedy sweep produced a non-injective map"
    );
    Some(witness)
}

pub fn match_even_odd(text: &Permutation, pattern: &Permutation) -> MatchResult {
    match_even_odd_with(text, pattern, EvenOddOptions::default())
}

pub fn match_even_odd_with(
    text: &Permutation,
    pattern: &Permutation,
    opts: EvenOddOptions,
) -> MatchResult {
    let start = Instant::now();
    let mut stats = Stats::default();
    if pattern.len() > text.len() {
        stats.elapsed = start.elapsed();
        return MatchResult::too_long(stats);
    }
    let plan = Plan::new(text, pattern);
    let mut budget = Budget::new(opts.limits);
    let found = search(text, pattern, &plan, opts.mode, None, &mut budget, &mut stats);
    stats.elapsed = start.elapsed();
    match found {
        Some(w) => MatchResult::found(Some(w), stats),
        None if budget.exhausted() => MatchResult::stopped(stats),
        None => MatchResult::avoided(stats),
    }
}

fn search(
    text: &Permutation,
    pattern: &Permutation,
    plan: &Plan,
    mode: EvenMapMode,
    first: Option<usize>,
    budget: &mut Budget,
    stats: &mut Stats,
) -> Option<Vec<usize>> {
    let mut found = None;
    let mut raw = 0;
    let mut accepted = 0;
    let mut steps = 0;
    // sweep work is metered separately; the tuple loop holds `budget`
    let mut sweep_budget = Budget::new(budget.limits());
    let mut on_map = |g0: &[usize], check: bool| {
        if check && !plan.values_ordered(text, g0) {
            return ControlFlow::Continue(());
        }
        accepted += 1;
        let before = steps;
        let r = sweep(text, pattern, &plan.part, g0, &mut steps);
        if let Some(w) = r {
            found = Some(w);
            return ControlFlow::Break(());
        }
        if sweep_budget.tick(steps - before) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    };
    match mode {
        EvenMapMode::Enumerate => {
            let _ = for_each_tuple(plan, first, &mut raw, budget, |g0| on_map(g0, true));
        }
        EvenMapMode::Backtrack => {
            let _ = for_each_backtracking(plan, text, pattern, first, &mut raw, budget, |g0| {
                on_map(g0, false)
            });
        }
    }
    if sweep_budget.exhausted() {
        budget.mark_exhausted();
    }
    stats.candidates += raw;
    stats.accepted_candidates += accepted;
    stats.inner_steps += steps;
    found
}

/// Parallel search over the first even image. The reported witness is the
/// one from the lexicographically smallest successful initial map, exactly
/// as in the sequential search.
#[cfg(feature = "parallel")]
pub fn match_even_odd_parallel(
    text: &Permutation,
    pattern: &Permutation,
    opts: EvenOddOptions,
) -> MatchResult {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

    let start = Instant::now();
    if pattern.len() > text.len() || pattern.len() < 2 {
        return match_even_odd_with(text, pattern, opts);
    }
    let plan = Plan::new(text, pattern);
    let candidates = AtomicU64::new(0);
    let accepted = AtomicU64::new(0);
    let inner = AtomicU64::new(0);
    let stopped = AtomicBool::new(false);
    let found = (2..=plan.max_at(0)).into_par_iter().find_map_first(|e1| {
        let mut stats = Stats::default();
        let mut budget = Budget::new(opts.limits);
        let r = search(text, pattern, &plan, opts.mode, Some(e1), &mut budget, &mut stats);
        candidates.fetch_add(stats.candidates, Ordering::Relaxed);
        accepted.fetch_add(stats.accepted_candidates, Ordering::Relaxed);
        inner.fetch_add(stats.inner_steps, Ordering::Relaxed);
        if budget.exhausted() {
            stopped.store(true, Ordering::Relaxed);
        }
        r
    });
    let stats = Stats {
        candidates: candidates.into_inner(),
        accepted_candidates: accepted.into_inner(),
        inner_steps: inner.into_inner(),
        elapsed: start.elapsed(),
        ..Stats::default()
    };
    match found {
        Some(w) => MatchResult::found(Some(w), stats),
        None if stopped.into_inner() => MatchResult::stopped(stats),
        None => MatchResult::avoided(stats),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::is_witness;
    use crate::naive::match_naive;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn partition_examples() {
        let p = even_odd_partition(&perm("2 3 1"));
        assert_eq!(p.even, vec![2]);
        assert_eq!(p.odd_by_value, vec![3, 1]);
        let p = even_odd_partition(&perm("6 3 8 5 4 2 1 7"));
        assert_eq!(p.even, vec![2, 4, 6, 8]);
        assert_eq!(p.odd_by_value, vec![7, 5, 1, 3]);
        let p = even_odd_partition(&perm("1"));
        assert!(p.even.is_empty());
        assert_eq!(p.odd_by_value, vec![1]);
    }

    fn raw_count(n: usize, pattern: &Permutation) -> u64 {
        let text = Permutation::identity(n);
        let plan = Plan::new(&text, pattern);
        let mut raw = 0;
        let mut budget = Budget::new(Limits::none());
        let _ = for_each_tuple(&plan, None, &mut raw, &mut budget, |_| ControlFlow::Continue(()));
        raw
    }

    #[test]
    fn raw_counts() {
        assert_eq!(raw_count(8, &Permutation::identity(4)), 15);
        assert_eq!(raw_count(6, &Permutation::identity(6)), 1);
        assert_eq!(raw_count(7, &Permutation::identity(7)), 1);
        assert_eq!(raw_count(5, &Permutation::identity(1)), 1);
    }

    #[test]
    fn single_tuple_when_lengths_match() {
        let p = perm("2 1 4 3 6 5");
        let mut seen = Vec::new();
        enumerate_even_maps(&p, &p, |g| {
            seen.push(g.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![vec![2, 4, 6]]);
    }

    #[test]
    fn identity_extension() {
        let p = perm("6 3 8 5 4 2 1 7");
        let w = extend_odd_sweep(&p, &p, &[2, 4, 6, 8]).unwrap();
        assert_eq!(w, (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn lowest_point_is_chosen() {
        // pattern 1 2: the odd point must sit left of the even image and below it
        let t = perm("3 1 4 2 5");
        let p = perm("1 2");
        // even image at text index 3 (value 4): candidates x in {1,2}, y < 4 -> pick value 1
        assert_eq!(extend_odd_sweep(&t, &p, &[3]), Some(vec![2, 3]));
    }

    #[test]
    fn intro_example() {
        let t = perm("1 5 4 6 3 7 8 2");
        let r = match_even_odd(&t, &perm("2 3 1"));
        assert!(r.contains);
        assert!(is_witness(&t, &perm("2 3 1"), r.witness.as_ref().unwrap()));
        assert!(!match_even_odd(&t, &perm("3 1 2")).contains);
        assert!(match_even_odd(&perm("1 2"), &perm("1 2 3")).pattern_longer);
    }

    #[test]
    fn modes_agree_with_naive() {
        let texts = ["4 1 5 2 6 3", "3 6 1 5 2 4", "6 5 4 3 2 1", "2 4 6 1 3 5"];
        let pats = ["2 1 3", "3 1 4 2", "1 3 2 4", "2 1", "1", "3 2 1 4"];
        for t in texts {
            for p in pats {
                let (t, p) = (perm(t), perm(p));
                let want = match_naive(&t, &p).contains;
                for mode in [EvenMapMode::Enumerate, EvenMapMode::Backtrack] {
                    let opts = EvenOddOptions {
                        mode,
                        ..Default::default()
                    };
                    let r = match_even_odd_with(&t, &p, opts);
                    assert_eq!(r.contains, want, "{t} / {p} / {mode:?}");
                    if let Some(w) = &r.witness {
                        assert!(is_witness(&t, &p, w));
                    }
                }
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_reports_sequential_winner() {
        let t = perm("5 9 2 7 1 8 3 10 4 6");
        for p in ["2 1 3", "1 3 2 4", "3 1 4 2", "2 4 1 3"] {
            let p = perm(p);
            let a = match_even_odd(&t, &p);
            let b = match_even_odd_parallel(&t, &p, EvenOddOptions::default());
            assert_eq!(a.contains, b.contains);
            assert_eq!(a.witness, b.witness);
        }
    }
}
