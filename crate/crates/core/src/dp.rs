//! Boundary-restricted dynamic program over an embedding order.
//!
//! Step `i` embeds pattern point `τ(i)`. A table entry is the tuple of text
//! images of the current boundary points, listed in ascending pattern index.
//! Images of hidden points are forgotten: no later point is adjacent to them.

use rustc_hash::FxHashSet;
use web_time::Instant;

use crate::orders::EmbeddingOrder;
use crate::perm::Permutation;
use crate::result::{Budget, Limits, MatchResult, Stats};

#[derive(Debug, Clone, Copy)]
pub struct DpOptions {
    pub want_witness: bool,
    /// Check the new point against every stored boundary image, not only
    /// against its embedded neighbors. Keeps the width within `C(n, bd)`.
    pub pairwise_pruning: bool,
    pub limits: Limits,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            want_witness: false,
            pairwise_pruning: true,
            limits: Limits::none(),
        }
    }
}

pub fn match_dp(
    text: &Permutation,
    pattern: &Permutation,
    order: &EmbeddingOrder,
    want_witness: bool,
) -> MatchResult {
    let opts = DpOptions {
        want_witness,
        ..DpOptions::default()
    };
    match_dp_with(text, pattern, order, opts)
}

pub fn match_dp_with(
    text: &Permutation,
    pattern: &Permutation,
    order: &EmbeddingOrder,
    opts: DpOptions,
) -> MatchResult {
    run(text, pattern, order, opts, |_, _, _, _| {})
}

/// Where a slot of the new boundary takes its image from.
#[derive(Debug, Clone, Copy)]
enum Src {
    Prev(usize),
    New,
}

/// Constraint of one previous boundary slot on the new point.
#[derive(Debug, Clone, Copy)]
struct Rel {
    slot: usize,
    /// Pattern index of the slot point is below the new point's.
    left: bool,
    /// Pattern value of the slot point is below the new point's.
    below: bool,
}

struct Step {
    point: usize,
    rels: Vec<Rel>,
    next: Vec<Src>,
    next_bd: Vec<usize>,
}

fn plan(pattern: &Permutation, order: &EmbeddingOrder, pruning: bool) -> Vec<Step> {
    let g = crate::incidence::IncidenceGraph::new(pattern);
    let k = pattern.len();
    let mut inside = vec![false; k];
    let mut outside: Vec<usize> = (0..k).map(|v| g.degree(v)).collect();
    let mut bd: Vec<usize> = Vec::new();
    let mut steps = Vec::with_capacity(k);
    for &x in order.tau() {
        let p = x - 1;
        let rels = if pruning {
            bd.iter()
                .enumerate()
                .map(|(slot, &u)| Rel {
                    slot,
                    left: u < p,
                    below: pattern.val0(u) < pattern.val0(p),
                })
                .collect()
        } else {
            let mut r: Vec<Rel> = g
                .adjacent(p)
                .filter(|&u| inside[u])
                .map(|u| Rel {
                    slot: bd.binary_search(&u).expect("embedded neighbor is on the boundary"),
                    left: u < p,
                    below: pattern.val0(u) < pattern.val0(p),
                })
                .collect();
            r.sort_by_key(|r| r.slot);
            r
        };
        inside[p] = true;
        for u in g.adjacent(p) {
            outside[u] -= 1;
        }
        let mut next_bd: Vec<usize> = bd.iter().copied().filter(|&u| outside[u] > 0).collect();
        if outside[p] > 0 {
            let at = next_bd.partition_point(|&u| u < p);
            next_bd.insert(at, p);
        }
        let next = next_bd
            .iter()
            .map(|&u| {
                if u == p {
                    Src::New
                } else {
                    Src::Prev(bd.binary_search(&u).expect("kept point was on the boundary"))
                }
            })
            .collect();
        steps.push(Step {
            point: p,
            rels,
            next,
            next_bd: next_bd.clone(),
        });
        bd = next_bd;
    }
    steps
}

/// Runs the program, calling `observe(step, boundary, keys, count)` after
/// every generation with the 0-based boundary and the flat key array.
pub(crate) fn run<F>(
    text: &Permutation,
    pattern: &Permutation,
    order: &EmbeddingOrder,
    opts: DpOptions,
    mut observe: F,
) -> MatchResult
where
    F: FnMut(usize, &[usize], &[u32], usize),
{
    let start = Instant::now();
    let n = text.len();
    let k = pattern.len();
    let mut stats = Stats::default();
    if k > n {
        stats.elapsed = start.elapsed();
        return MatchResult::too_long(stats);
    }
    assert_eq!(order.len(), k, "order does not match the pattern");
    let steps = plan(pattern, order, opts.pairwise_pruning);
    let tv: Vec<u32> = text.values().to_vec();
    let mut budget = Budget::new(opts.limits);

    // Generation 0: the empty map.
    let mut width = 0usize;
    let mut keys: Vec<u32> = Vec::new();
    let mut count = 1usize;
    stats.widths.push(1);
    stats.peak_width = 1;
    observe(0, &[], &keys, 1);

    // Per generation: parent entry and image of the new point.
    let mut links: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();

    for (i, st) in steps.iter().enumerate() {
        let next_width = st.next.len();
        let mut next_keys: Vec<u32> = Vec::new();
        let mut parents: Vec<u32> = Vec::new();
        let mut images: Vec<u32> = Vec::new();
        let mut seen: FxHashSet<Box<[u32]>> = FxHashSet::default();
        let mut key = vec![0u32; next_width];

        for e in 0..count {
            let g = &keys[e * width..(e + 1) * width];
            stats.candidates += 1;
            let (mut x_lo, mut x_hi) = (0usize, n);
            let (mut y_lo, mut y_hi) = (0u32, u32::MAX);
            for r in &st.rels {
                let img = g[r.slot] as usize;
                if r.left {
                    x_lo = x_lo.max(img + 1);
                } else {
                    x_hi = x_hi.min(img);
                }
                let v = tv[img];
                if r.below {
                    y_lo = y_lo.max(v);
                } else {
                    y_hi = y_hi.min(v);
                }
            }
            if x_lo >= x_hi || y_lo >= y_hi {
                continue;
            }
            stats.inner_steps += (x_hi - x_lo) as u64;
            if !budget.tick((x_hi - x_lo) as u64 + 1) {
                break;
            }
            for q in x_lo..x_hi {
                let v = tv[q];
                if v <= y_lo || v >= y_hi {
                    continue;
                }
                for (slot, src) in key.iter_mut().zip(&st.next) {
                    *slot = match *src {
                        Src::Prev(s) => g[s],
                        Src::New => q as u32,
                    };
                }
                if !seen.contains(key.as_slice()) {
                    seen.insert(key.clone().into_boxed_slice());
                    next_keys.extend_from_slice(&key);
                    if opts.want_witness {
                        parents.push(e as u32);
                        images.push(q as u32);
                    }
                }
            }
        }
        if budget.exhausted() {
            stats.elapsed = start.elapsed();
            return MatchResult::stopped(stats);
        }
        count = seen.len();
        drop(seen);
        keys = next_keys;
        width = next_width;
        stats.widths.push(count as u64);
        stats.peak_width = stats.peak_width.max(count as u64);
        observe(i + 1, &st.next_bd, &keys, count);
        if opts.want_witness {
            links.push((parents, images));
        }
        if count == 0 {
            stats.elapsed = start.elapsed();
            return MatchResult::avoided(stats);
        }
    }

    let witness = opts.want_witness.then(|| {
        let mut w = vec![0usize; k];
        let mut e = 0usize;
        for (st, (parents, images)) in steps.iter().zip(&links).rev() {
            w[st.point] = images[e] as usize + 1;
            e = parents[e] as usize;
        }
        w
    });
    stats.elapsed = start.elapsed();
    MatchResult::found(witness, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::is_witness;
    use crate::naive::match_naive;
    use crate::orders::{order_even_odd, order_identity, EmbeddingOrder};
    use itertools::Itertools;
    use std::collections::BTreeSet;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn binom(n: usize, r: usize) -> u64 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
    }

    #[test]
    fn intro_example_all_fixed_orders() {
        let t = perm("1 5 4 6 3 7 8 2");
        for (pat, expect) in [("2 3 1", true), ("3 1 2", false)] {
            let p = perm(pat);
            for o in [order_identity(&p), order_even_odd(&p)] {
                let r = match_dp(&t, &p, &o, true);
                assert_eq!(r.contains, expect, "{pat}");
                if let Some(w) = r.witness {
                    assert!(is_witness(&t, &p, &w));
                }
            }
        }
    }

    #[test]
    fn monotone_pattern() {
        let t = perm("3 1 4 2 5 7 6 8");
        let p = Permutation::identity(5);
        let r = match_dp(&t, &p, &order_identity(&p), true);
        assert!(r.contains);
        assert!(is_witness(&t, &p, r.witness.as_ref().unwrap()));
        assert!(!match_dp(&t, &Permutation::identity(6), &order_identity(&Permutation::identity(6)), false).contains);
    }

    #[test]
    fn degenerate_sizes() {
        let t = perm("2 1");
        let e = Permutation::identity(0);
        let r = match_dp(&t, &e, &order_identity(&e), true);
        assert!(r.contains);
        assert_eq!(r.witness, Some(vec![]));
        let long = perm("1 3 2");
        assert!(match_dp(&t, &long, &order_identity(&long), false).pattern_longer);
    }

    #[test]
    fn every_order_agrees_with_naive_exhaustively() {
        for n in 1..=5 {
            for tv in (1..=n as u32).permutations(n) {
                let t = Permutation::new(tv).unwrap();
                for k in 1..=n.min(4) {
                    for pv in (1..=k as u32).permutations(k) {
                        let p = Permutation::new(pv).unwrap();
                        let want = match_naive(&t, &p).contains;
                        for tau in (1..=k).permutations(k) {
                            let o = EmbeddingOrder::new(&p, tau).unwrap();
                            for pruning in [true, false] {
                                let opts = DpOptions {
                                    want_witness: true,
                                    pairwise_pruning: pruning,
                                    limits: Limits::none(),
                                };
                                let r = match_dp_with(&t, &p, &o, opts);
                                assert_eq!(r.contains, want, "t={t} p={p} tau={:?}", o.tau());
                                if r.contains {
                                    assert!(is_witness(&t, &p, r.witness.as_ref().unwrap()));
                                }
                                if pruning {
                                    for (w, &b) in r.stats.widths.iter().zip(o.profile()) {
                                        assert!(*w <= binom(n, b));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// Restrictions to `bd(P_i)` of maps on `P_i` that preserve index and
    /// value order pairwise and satisfy every induced edge constraint.
    fn brute_keys(t: &Permutation, p: &Permutation, prefix: &[usize], bd: &[usize]) -> BTreeSet<Vec<u32>> {
        let n = t.len();
        let mut out = BTreeSet::new();
        for imgs in (0..n).permutations(prefix.len()) {
            let ok = prefix.iter().zip(&imgs).tuple_combinations().all(|((&a, &ia), (&b, &ib))| {
                (a < b) == (ia < ib) && (p.val0(a) < p.val0(b)) == (t.val0(ia) < t.val0(ib))
            });
            if ok {
                let key = bd
                    .iter()
                    .map(|u| imgs[prefix.iter().position(|x| x == u).unwrap()] as u32)
                    .collect();
                out.insert(key);
            }
        }
        out
    }

    #[test]
    fn stored_keys_are_exactly_the_restricted_maps() {
        let texts = ["3 1 4 2 5 8 6 7", "8 7 6 5 4 3 2 1", "2 4 6 8 1 3 5 7", "5 1 8 3 7 2 6 4"];
        for ts in texts {
            let t = perm(ts);
            for k in 1..=4 {
                for pv in (1..=k as u32).permutations(k) {
                    let p = Permutation::new(pv).unwrap();
                    for tau in (1..=k).permutations(k) {
                        let o = EmbeddingOrder::new(&p, tau.clone()).unwrap();
                        let prefix0: Vec<usize> = tau.iter().map(|x| x - 1).collect();
                        run(&t, &p, &o, DpOptions::default(), |i, bd, keys, count| {
                            let got: BTreeSet<Vec<u32>> = if bd.is_empty() {
                                (0..count.min(1)).map(|_| Vec::new()).collect()
                            } else {
                                keys.chunks(bd.len()).map(|c| c.to_vec()).collect()
                            };
                            let want = brute_keys(&t, &p, &prefix0[..i], bd);
                            assert_eq!(got, want, "t={ts} p={p} tau={tau:?} step {i}");
                        });
                    }
                }
            }
        }
    }

    #[test]
    fn peak_width_matches_widths() {
        let t = perm("5 1 8 3 7 2 6 4 10 9");
        let p = perm("2 4 1 3");
        let r = match_dp(&t, &p, &order_identity(&p), false);
        assert_eq!(r.stats.peak_width, *r.stats.widths.iter().max().unwrap());
    }

    #[test]
    fn step_limit_stops() {
        let t = Permutation::identity(400);
        let p = perm("2 1 4 3");
        let opts = DpOptions {
            limits: Limits::with_max_steps(100),
            ..DpOptions::default()
        };
        let r = match_dp_with(&t, &p, &order_identity(&p), opts);
        assert!(r.timed_out);
        assert!(!r.contains);
    }
}
