//! The three-stage order.
//!
//! Stage 1 embeds `s` of `2s` value blocks, choosing the union `Q_I` with the
//! smallest boundary. Stage 2 embeds the rest of one parity class, stage 3
//! everything else by value.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::incidence::{Direction, IncidenceGraph};
use crate::perm::Permutation;

use super::{order_identity, EmbeddingOrder};

/// Largest `s` for which all `C(2s, s)` block subsets are scanned.
pub const FULL_SCAN_MAX_S: usize = 12;
/// Subsets drawn when `s` exceeds [`FULL_SCAN_MAX_S`].
pub const SAMPLED_SUBSETS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalPartition {
    pub s: usize,
    /// Inclusive 1-based value ranges; sizes differ by at most one.
    pub intervals: Vec<(usize, usize)>,
    /// Block of each 0-based value.
    block_of_value: Vec<u32>,
}

impl IntervalPartition {
    pub fn block_of_value(&self, y: usize) -> usize {
        self.block_of_value[y - 1] as usize
    }

    pub fn blocks(&self) -> usize {
        self.intervals.len()
    }
}

/// `s = ⌊log₂ k⌋` and `2s` contiguous value intervals, larger ones first.
pub fn interval_partition(k: usize) -> IntervalPartition {
    assert!(k >= 2, "interval partition needs k >= 2");
    let s = k.ilog2() as usize;
    let parts = 2 * s;
    let (base, extra) = (k / parts, k % parts);
    let mut intervals = Vec::with_capacity(parts);
    let mut block_of_value = Vec::with_capacity(k);
    let mut lo = 1;
    for j in 0..parts {
        let len = base + usize::from(j < extra);
        intervals.push((lo, lo + len - 1));
        block_of_value.extend(std::iter::repeat_n(j as u32, len));
        lo += len;
    }
    IntervalPartition {
        s,
        intervals,
        block_of_value,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StagePlan {
    pub s: usize,
    /// Chosen blocks, 1-based, ascending.
    pub chosen: Vec<usize>,
    /// Points of the chosen blocks, 1-based pattern indices, ascending.
    pub q_i: Vec<usize>,
    pub e_even: usize,
    pub e_odd: usize,
    pub h_even: usize,
    pub h_odd: usize,
    pub bd_q_i: usize,
    pub second_stage_side: Side,
    /// Number of tau entries emitted by the end of stages 1, 2, 3.
    pub stage_ends: [usize; 3],
    /// True when the subset came from sampling rather than a full scan.
    pub sampled: bool,
}

impl StagePlan {
    pub fn hidden(&self) -> usize {
        self.h_even + self.h_odd
    }
}

/// The three-stage order; patterns shorter than 4 get the identity order.
pub fn order_m(pattern: &Permutation) -> EmbeddingOrder {
    order_m_with_plan(pattern).0
}

/// As [`order_m`], also returning the plan; `None` marks the identity
/// fallback for `k < 4`.
pub fn order_m_with_plan(pattern: &Permutation) -> (EmbeddingOrder, Option<StagePlan>) {
    let k = pattern.len();
    if k < 4 {
        return (order_identity(pattern), None);
    }
    let g = IncidenceGraph::new(pattern);
    let part = interval_partition(k);
    let block: Vec<u32> = (0..k).map(|x| part.block_of_value[pattern.val0(x)]).collect();
    let (mask, sampled) = best_subset(&g, &block, part.s);
    let in_qi: Vec<bool> = block.iter().map(|&b| mask >> b & 1 == 1).collect();
    let even = |x: usize| (x + 1) % 2 == 0;

    let mut emitted = vec![false; k];
    let mut tau: Vec<usize> = Vec::with_capacity(k);
    let emit = |x: usize, tau: &mut Vec<usize>, emitted: &mut Vec<bool>| {
        if !emitted[x] {
            emitted[x] = true;
            tau.push(x + 1);
        }
    };
    let by_value: Vec<usize> = (0..k).map(|y| pattern.pos0(y)).collect();

    // Stage 1.
    let qi_hidden: Vec<bool> = (0..k)
        .map(|x| in_qi[x] && g.adjacent(x).all(|u| in_qi[u]))
        .collect();
    for &x in &by_value {
        if qi_hidden[x] {
            emit(x, &mut tau, &mut emitted);
            for d in Direction::ALL {
                if let Some(u) = g.neighbor(x, d) {
                    emit(u, &mut tau, &mut emitted);
                }
            }
        }
    }
    for &x in &by_value {
        if in_qi[x] {
            emit(x, &mut tau, &mut emitted);
        }
    }
    let end1 = tau.len();

    let (mut e_even, mut e_odd, mut h_even, mut h_odd) = (0, 0, 0, 0);
    for x in (0..k).filter(|&x| in_qi[x]) {
        match (even(x), qi_hidden[x]) {
            (true, true) => h_even += 1,
            (true, false) => e_even += 1,
            (false, true) => h_odd += 1,
            (false, false) => e_odd += 1,
        }
    }
    let side = if h_odd >= h_even { Side::Odd } else { Side::Even };
    let on_side = |x: usize| even(x) == (side == Side::Even);

    // Stage 2: first the left/right neighbors of exposed opposite-parity
    // points that this stage hides, then the rest of the side by index.
    for x in 0..k {
        let exposed_opposite = in_qi[x] && !qi_hidden[x] && !on_side(x);
        if exposed_opposite && g.adjacent(x).all(|u| in_qi[u] || on_side(u)) {
            for d in [Direction::Left, Direction::Right] {
                if let Some(u) = g.neighbor(x, d) {
                    emit(u, &mut tau, &mut emitted);
                }
            }
        }
    }
    for x in 0..k {
        if on_side(x) {
            emit(x, &mut tau, &mut emitted);
        }
    }
    let end2 = tau.len();

    // Stage 3.
    for &x in &by_value {
        emit(x, &mut tau, &mut emitted);
    }

    let plan = StagePlan {
        s: part.s,
        chosen: (0..2 * part.s).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect(),
        q_i: (0..k).filter(|&x| in_qi[x]).map(|x| x + 1).collect(),
        e_even,
        e_odd,
        h_even,
        h_odd,
        bd_q_i: e_even + e_odd,
        second_stage_side: side,
        stage_ends: [end1, end2, k],
        sampled,
    };
    let order = EmbeddingOrder::new(pattern, tau).expect("every point is emitted once");
    debug_assert_eq!(check_stages(pattern, &order, &plan), Ok(()));
    (order, Some(plan))
}

/// Block subset with the smallest boundary; ties go to the lexicographically
/// smallest ascending index list.
fn best_subset(g: &IncidenceGraph, block: &[u32], s: usize) -> (u32, bool) {
    // Group points by (own block, blocks touched by the closed neighborhood).
    let mut groups: Vec<(u32, u32, u32)> = Vec::new();
    {
        let mut keyed: Vec<(u32, u32)> = (0..block.len())
            .map(|x| {
                let own = 1u32 << block[x];
                let touched = g.adjacent(x).fold(own, |m, u| m | 1 << block[u]);
                (own, touched)
            })
            .collect();
        keyed.sort_unstable();
        for (own, touched) in keyed {
            match groups.last_mut() {
                Some(last) if last.0 == own && last.1 == touched => last.2 += 1,
                _ => groups.push((own, touched, 1)),
            }
        }
    }
    let bd = |m: u32| -> u32 {
        groups
            .iter()
            .filter(|&&(own, touched, _)| own & m != 0 && touched & !m != 0)
            .map(|&(_, _, c)| c)
            .sum()
    };
    let parts = 2 * s;
    // lexicographically smaller ascending lists have larger bit reversals
    let key = |m: u32| (bd(m), std::cmp::Reverse(m.reverse_bits()));

    if s <= FULL_SCAN_MAX_S {
        let masks = subsets(parts, s);
        #[cfg(feature = "parallel")]
        let best = {
            use rayon::prelude::*;
            masks.par_iter().copied().min_by_key(|&m| key(m))
        };
        #[cfg(not(feature = "parallel"))]
        let best = masks.iter().copied().min_by_key(|&m| key(m));
        (best.expect("at least one subset"), false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_d0fb_10c5);
        let best = (0..SAMPLED_SUBSETS)
            .map(|_| sample(&mut rng, parts, s).iter().fold(0u32, |m, b| m | 1 << b))
            .min_by_key(|&m| key(m));
        (best.expect("at least one sample"), true)
    }
}

/// All `r`-subsets of `0..n` as bitmasks.
fn subsets(n: usize, r: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if r == 0 {
        return vec![0];
    }
    let mut m: u32 = (1 << r) - 1;
    let limit: u32 = 1 << n;
    while m < limit {
        out.push(m);
        // next mask with the same popcount
        let c = m & m.wrapping_neg();
        let r2 = m + c;
        m = (((r2 ^ m) >> 2) / c) | r2;
    }
    out
}

/// Stage-wise inequalities of the three-stage order, checked against the
/// actual profile. Returns the first violation.
pub fn check_stages(pattern: &Permutation, order: &EmbeddingOrder, plan: &StagePlan) -> Result<(), String> {
    let k = pattern.len();
    let prof = order.profile();
    let [end1, end2, end3] = plan.stage_ends;
    if end3 != k || end1 != plan.q_i.len() {
        return Err(format!("stage ends {:?} do not fit k={k}, |Q_I|={}", plan.stage_ends, plan.q_i.len()));
    }
    if plan.e_even + plan.e_odd + plan.h_even + plan.h_odd != plan.q_i.len() {
        return Err("exposed and hidden counts do not partition Q_I".into());
    }
    let want_side = if plan.h_odd >= plan.h_even { Side::Odd } else { Side::Even };
    if plan.second_stage_side != want_side {
        return Err("second-stage side contradicts the hidden counts".into());
    }
    if let Some(i) = (0..=end1).find(|&i| prof[i] > i) {
        return Err(format!("stage 1: boundary {} after {i} points", prof[i]));
    }
    if prof[end1] != plan.bd_q_i {
        return Err(format!("stage 1 ends with boundary {}, plan says {}", prof[end1], plan.bd_q_i));
    }
    let side_len = match plan.second_stage_side {
        Side::Even => k / 2,
        Side::Odd => k.div_ceil(2),
    };
    let limit2 = plan.bd_q_i
        + plan.h_even.min(plan.h_odd)
        + 2 * plan.s
        + side_len.saturating_sub(plan.q_i.len());
    if prof[end2] > limit2 {
        return Err(format!("stage 2 ends with boundary {} > {limit2}", prof[end2]));
    }
    let peak3 = prof[end2..].iter().copied().max().unwrap_or(0);
    if peak3 > prof[end2] + 1 {
        return Err(format!("stage 3 raises the boundary from {} to {peak3}", prof[end2]));
    }
    let g = IncidenceGraph::new(pattern);
    let mut rank = vec![0usize; k];
    for (i, &x) in order.tau().iter().enumerate() {
        rank[x - 1] = i;
    }
    for &x in &order.tau()[end2..] {
        if let Some(d) = g.neighbor(x - 1, Direction::Down) {
            if rank[d] > rank[x - 1] {
                return Err(format!("stage 3 point {x} precedes its lower neighbor {}", d + 1));
            }
        }
    }
    Ok(())
}

/// `(k/2 − 2s)·(s−1)(s−2)/((2s−1)(2s−2))`: the expected hidden count of a
/// uniformly random block subset, up to lower-order terms.
pub fn expected_hidden_bound(k: usize) -> f64 {
    let s = k.ilog2() as f64;
    (k as f64 / 2.0 - 2.0 * s) * (s - 1.0) * (s - 2.0) / ((2.0 * s - 1.0) * (2.0 * s - 2.0))
}

/// `bd` of the stage-1 set, recomputed from scratch.
#[cfg(test)]
fn boundary_of_q_i(pattern: &Permutation, plan: &StagePlan) -> usize {
    let g = IncidenceGraph::new(pattern);
    *super::profile_in(&g, plan.q_i.iter().map(|x| x - 1)).last().unwrap_or(&0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{boundary, PointSet};
    use rand::seq::SliceRandom;

    fn random_perm(k: usize, seed: u64) -> Permutation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<u32> = (1..=k as u32).collect();
        v.shuffle(&mut rng);
        Permutation::new(v).unwrap()
    }

    #[test]
    fn partition_shapes() {
        let p = interval_partition(16);
        assert_eq!(p.s, 4);
        assert_eq!(p.intervals.len(), 8);
        assert!(p.intervals.iter().all(|&(a, b)| b - a + 1 == 2));
        let p = interval_partition(30);
        assert_eq!(p.s, 4);
        let sizes: Vec<usize> = p.intervals.iter().map(|&(a, b)| b - a + 1).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 30);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        assert_eq!(p.intervals[0].0, 1);
        assert_eq!(p.intervals.last().unwrap().1, 30);
        assert_eq!(p.block_of_value(1), 0);
        assert_eq!(p.block_of_value(30), 7);
    }

    #[test]
    fn subset_enumeration_is_complete() {
        let all = subsets(8, 4);
        assert_eq!(all.len(), 70);
        assert!(all.iter().all(|m| m.count_ones() == 4));
        assert_eq!(subsets(4, 0), vec![0]);
    }

    #[test]
    fn chosen_subset_is_optimal_and_lexicographically_first() {
        for seed in 0..40 {
            let k = 16 + (seed as usize % 17);
            let p = random_perm(k, seed);
            let (_, plan) = order_m_with_plan(&p);
            let plan = plan.unwrap();
            let part = interval_partition(k);
            let bd_of = |chosen: &[usize]| {
                let set = PointSet::from_indices(
                    k,
                    (1..=k).filter(|&x| chosen.contains(&(part.block_of_value(p.value(x)) + 1))),
                );
                boundary(&p, &set).len()
            };
            assert_eq!(bd_of(&plan.chosen), plan.bd_q_i);
            assert_eq!(boundary_of_q_i(&p, &plan), plan.bd_q_i);
            let mut best: Option<(usize, Vec<usize>)> = None;
            for m in subsets(2 * part.s, part.s) {
                let c: Vec<usize> = (0..2 * part.s).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect();
                let cand = (bd_of(&c), c);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
            assert_eq!(best.unwrap().1, plan.chosen, "seed {seed}");
        }
    }

    #[test]
    fn stage_checks_hold_on_random_patterns() {
        for seed in 0..60 {
            let k = [4, 5, 7, 16, 30, 64, 128][seed as usize % 7];
            let p = random_perm(k, 100 + seed);
            let (o, plan) = order_m_with_plan(&p);
            let plan = plan.unwrap();
            assert_eq!(check_stages(&p, &o, &plan), Ok(()), "seed {seed} k {k}");
            assert!(o.bd_tau() <= k.div_ceil(2) + 2 * plan.s + 2, "seed {seed} k {k}");
        }
    }

    #[test]
    fn short_patterns_fall_back() {
        let p = Permutation::parse("2 3 1").unwrap();
        let (o, plan) = order_m_with_plan(&p);
        assert!(plan.is_none());
        assert_eq!(o.tau(), &[1, 2, 3]);
    }

    #[test]
    fn hidden_bound_holds_when_blocks_are_equal() {
        for seed in 0..10 {
            let p = random_perm(256, 500 + seed);
            let (_, plan) = order_m_with_plan(&p);
            assert!(plan.unwrap().hidden() as f64 >= expected_hidden_bound(256));
        }
    }
}
