//! Instance generators: uniform random permutations, the grid family
//! `π(a, b)`, Jordan permutations and rank reduction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Replaces every entry by its rank: `(5, 6, 3) → (2, 3, 1)`.
pub fn reduce<T: Ord>(seq: &[T]) -> Result<Permutation> {
    let mut idx: Vec<usize> = (0..seq.len()).collect();
    idx.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
    if idx.windows(2).any(|w| seq[w[0]] == seq[w[1]]) {
        return Err(Error::InvalidArgument("reduce: entries are not distinct".into()));
    }
    let mut values = vec![0u32; seq.len()];
    for (rank, &i) in idx.iter().enumerate() {
        values[i] = rank as u32 + 1;
    }
    Ok(Permutation::from_values_unchecked(values))
}

/// Uniform permutation of length `n`, reproducible from `seed`.
pub fn gen_random(n: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<u32> = (1..=n as u32).collect();
    values.shuffle(&mut rng);
    Permutation::from_values_unchecked(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridParams {
    a: usize,
    b: usize,
}

impl GridParams {
    /// `a` must be even and positive, `b` positive.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || a % 2 != 0 {
            return Err(Error::InvalidArgument(format!("grid: a = {a} must be even and positive")));
        }
        if b == 0 {
            return Err(Error::InvalidArgument("grid: b must be positive".into()));
        }
        Ok(GridParams { a, b })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn k(&self) -> usize {
        self.a * self.b
    }
}

/// `π(a, b)`: the reduction of `T_1 ‖ … ‖ T_b`, where `T_i` alternates the
/// descending evens of `[1+(i−1)a, ia]` with the ascending odds of
/// `[1+ia, (i+1)a]`, starting with an even.
pub fn gen_grid(params: GridParams) -> Permutation {
    let (a, b) = (params.a, params.b);
    let mut seq = Vec::with_capacity(a * b);
    for i in 1..=b {
        let left = ((1 + (i - 1) * a)..=(i * a)).rev().filter(|v| v % 2 == 0);
        let right = ((1 + i * a)..=((i + 1) * a)).filter(|v| v % 2 == 1);
        for (l, r) in left.zip(right) {
            seq.push(l);
            seq.push(r);
        }
    }
    reduce(&seq).expect("grid entries are distinct")
}

/// Largest `k` sampled by rejection; larger sizes grow a meander instead.
pub const REJECTION_MAX_K: usize = 32;
/// Attempts before rejection sampling gives up.
pub const REJECTION_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JordanMethod {
    Rejection,
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JordanReport {
    pub method: JordanMethod,
    /// Matching pairs drawn (rejection) or finger moves applied (growth).
    pub attempts: u64,
}

/// A Jordan permutation with `k` crossings.
///
/// A closed curve crossing a horizontal line `k` times is built, one of its
/// arcs is cut, and the line positions of the crossings are read along the
/// curve.
pub fn gen_jordan(k: usize, seed: u64) -> Result<Permutation> {
    gen_jordan_with_report(k, seed).map(|(p, _)| p)
}

pub fn gen_jordan_with_report(k: usize, seed: u64) -> Result<(Permutation, JordanReport)> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidArgument(format!("jordan: k = {k} must be even and at least 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cycle, report) = if k <= REJECTION_MAX_K {
        let mut attempts = 0;
        loop {
            if attempts == REJECTION_BUDGET {
                return Err(Error::RejectionBudgetExhausted { attempts });
            }
            attempts += 1;
            let upper = random_matching(k, &mut rng);
            let lower = random_matching(k, &mut rng);
            if let Some(c) = single_loop(&upper, &lower) {
                break (c, JordanReport { method: JordanMethod::Rejection, attempts });
            }
        }
    } else {
        let c = grow_meander(k, &mut rng);
        (c, JordanReport { method: JordanMethod::Growth, attempts: (k / 2 - 1) as u64 })
    };
    // Cut the arc between cycle[cut] and cycle[cut + 1] and read onwards.
    let cut = rng.random_range(0..k);
    let mut values: Vec<u32> = (1..=k).map(|i| cycle[(cut + i) % k] as u32 + 1).collect();
    if rng.random_bool(0.5) {
        values.reverse();
    }
    Ok((Permutation::from_values_unchecked(values), report))
}

/// Uniform noncrossing perfect matching of `0..k` (cycle lemma on a random
/// sequence of `k/2` openers and `k/2 + 1` closers).
fn random_matching<R: Rng>(k: usize, rng: &mut R) -> Vec<usize> {
    let m = k / 2;
    let mut steps: Vec<i32> = std::iter::repeat_n(1, m).chain(std::iter::repeat_n(-1, m + 1)).collect();
    steps.shuffle(rng);
    // rotate to start right after the first minimum of the prefix sums
    let (mut sum, mut low, mut at) = (0, 0, 0);
    for (i, s) in steps.iter().enumerate() {
        sum += s;
        if sum < low {
            low = sum;
            at = i + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(at % len);
    let mut mate = vec![0usize; k];
    let mut open = Vec::with_capacity(m);
    for (i, &s) in steps[..k].iter().enumerate() {
        if s == 1 {
            open.push(i);
        } else {
            let j = open.pop().expect("balanced word");
            mate[i] = j;
            mate[j] = i;
        }
    }
    mate
}

/// Crossings in curve order if the two matchings form one closed curve.
fn single_loop(upper: &[usize], lower: &[usize]) -> Option<Vec<usize>> {
    let k = upper.len();
    let mut cycle = Vec::with_capacity(k);
    let mut v = 0;
    loop {
        cycle.push(v);
        let u = upper[v];
        cycle.push(u);
        v = lower[u];
        if v == 0 {
            break;
        }
    }
    (cycle.len() == k).then_some(cycle)
}

/// Grows a closed meander by finger moves: an arc is pushed across the line
/// through a gap of a face it borders, adding two adjacent crossings.
fn grow_meander<R: Rng>(k: usize, rng: &mut R) -> Vec<usize> {
    // curve order of line positions; consecutive entries (cyclically) form
    // arcs, alternating upper and lower starting with upper
    let mut cycle: Vec<usize> = vec![0, 1];
    while cycle.len() < k {
        let n = cycle.len();
        let arc = rng.random_range(0..n);
        let upper_side = arc % 2 == 0;
        let (p0, q0) = (cycle[arc], cycle[(arc + 1) % n]);
        let (p, q) = (p0.min(q0), p0.max(q0));

        // innermost arc on this side over every gap; gap g lies between
        // positions g-1 and g, gap 0 and gap n are unbounded
        let mut mate = vec![0usize; n];
        for i in (0..n).filter(|i| (i % 2 == 0) == upper_side) {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            mate[a] = b;
            mate[b] = a;
        }
        let mut face = vec![usize::MAX; n + 1];
        let mut stack: Vec<usize> = Vec::new();
        for g in 0..=n {
            if g > 0 {
                let pos = g - 1;
                if mate[pos] > pos {
                    stack.push(pos);
                } else {
                    stack.pop();
                }
            }
            face[g] = stack.last().copied().unwrap_or(usize::MAX);
        }
        let inner = p;
        let outer = face[p];
        let gaps: Vec<usize> = (0..=n).filter(|&g| face[g] == inner || face[g] == outer).collect();
        let g = gaps[rng.random_range(0..gaps.len())];

        // new crossings at g and g+1; positions at or after g shift by two
        let shift = |x: usize| if x >= g { x + 2 } else { x };
        let (c1, c2) = (g, g + 1);
        // (a, b): the new arcs on this side are {p, a} and {b, q}
        let (a, b) = if g > p && g <= q { (c1, c2) } else { (c2, c1) };
        let mut next = Vec::with_capacity(n + 2);
        for (i, &x) in cycle.iter().enumerate() {
            next.push(shift(x));
            if i == arc {
                if p0 == p {
                    next.extend([a, b]);
                } else {
                    next.extend([b, a]);
                }
            }
        }
        cycle = next;
    }
    cycle
}
