//! Embedding orders and the strategies that build them.
//!
//! An order lists the pattern points in the sequence the dynamic program
//! embeds them. Its profile records `|bd(P_i)|` after each prefix; the
//! maximum of the profile governs the table width.

mod exact;
mod separator;
mod stage_m;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::incidence::IncidenceGraph;
use crate::perm::Permutation;

pub use exact::{vertex_separation_exact, EXACT_LIMIT};
pub use separator::{order_separator, separator_order_for_graph};
pub use stage_m::{
    check_stages, expected_hidden_bound, interval_partition, order_m, order_m_with_plan,
    IntervalPartition, Side, StagePlan, FULL_SCAN_MAX_S, SAMPLED_SUBSETS,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingOrder {
    /// 1-based pattern indices in embedding sequence.
    tau: Vec<usize>,
    /// `|bd(P_i)|` for `i = 0..=k`.
    profile: Vec<usize>,
}

impl EmbeddingOrder {
    pub fn new(pattern: &Permutation, tau: Vec<usize>) -> Result<Self> {
        let k = pattern.len();
        if tau.len() != k {
            return Err(Error::InvalidArgument(format!(
                "order has {} entries, pattern has {k}",
                tau.len()
            )));
        }
        let mut seen = vec![false; k];
        for &x in &tau {
            if x == 0 || x > k || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::InvalidArgument(format!(
                    "order is not a bijection on 1..={k} (entry {x})"
                )));
            }
        }
        let profile = boundary_profile(pattern, &tau);
        Ok(EmbeddingOrder { tau, profile })
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    /// `bd_τ(π)`: the largest boundary over all prefixes.
    pub fn bd_tau(&self) -> usize {
        self.profile.iter().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }
}

/// `|bd(P_i)|` for every prefix of `tau`, `i = 0..=k`.
pub fn boundary_profile(pattern: &Permutation, tau: &[usize]) -> Vec<usize> {
    let g = IncidenceGraph::new(pattern);
    profile_in(&g, tau.iter().map(|&x| x - 1))
}

/// Profile over a 0-based vertex sequence of `g`.
pub(crate) fn profile_in(g: &IncidenceGraph, seq: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    // number of distinct neighbors still outside
    let mut outside: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut size = 0usize;
    let mut profile = vec![0];
    for p in seq {
        inside[p] = true;
        if outside[p] > 0 {
            size += 1;
        }
        for u in g.adjacent(p) {
            outside[u] -= 1;
            if inside[u] && outside[u] == 0 {
                size -= 1;
            }
        }
        profile.push(size);
    }
    profile
}

/// Left to right by index.
pub fn order_identity(pattern: &Permutation) -> EmbeddingOrder {
    let tau: Vec<usize> = (1..=pattern.len()).collect();
    EmbeddingOrder::new(pattern, tau).expect("identity is a bijection")
}

/// Even-index points by index, then odd-index points by value: the order in
/// which the even-odd matcher fixes points.
pub fn order_even_odd(pattern: &Permutation) -> EmbeddingOrder {
    let part = crate::even_odd::even_odd_partition(pattern);
    let mut tau = part.even;
    tau.extend(part.odd_by_value);
    EmbeddingOrder::new(pattern, tau).expect("even/odd split is a bijection")
}

/// Named strategies, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Identity,
    EvenOdd,
    M,
    Separator,
    Exact,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Identity,
        Strategy::EvenOdd,
        Strategy::M,
        Strategy::Separator,
        Strategy::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Identity => "identity",
            Strategy::EvenOdd => "even-odd",
            Strategy::M => "m",
            Strategy::Separator => "separator",
            Strategy::Exact => "exact",
        }
    }

    pub fn build(self, pattern: &Permutation) -> Result<EmbeddingOrder> {
        match self {
            Strategy::Identity => Ok(order_identity(pattern)),
            Strategy::EvenOdd => Ok(order_even_odd(pattern)),
            Strategy::M => Ok(order_m(pattern)),
            Strategy::Separator => order_separator(pattern),
            Strategy::Exact => vertex_separation_exact(pattern).map(|(_, o)| o),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown order strategy `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{boundary, PointSet};

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn brute_profile(p: &Permutation, tau: &[usize]) -> Vec<usize> {
        let k = p.len();
        (0..=k)
            .map(|i| boundary(p, &PointSet::from_indices(k, tau[..i].iter().copied())).len())
            .collect()
    }

    #[test]
    fn incremental_profile_matches_definition() {
        for s in ["6 5 3 1 4 7 2", "6 3 8 5 4 2 1 7", "1", "2 1", "4 1 2 3 8 5 6 7"] {
            let p = perm(s);
            for o in [order_identity(&p), order_even_odd(&p)] {
                assert_eq!(o.profile(), brute_profile(&p, o.tau()).as_slice(), "{s}");
                assert_eq!(o.profile()[0], 0);
                assert_eq!(*o.profile().last().unwrap(), 0);
            }
        }
    }

    #[test]
    fn identity_order_examples() {
        let o = order_identity(&Permutation::identity(3));
        assert_eq!(o.tau(), &[1, 2, 3]);
        assert_eq!(o.bd_tau(), 1);
        assert_eq!(order_identity(&perm("1")).profile(), &[0, 0]);
        let fig = perm("6 5 3 1 4 7 2");
        assert!(order_identity(&fig).bd_tau() <= 2 * 7 / 3 + 1);
    }

    #[test]
    fn even_odd_order_examples() {
        assert_eq!(order_even_odd(&perm("2 3 1")).tau(), &[2, 3, 1]);
        assert_eq!(
            order_even_odd(&perm("6 3 8 5 4 2 1 7")).tau(),
            &[2, 4, 6, 8, 7, 5, 1, 3]
        );
    }

    #[test]
    fn rejects_non_bijection() {
        let p = perm("2 1 3");
        assert!(EmbeddingOrder::new(&p, vec![1, 1, 2]).is_err());
        assert!(EmbeddingOrder::new(&p, vec![1, 2]).is_err());
        assert!(EmbeddingOrder::new(&p, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn strategy_names_roundtrip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("bogus".parse::<Strategy>().is_err());
    }
}
