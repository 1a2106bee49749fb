use crate::error::{Error, Result};
use crate::incidence::IncidenceGraph;
use crate::perm::Permutation;

use super::EmbeddingOrder;

/// Largest pattern accepted by [`vertex_separation_exact`]; the table has
/// `2^k` one-byte cells.
pub const EXACT_LIMIT: usize = 20;

/// Minimum of `bd_τ` over all orders, with an order attaining it.
///
/// `f(S) = max(|bd(S)|, min_{v ∈ S} f(S \ v))` over subsets `S`, where `S`
/// is the set embedded so far and `v` the last point embedded.
pub fn vertex_separation_exact(pattern: &Permutation) -> Result<(usize, EmbeddingOrder)> {
    let k = pattern.len();
    if k > EXACT_LIMIT {
        return Err(Error::TooLarge {
            what: "pattern for exact vertex separation",
            len: k,
            limit: EXACT_LIMIT,
        });
    }
    let g = IncidenceGraph::new(pattern);
    let nbr: Vec<u32> = (0..k)
        .map(|v| g.adjacent(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let full: u32 = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let bd = |s: u32| -> u8 {
        let mut c = 0;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if nbr[v] & !s != 0 {
                c += 1;
            }
        }
        c
    };
    let mut f = vec![0u8; 1usize << k];
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.min(f[(s & !(1 << v)) as usize]);
        }
        f[s as usize] = best.max(bd(s));
    }

    // Walk back from the full set, peeling a last point that attains f.
    let mut tau = vec![0usize; k];
    let mut s = full;
    for slot in (0..k).rev() {
        let target = f[s as usize];
        let v = (0..k as u32)
            .find(|&v| s & (1 << v) != 0 && f[(s & !(1 << v)) as usize] <= target)
            .expect("some point attains the minimum");
        tau[slot] = v as usize + 1;
        s &= !(1 << v);
    }
    let order = EmbeddingOrder::new(pattern, tau)?;
    let vsn = f[full as usize] as usize;
    debug_assert_eq!(order.bd_tau(), vsn);
    Ok((vsn, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn brute(p: &Permutation) -> usize {
        let k = p.len();
        (1..=k)
            .permutations(k)
            .map(|tau| EmbeddingOrder::new(p, tau).unwrap().bd_tau())
            .min()
            .unwrap_or(0)
    }

    #[test]
    fn small_examples() {
        assert_eq!(vertex_separation_exact(&Permutation::identity(3)).unwrap().0, 1);
        assert_eq!(vertex_separation_exact(&Permutation::identity(1)).unwrap().0, 0);
        let (v, o) = vertex_separation_exact(&Permutation::parse("2 4 1 3").unwrap()).unwrap();
        assert_eq!(o.bd_tau(), v);
        assert_eq!(v, brute(&Permutation::parse("2 4 1 3").unwrap()));
    }

    #[test]
    fn matches_brute_force_and_identity_bound() {
        for k in 1..=6 {
            for pv in (1..=k as u32).permutations(k) {
                let p = Permutation::new(pv).unwrap();
                let (v, o) = vertex_separation_exact(&p).unwrap();
                assert_eq!(o.bd_tau(), v, "{p}");
                assert!(v <= 2 * k / 3 + 1, "{p}");
                if k <= 5 {
                    assert_eq!(v, brute(&p), "{p}");
                }
            }
        }
    }

    #[test]
    fn refuses_large_patterns() {
        assert!(matches!(
            vertex_separation_exact(&Permutation::identity(EXACT_LIMIT + 1)),
            Err(Error::TooLarge { .. })
        ));
    }
}
