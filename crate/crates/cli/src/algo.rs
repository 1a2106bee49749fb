//! Algorithm identifiers and dispatch.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use ppm_core::bounds::binomial;
use ppm_core::{
    match_dp_with, match_even_odd_with, match_naive_with, DpOptions, EmbeddingOrder, EvenOddOptions,
    Limits, MatchResult, Permutation, Strategy,
};

/// Budget, in bits, for the even-odd candidate count `⌊k/2⌋·log₂ n` under `auto`.
pub const DEFAULT_AUTO_BUDGET: f64 = 32.0;

/// Tuple count below which `auto` runs the backtracking matcher.
pub const AUTO_NAIVE_TUPLES: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    Naive,
    EvenOdd,
    Dp(Strategy),
    Auto,
}

impl Algo {
    /// Every concrete algorithm, in report order.
    pub const CONCRETE: [Algo; 6] = [
        Algo::Naive,
        Algo::EvenOdd,
        Algo::Dp(Strategy::Identity),
        Algo::Dp(Strategy::EvenOdd),
        Algo::Dp(Strategy::M),
        Algo::Dp(Strategy::Separator),
    ];

    /// Resolves `auto` for a concrete instance size; other ids are unchanged.
    pub fn resolve(self, n: usize, k: usize, budget_bits: f64) -> Algo {
        if self != Algo::Auto {
            return self;
        }
        let small = binomial(n as u64, k.min(n) as u64).is_ok_and(|c| c < AUTO_NAIVE_TUPLES);
        if small {
            Algo::Naive
        } else if (k / 2) as f64 * (n.max(1) as f64).log2() <= budget_bits {
            Algo::EvenOdd
        } else {
            Algo::Dp(Strategy::M)
        }
    }

    /// Parses a comma-separated list; `all` expands to [`Algo::CONCRETE`].
    pub fn parse_list(s: &str) -> Result<Vec<Algo>> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok == "all" {
                out.extend(Algo::CONCRETE);
            } else {
                out.push(tok.parse()?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algo::Naive => f.write_str("naive"),
            Algo::EvenOdd => f.write_str("even-odd"),
            Algo::Dp(s) => write!(f, "dp:{}", s.name()),
            Algo::Auto => f.write_str("auto"),
        }
    }
}

impl FromStr for Algo {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "naive" => Algo::Naive,
            "even-odd" => Algo::EvenOdd,
            "auto" => Algo::Auto,
            "dp:identity" => Algo::Dp(Strategy::Identity),
            "dp:even-odd" => Algo::Dp(Strategy::EvenOdd),
            "dp:m" => Algo::Dp(Strategy::M),
            "dp:separator" => Algo::Dp(Strategy::Separator),
            _ => bail!(
                "unknown algorithm `{s}` (expected naive, even-odd, dp:identity, dp:even-odd, dp:m, dp:separator or auto)"
            ),
        })
    }
}

/// One finished query. `order` is set for the DP algorithms.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub algo: Algo,
    pub result: MatchResult,
    pub order: Option<EmbeddingOrder>,
}

/// Runs a concrete algorithm. Errors only when the order cannot be built,
/// e.g. the separator strategy on a non-planar pattern.
pub fn run(
    algo: Algo,
    text: &Permutation,
    pattern: &Permutation,
    want_witness: bool,
    limits: Limits,
) -> ppm_core::Result<Outcome> {
    let (result, order) = match algo {
        Algo::Naive => (match_naive_with(text, pattern, limits), None),
        Algo::EvenOdd => {
            let opts = EvenOddOptions {
                limits,
                ..Default::default()
            };
            (match_even_odd_with(text, pattern, opts), None)
        }
        Algo::Dp(strategy) => {
            let order = strategy.build(pattern)?;
            let opts = DpOptions {
                want_witness,
                limits,
                ..Default::default()
            };
            (match_dp_with(text, pattern, &order, opts), Some(order))
        }
        Algo::Auto => {
            let concrete = algo.resolve(text.len(), pattern.len(), DEFAULT_AUTO_BUDGET);
            return run(concrete, text, pattern, want_witness, limits);
        }
    };
    let mut result = result;
    if !want_witness {
        result.witness = None;
    }
    Ok(Outcome { algo, result, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for a in Algo::CONCRETE.into_iter().chain([Algo::Auto]) {
            assert_eq!(a.to_string().parse::<Algo>().unwrap(), a);
        }
        assert!("dp:exact".parse::<Algo>().is_err());
        assert_eq!(Algo::parse_list("all").unwrap().len(), 6);
        assert!(Algo::parse_list("").unwrap().is_empty());
    }

    #[test]
    fn auto_thresholds() {
        assert_eq!(Algo::Auto.resolve(8, 3, 32.0), Algo::Naive);
        // C(40, 10) ≈ 8.5e8 tuples, 5·log₂ 40 ≈ 26.6 bits
        assert_eq!(Algo::Auto.resolve(40, 10, 32.0), Algo::EvenOdd);
        assert_eq!(Algo::Auto.resolve(1000, 40, 32.0), Algo::Dp(Strategy::M));
        assert_eq!(Algo::Naive.resolve(1000, 40, 32.0), Algo::Naive);
    }
}
