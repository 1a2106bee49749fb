//! Closed-form running-time bounds of the even-odd matcher.

use serde::Serialize;

use crate::error::{Error, Result};

/// Binary entropy `H(x) = −log₂(x^x (1−x)^(1−x))`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidArgument(format!("entropy: x = {x} is outside (0, 1)")));
    }
    Ok(-(x * x.log2() + (1.0 - x) * (1.0 - x).log2()))
}

/// `B(α) = (1−α)^(1−α) / (α^α (1−2α)^(1−2α))`, evaluated in the log domain.
pub fn bound_b(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let a = alpha;
    let ln = (1.0 - a) * (1.0 - a).ln() - a * a.ln() - (1.0 - 2.0 * a) * (1.0 - 2.0 * a).ln();
    Ok(ln.exp())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} is outside (0, 1/2)")));
    }
    Ok(())
}

/// The maximiser of `B`, `1/2 − 1/(2√5)`.
pub fn alpha_star() -> f64 {
    0.5 - 0.5 / 5f64.sqrt()
}

/// `α = k/(2n)` with the intermediates of the counting argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBound {
    pub alpha: f64,
    /// `β = α/(1−α)`.
    pub beta: f64,
    /// `m/n = 1 − α`.
    pub m_over_n: f64,
    pub b_value: f64,
    /// `2^((1−α) H(β))`, the form before simplification.
    pub entropy_form: f64,
}

impl AlphaBound {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let beta = alpha / (1.0 - alpha);
        let b_value = bound_b(alpha)?;
        let entropy_form = ((1.0 - alpha) * entropy(beta)?).exp2();
        Ok(AlphaBound {
            alpha,
            beta,
            m_over_n: 1.0 - alpha,
            b_value,
            entropy_form,
        })
    }

    /// `m = n − αn` for a concrete text length.
    pub fn m(&self, n: usize) -> f64 {
        n as f64 * self.m_over_n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanReport {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub points: u64,
    pub argmax: f64,
    pub max: f64,
}

/// Grid scan of `B` over `[lo, hi]`.
pub fn scan(lo: f64, hi: f64, step: f64) -> Result<ScanReport> {
    check_alpha(lo)?;
    check_alpha(hi)?;
    if step.is_nan() || step <= 0.0 || hi < lo {
        return Err(Error::InvalidArgument("scan: need lo <= hi and a positive step".into()));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as u64 + 1;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..count {
        // index-based stepping avoids accumulated drift
        let a = lo + i as f64 * step;
        let v = bound_b(a)?;
        if v > best.1 {
            best = (a, v);
        }
    }
    Ok(ScanReport {
        lo,
        hi,
        step,
        points: count,
        argmax: best.0,
        max: best.1,
    })
}

/// Exact `C(n, r)`; errors when an intermediate exceeds `u128`.
pub fn binomial(n: u64, r: u64) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc·(n−i)/(i+1) is exact; cancel the common factor first
        let (num, den) = ((n - i) as u128, i as u128 + 1);
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        acc = (acc / den)
            .checked_mul(num)
            .ok_or_else(|| Error::Overflow(format!("C({n}, {r})")))?;
    }
    Ok(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of even-point placements the even-odd matcher enumerates:
/// `C(n − k/2, k/2)` for even `k`, `C(n − 1 − ⌊k/2⌋, ⌊k/2⌋)` for odd `k`.
pub fn gap_count(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Err(Error::InvalidArgument(format!("gap_count: k = {k} exceeds n = {n}")));
    }
    let h = k / 2;
    binomial(n - k % 2 - h, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert!((entropy(0.25).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        for x in [0.01, 0.2, 0.37, 0.49] {
            assert!((entropy(x).unwrap() - entropy(1.0 - x).unwrap()).abs() < 1e-12);
        }
        assert!(entropy(0.0).is_err());
        assert!(entropy(1.0).is_err());
        assert!(entropy(f64::NAN).is_err());
    }

    #[test]
    fn b_values() {
        let b = bound_b(alpha_star()).unwrap();
        assert!(b > 1.6179 && b < 1.6181);
        // the maximum is the golden ratio
        assert!((b - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((bound_b(0.25).unwrap() - 1.611_854_9).abs() < 1e-6);
        assert!(bound_b(0.5).is_err());
        assert!(bound_b(0.0).is_err());
    }

    #[test]
    fn entropy_form_agrees() {
        for i in 1..500 {
            let a = i as f64 / 1000.0;
            let ab = AlphaBound::new(a).unwrap();
            assert!(((ab.entropy_form - ab.b_value) / ab.b_value).abs() < 1e-10, "alpha {a}");
        }
    }

    #[test]
    fn coarse_scan_finds_maximiser() {
        let r = scan(0.001, 0.499, 1e-4).unwrap();
        assert!((r.argmax - alpha_star()).abs() < 1e-3);
        assert!(r.max < 1.6181);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2).unwrap(), 15);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(130, 65).unwrap(), 95_067_625_827_960_698_145_584_333_020_095_113_100);
        assert!(matches!(binomial(400, 200), Err(Error::Overflow(_))));
    }

    #[test]
    fn gap_counts() {
        assert_eq!(gap_count(8, 4).unwrap(), 15);
        assert_eq!(gap_count(5, 0).unwrap(), 1);
        assert_eq!(gap_count(6, 6).unwrap(), 1);
        assert_eq!(gap_count(7, 7).unwrap(), 1);
        assert!(gap_count(3, 4).is_err());
    }
}
