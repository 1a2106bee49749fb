//! Permutations stored as value sequences together with their inverse.
//!
//! Positions and values are 1-based at the public surface, matching the
//! one-line text format `6 5 3 1 4 7 2`. Algorithms inside the crate use the
//! 0-based helpers `val0`/`pos0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(x, σ(x))` of a permutation drawn in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

impl Point {
    pub const fn new(x: usize, y: usize) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A bijection on `{1..n}`.
///
/// The empty permutation (`n = 0`) is representable; it is contained in
/// every text and is only meaningful as a degenerate pattern.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    values: Vec<u32>,
    inverse: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from 1-based values, rejecting anything that is
    /// not a bijection on `{1..n}`.
    pub fn new<I, T>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: TryInto<i64>,
    {
        let raw: Vec<i64> = values
            .into_iter()
            .map(|v| v.try_into().unwrap_or(i64::MIN))
            .collect();
        let n = raw.len();
        if n > u32::MAX as usize {
            return Err(Error::InvalidArgument("permutation too long".into()));
        }
        let mut inverse = vec![0u32; n];
        let mut values = Vec::with_capacity(n);
        for (i, &v) in raw.iter().enumerate() {
            if v < 1 || v > n as i64 {
                return Err(Error::ValueOutOfRange { value: v, len: n });
            }
            let slot = &mut inverse[(v - 1) as usize];
            if *slot != 0 {
                return Err(Error::DuplicateValue { value: v as u64 });
            }
            *slot = (i + 1) as u32;
            values.push(v as u32);
        }
        // With n values in range and no duplicates nothing can be missing,
        // so the check above is complete.
        Ok(Permutation { values, inverse })
    }

    pub fn identity(n: usize) -> Self {
        let values: Vec<u32> = (1..=n as u32).collect();
        Permutation {
            inverse: values.clone(),
            values,
        }
    }

    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        let mut inverse = vec![0u32; values.len()];
        for (i, &v) in values.iter().enumerate() {
            inverse[v as usize - 1] = (i + 1) as u32;
        }
        Permutation { values, inverse }
    }

    /// Parses one permutation from whitespace-separated 1-based values.
    ///
    /// Diagnostics name the first duplicate value in reading order, or the
    /// smallest missing value when the input is short of a bijection because
    /// of an out-of-range entry.
    pub fn parse(line: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("`{tok}` is not an integer")))?;
            raw.push(v);
        }
        let n = raw.len();
        let mut seen = vec![false; n];
        for &v in &raw {
            if v >= 1 && v <= n as i64 {
                let s = &mut seen[(v - 1) as usize];
                if *s {
                    return Err(Error::DuplicateValue { value: v as u64 });
                }
                *s = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            // Some entry is out of range; report what is absent, which is the
            // more useful message for hand-edited files.
            let bad = raw
                .iter()
                .copied()
                .find(|&v| v < 1 || v > n as i64)
                .unwrap_or_default();
            return Err(Error::Parse(format!(
                "value {} is missing (found out-of-range value {bad})",
                missing + 1
            )));
        }
        Permutation::new(raw)
    }

    /// Parses a file body: one permutation per line, blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_many(text: &str) -> Result<Vec<Self>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .map(|(no, l)| {
                Permutation::parse(l).map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `σ(x)` for 1-based `x`.
    pub fn value(&self, x: usize) -> usize {
        self.values[x - 1] as usize
    }

    /// `σ⁻¹(y)` for 1-based `y`.
    pub fn position(&self, y: usize) -> usize {
        self.inverse[y - 1] as usize
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn point(&self, x: usize) -> Point {
        Point::new(x, self.value(x))
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| Point::new(i + 1, v as usize))
    }

    pub fn contains_point(&self, p: Point) -> bool {
        p.x >= 1 && p.x <= self.len() && self.value(p.x) == p.y
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            values: self.inverse.clone(),
            inverse: self.values.clone(),
        }
    }

    #[inline]
    pub(crate) fn val0(&self, i: usize) -> usize {
        self.values[i] as usize - 1
    }

    #[inline]
    pub(crate) fn pos0(&self, v: usize) -> usize {
        self.inverse[v] as usize - 1
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<u32>::deserialize(d)?;
        Permutation::new(values).map_err(serde::de::Error::custom)
    }
}

/// Checks order-isomorphism of two equally long sequences of distinct keys.
pub(crate) fn same_order<A: Ord, B: Ord>(a: &[A], b: &[B]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..i).all(|j| (a[j] < a[i]) == (b[j] < b[i])))
}
