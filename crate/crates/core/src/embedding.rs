//! Partial embeddings of a pattern into a text and their validation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::incidence::{Direction, IncidenceGraph};
use crate::perm::Permutation;

/// A map from some pattern points to text points, both identified by their
/// 1-based index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialEmbedding {
    images: Vec<Option<usize>>,
}

impl PartialEmbedding {
    /// The empty map for a pattern of length `k`.
    pub fn empty(k: usize) -> Self {
        PartialEmbedding {
            images: vec![None; k],
        }
    }

    /// Full embedding sending pattern index `j` to `witness[j-1]`.
    pub fn from_witness(witness: &[usize]) -> Self {
        PartialEmbedding {
            images: witness.iter().map(|&x| Some(x)).collect(),
        }
    }

    pub fn pattern_len(&self) -> usize {
        self.images.len()
    }

    pub fn set(&mut self, pattern_x: usize, text_x: usize) {
        self.images[pattern_x - 1] = Some(text_x);
    }

    pub fn get(&self, pattern_x: usize) -> Option<usize> {
        self.images.get(pattern_x.wrapping_sub(1)).copied().flatten()
    }

    /// `(pattern index, text index)` pairs in pattern-index order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter_map(|(j, t)| t.map(|t| (j + 1, t)))
    }

    pub fn domain_len(&self) -> usize {
        self.images.iter().flatten().count()
    }

    pub fn is_full(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    /// The image as a witness index tuple, if the map is total.
    pub fn witness(&self) -> Option<Vec<usize>> {
        self.images.iter().copied().collect()
    }
}

/// Checks a candidate map: injective, order-preserving in both coordinates
/// on its domain, and satisfying the neighbor conditions on every induced
/// edge of the pattern's incidence graph.
///
/// With a total domain this accepts exactly the witnesses of containment.
pub fn validate_embedding(
    text: &Permutation,
    pattern: &Permutation,
    map: &PartialEmbedding,
) -> Result<bool> {
    if map.pattern_len() != pattern.len() {
        return Err(Error::InvalidArgument(format!(
            "map is over {} pattern points, pattern has {}",
            map.pattern_len(),
            pattern.len()
        )));
    }
    let n = text.len();
    let pairs: Vec<(usize, usize)> = map.pairs().collect();
    for &(_, t) in &pairs {
        if t == 0 || t > n {
            return Err(Error::InvalidArgument(format!(
                "target index {t} is not a point of the text (length {n})"
            )));
        }
    }
    for (i, &(pa, ta)) in pairs.iter().enumerate() {
        for &(pb, tb) in &pairs[..i] {
            if ta == tb {
                return Ok(false);
            }
            // pairs are sorted by pattern index, so pb < pa
            if tb >= ta {
                return Ok(false);
            }
            if (pattern.value(pb) < pattern.value(pa)) != (text.value(tb) < text.value(ta)) {
                return Ok(false);
            }
        }
    }
    let g = IncidenceGraph::new(pattern);
    for &(pa, ta) in &pairs {
        let v = pa - 1;
        for d in Direction::ALL {
            let Some(u) = g.neighbor(v, d) else { continue };
            let Some(tu) = map.get(u + 1) else { continue };
            let ok = match d {
                Direction::Left => tu < ta,
                Direction::Right => ta < tu,
                Direction::Down => text.value(tu) < text.value(ta),
                Direction::Up => text.value(ta) < text.value(tu),
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff `witness` is a strictly increasing index tuple into `text` whose
/// values are order-isomorphic to `pattern`.
pub fn is_witness(text: &Permutation, pattern: &Permutation, witness: &[usize]) -> bool {
    if witness.len() != pattern.len() {
        return false;
    }
    if witness.iter().any(|&x| x == 0 || x > text.len()) {
        return false;
    }
    if witness.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    let vals: Vec<usize> = witness.iter().map(|&x| text.value(x)).collect();
    crate::perm::same_order(&vals, pattern.values())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn intro_example_is_valid() {
        let t = perm("1 5 4 6 3 7 8 2");
        let p = perm("2 3 1");
        let f = PartialEmbedding::from_witness(&[2, 4, 5]);
        assert!(validate_embedding(&t, &p, &f).unwrap());
        assert!(is_witness(&t, &p, &[2, 4, 5]));
        let g = PartialEmbedding::from_witness(&[1, 2, 3]);
        assert!(!validate_embedding(&t, &p, &g).unwrap());
    }

    #[test]
    fn empty_map_is_valid() {
        let t = perm("3 1 2");
        let p = perm("2 1");
        assert!(validate_embedding(&t, &p, &PartialEmbedding::empty(2)).unwrap());
    }

    #[test]
    fn non_injective_rejected() {
        let t = perm("1 2");
        let p = perm("1 2");
        let f = PartialEmbedding::from_witness(&[1, 1]);
        assert!(!validate_embedding(&t, &p, &f).unwrap());
    }

    #[test]
    fn out_of_range_target_is_an_error() {
        let t = perm("1 2");
        let p = perm("1");
        let f = PartialEmbedding::from_witness(&[3]);
        assert!(matches!(
            validate_embedding(&t, &p, &f),
            Err(Error::InvalidArgument(_))
        ));
    }
}
