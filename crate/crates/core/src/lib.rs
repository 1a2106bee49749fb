//! Permutation pattern matching.
//!
//! Three matchers decide whether a text permutation contains a pattern: a
//! backtracking oracle ([`naive`]), the polynomial-space even-odd search
//! ([`even_odd`]) and a dynamic program over boundary-restricted partial
//! embeddings ([`dp`]) driven by an embedding order from [`orders`].

pub mod bounds;
pub mod dp;
pub mod embedding;
pub mod error;
pub mod even_odd;
pub mod generators;
pub mod incidence;
pub mod naive;
pub mod orders;
pub mod perm;
pub mod planar;
pub mod result;

pub use dp::{match_dp, match_dp_with, DpOptions};
pub use embedding::{is_witness, validate_embedding, PartialEmbedding};
pub use error::{Error, Result};
pub use even_odd::{match_even_odd, match_even_odd_with, EvenOddOptions};
pub use incidence::{boundary, incidence_graph, neighbors, IncidenceGraph, PointSet};
pub use naive::{match_naive, match_naive_with};
pub use orders::{EmbeddingOrder, Strategy};
pub use perm::{Permutation, Point};
pub use planar::is_planar;
pub use result::{Limits, MatchResult, Stats};
