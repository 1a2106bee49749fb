//! Machine-readable result records. Timing never appears inside a record so
//! that reports for the same command and seed compare byte for byte once
//! the separate `timing` object is dropped.

use std::path::Path;

use anyhow::{Context, Result};
use ppm_core::bounds::binomial;
use ppm_core::{EmbeddingOrder, Permutation};
use serde::{Deserialize, Serialize};

use crate::algo::Outcome;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderInfo {
    pub tau: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<usize>>,
    pub bd_tau: usize,
    /// `C(n, bd_tau)`, absent when it overflows 128 bits.
    pub width_bound: Option<u128>,
}

impl OrderInfo {
    pub fn new(order: &EmbeddingOrder, n: usize, with_profile: bool) -> Self {
        OrderInfo {
            tau: order.tau().to_vec(),
            profile: with_profile.then(|| order.profile().to_vec()),
            bd_tau: order.bd_tau(),
            width_bound: binomial(n as u64, order.bd_tau() as u64).ok(),
        }
    }
}

/// Completed, stopped by a limit, or not applicable to the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    TimedOut,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub n: usize,
    pub k: usize,
    pub algo: String,
    /// Concrete algorithm chosen by `auto`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved_algo: Option<String>,
    pub status: Status,
    /// `None` when the run stopped or was unsupported before deciding.
    pub contains: Option<bool>,
    pub witness: Option<Vec<usize>>,
    pub pattern_longer: bool,
    pub candidates: u64,
    pub peak_width: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seed: Option<u64>,
}

impl RunRecord {
    pub fn from_outcome(out: &Outcome, n: usize, k: usize, with_profile: bool) -> Self {
        let r = &out.result;
        let (status, contains) = if r.contains {
            (Status::Ok, Some(true))
        } else if r.timed_out {
            (Status::TimedOut, None)
        } else {
            (Status::Ok, Some(false))
        };
        RunRecord {
            family: None,
            n,
            k,
            algo: out.algo.to_string(),
            resolved_algo: None,
            status,
            contains,
            witness: r.witness.clone(),
            pattern_longer: r.pattern_longer,
            candidates: r.stats.candidates,
            peak_width: r.stats.peak_width,
            order: out.order.as_ref().map(|o| OrderInfo::new(o, n, with_profile)),
            error: None,
            seed: None,
        }
    }

    pub fn unsupported(algo: String, n: usize, k: usize, error: String) -> Self {
        RunRecord {
            family: None,
            n,
            k,
            algo,
            resolved_algo: None,
            status: Status::Unsupported,
            contains: None,
            witness: None,
            pattern_longer: false,
            candidates: 0,
            peak_width: 0,
            order: None,
            error: Some(error),
            seed: None,
        }
    }

    /// False only when a finished DP run exceeded `C(n, bd_tau)` entries.
    pub fn width_within_bound(&self) -> bool {
        match &self.order {
            Some(OrderInfo {
                width_bound: Some(b),
                ..
            }) => self.peak_width as u128 <= *b,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub time_ns: u64,
}

/// Reads a file holding one permutation. An empty file is the empty
/// permutation; lines starting with `#` are comments.
pub fn read_permutation(path: &Path) -> Result<Permutation> {
    let body = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut perms =
        Permutation::parse_many(&body).with_context(|| format!("parsing {}", path.display()))?;
    match perms.len() {
        0 => Ok(Permutation::identity(0)),
        1 => Ok(perms.pop().unwrap()),
        m => anyhow::bail!("{}: expected one permutation, found {m}", path.display()),
    }
}

/// The one-line text format.
pub fn format_permutation(p: &Permutation) -> String {
    format!("{p}\n")
}
