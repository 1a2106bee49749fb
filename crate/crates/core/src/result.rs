use serde::Serialize;
use web_time::{Duration, Instant};

/// Outcome of one containment query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchResult {
    pub contains: bool,
    /// Increasing 1-based text indices of an occurrence.
    pub witness: Option<Vec<usize>>,
    /// Set when the pattern is longer than the text.
    pub pattern_longer: bool,
    /// Set when a cooperative limit stopped the search; `contains` is then
    /// only meaningful if true.
    pub timed_out: bool,
    pub stats: Stats,
}

impl MatchResult {
    pub(crate) fn avoided(stats: Stats) -> Self {
        MatchResult {
            contains: false,
            witness: None,
            pattern_longer: false,
            timed_out: false,
            stats,
        }
    }

    pub(crate) fn found(witness: Option<Vec<usize>>, stats: Stats) -> Self {
        MatchResult {
            contains: true,
            witness,
            pattern_longer: false,
            timed_out: false,
            stats,
        }
    }

    pub(crate) fn too_long(stats: Stats) -> Self {
        MatchResult {
            pattern_longer: true,
            ..MatchResult::avoided(stats)
        }
    }

    pub(crate) fn stopped(stats: Stats) -> Self {
        MatchResult {
            timed_out: true,
            ..MatchResult::avoided(stats)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Candidates examined: index tuples (naive), initial even maps (even-odd)
    /// or table entries processed (dp).
    pub candidates: u64,
    /// Even-odd only: initial maps that passed the value-order check.
    pub accepted_candidates: u64,
    /// Text points inspected by inner loops.
    pub inner_steps: u64,
    /// Largest table generation (dp); 0 for the search-based matchers.
    pub peak_width: u64,
    /// Per-step table widths (dp).
    pub widths: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Cooperative limits, checked every few thousand inner steps.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub max_steps: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Limits {
            max_steps: None,
            deadline: Some(Instant::now() + timeout),
        }
    }

    pub fn with_max_steps(steps: u64) -> Self {
        Limits {
            max_steps: Some(steps),
            deadline: None,
        }
    }
}

/// Step counter that polls the clock only every `POLL` ticks.
pub(crate) struct Budget {
    limits: Limits,
    steps: u64,
    next_poll: u64,
    exhausted: bool,
}

const POLL: u64 = 4096;

impl Budget {
    pub(crate) fn new(limits: Limits) -> Self {
        Budget {
            limits,
            steps: 0,
            next_poll: POLL,
            exhausted: false,
        }
    }

    /// Records `n` steps; returns false once a limit is hit.
    #[inline]
    pub(crate) fn tick(&mut self, n: u64) -> bool {
        self.steps += n;
        if self.steps >= self.next_poll {
            self.next_poll = self.steps + POLL;
            if let Some(max) = self.limits.max_steps {
                if self.steps > max {
                    self.exhausted = true;
                }
            }
            if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    self.exhausted = true;
                }
            }
        }
        !self.exhausted
    }

    pub(crate) fn limits(&self) -> Limits {
        self.limits
    }

    pub(crate) fn mark_exhausted(&mut self) {
        self.exhausted = true;
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }
}
