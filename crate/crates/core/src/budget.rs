use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

/// Limits on a single search. Absent fields are unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Stop as soon as a solution of this size is found.
    pub target: Option<usize>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_max_nodes(mut self, nodes: u64) -> Self {
        self.max_nodes = Some(nodes);
        self
    }

    pub fn with_max_time(mut self, time: Duration) -> Self {
        self.max_time = Some(time);
        self
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.target = Some(target);
        self
    }
}

/// Three-valued search outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Limits are polled every this many search nodes.
pub(crate) const CHECK_INTERVAL: u64 = 1024;

/// Node counter plus the budget it is checked against.
pub(crate) struct Meter {
    pub(crate) nodes: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    pub(crate) exhausted: bool,
    start: Instant,
}

impl Meter {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        let start = Instant::now();
        Meter {
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|t| start + t),
            exhausted: false,
            start,
        }
    }

    /// Counts one node; returns `false` once the budget is spent.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(CHECK_INTERVAL)
            && (self.max_nodes.is_some_and(|m| self.nodes >= m)
                || self.deadline.is_some_and(|d| Instant::now() >= d))
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}
