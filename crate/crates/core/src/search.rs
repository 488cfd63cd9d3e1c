//! Budgets and three-valued outcomes shared by every backtracking search.

/// Limits for a backtracking search.
///
/// `seed == 0` keeps candidate values in ascending order; any other seed
/// shuffles them deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_nodes: u64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_nodes: 10_000_000, seed: 0 }
    }
}

impl SearchConfig {
    pub fn with_max_nodes(max_nodes: u64) -> Self {
        SearchConfig { max_nodes, ..Default::default() }
    }
}

/// Result of a bounded search: a witness, a proof of absence, or an
/// exhausted budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Absent,
    Exhausted,
}

impl<T> Outcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Outcome::Absent)
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, Outcome::Exhausted)
    }

    /// `Some(true)` when found, `Some(false)` when absent, `None` when the
    /// budget ran out.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Outcome::Found(_) => Some(true),
            Outcome::Absent => Some(false),
            Outcome::Exhausted => None,
        }
    }

    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Absent => Outcome::Absent,
            Outcome::Exhausted => Outcome::Exhausted,
        }
    }
}

/// Node counter shared across one search (and its sub-searches).
#[derive(Debug, Clone)]
pub(crate) struct Budget {
    used: u64,
    max: u64,
}

/// Marker returned when the node budget is spent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OutOfBudget;

impl Budget {
    pub fn new(max: u64) -> Self {
        Budget { used: 0, max }
    }

    pub fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.used += 1;
        if self.used > self.max {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.max.saturating_sub(self.used)
    }

    /// Counts `nodes` spent elsewhere against this budget.
    pub fn charge(&mut self, nodes: u64) -> Result<(), OutOfBudget> {
        self.used += nodes;
        if self.used > self.max {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }
}
