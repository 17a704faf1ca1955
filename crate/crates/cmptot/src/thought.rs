//! Tree nodes: one intermediate thought per node.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unique identifier of a thought within one run.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct ThoughtId(pub u64);

impl std::fmt::Display for ThoughtId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// Lifecycle of a thought.
///
/// Legal transitions: `Active -> {Active, Remain, Answer, Pruned}` and
/// `Remain -> {Active, Evicted}`. `Answer`, `Pruned` and `Evicted` are
/// terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThoughtStatus {
    /// In play: a fresh candidate or an expansion-frontier node.
    Active,
    /// Unselected but reserved; re-enters later candidate sets.
    Remain,
    /// Carries a final answer; never compared again.
    Answer,
    /// Rejected by a task rule or unparseable.
    Pruned,
    /// Dropped from the remain list after too many comparisons.
    Evicted,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("illegal status transition {from:?} -> {to:?} for {id}")]
pub struct StatusError {
    pub id: ThoughtId,
    pub from: ThoughtStatus,
    pub to: ThoughtStatus,
}

/// One node of the thought tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Thought {
    pub id: ThoughtId,
    /// The incremental step this node contributes; the full chain is the
    /// concatenation of contents from the root down to this node.
    pub content: String,
    pub parent: Option<ThoughtId>,
    /// Tree layer; the initial generation is layer 1.
    pub depth: u32,
    pub status: ThoughtStatus,
    /// Number of tournament matches this thought has played. Non-decreasing.
    pub compare_count: u32,
    /// Round in which the thought was generated.
    pub born_round: u32,
}

impl Thought {
    /// A first-layer thought (depth 1, no parent).
    pub fn root(id: ThoughtId, content: impl Into<String>, born_round: u32) -> Self {
        Self {
            id,
            content: content.into(),
            parent: None,
            depth: 1,
            status: ThoughtStatus::Active,
            compare_count: 0,
            born_round,
        }
    }

    /// A child thought; depth is always `parent.depth + 1`.
    pub fn child(id: ThoughtId, content: impl Into<String>, parent: &Thought, born_round: u32) -> Self {
        Self {
            id,
            content: content.into(),
            parent: Some(parent.id),
            depth: parent.depth + 1,
            status: ThoughtStatus::Active,
            compare_count: 0,
            born_round,
        }
    }

    /// Moves the thought along a legal status edge.
    pub fn set_status(&mut self, to: ThoughtStatus) -> Result<(), StatusError> {
        use ThoughtStatus::*;
        let ok = matches!(
            (self.status, to),
            (Active, Active) | (Active, Remain) | (Active, Answer) | (Active, Pruned)
                | (Remain, Active)
                | (Remain, Evicted)
        );
        if ok {
            self.status = to;
            Ok(())
        } else {
            Err(StatusError { id: self.id, from: self.status, to })
        }
    }

    /// Adds `n` played matches to the comparison counter.
    pub fn record_matches(&mut self, n: u32) {
        self.compare_count += n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn child_depth_is_parent_plus_one() {
        let root = Thought::root(ThoughtId(0), "a", 1);
        let kid = Thought::child(ThoughtId(1), "b", &root, 2);
        assert_eq!(root.depth, 1);
        assert_eq!(kid.depth, 2);
        assert_eq!(kid.parent, Some(root.id));
    }

    #[test]
    fn status_transitions() {
        use ThoughtStatus::*;
        let mut t = Thought::root(ThoughtId(0), "a", 1);
        assert!(t.set_status(Remain).is_ok());
        assert!(t.set_status(Active).is_ok());
        assert!(t.set_status(Answer).is_ok());
        // Answer is terminal.
        assert!(t.set_status(Active).is_err());
        assert!(t.set_status(Remain).is_err());

        let mut p = Thought::root(ThoughtId(1), "b", 1);
        p.set_status(Remain).unwrap();
        assert!(p.set_status(Evicted).is_ok());
        assert!(p.set_status(Active).is_err());

        let mut q = Thought::root(ThoughtId(2), "c", 1);
        // Remain -> Answer is not a legal edge; must pass through Active.
        q.set_status(Remain).unwrap();
        assert_eq!(
            q.set_status(Answer),
            Err(StatusError { id: ThoughtId(2), from: Remain, to: Answer })
        );
    }

    #[test]
    fn compare_count_monotone() {
        let mut t = Thought::root(ThoughtId(0), "a", 1);
        t.record_matches(2);
        t.record_matches(1);
        assert_eq!(t.compare_count, 3);
    }
}
