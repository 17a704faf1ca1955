//! Run traces: one JSONL record per round, preceded by a schema header.
//!
//! The format is append-only and byte-stable: identical runs produce
//! identical bytes, which the replay tooling relies on.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::thought::ThoughtId;

pub const TRACE_SCHEMA: &str = "cmptot.run-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub schema: String,
    pub version: u32,
}

impl Default for TraceHeader {
    fn default() -> Self {
        Self { schema: TRACE_SCHEMA.to_string(), version: TRACE_VERSION }
    }
}

/// Ledger for one round of the orchestrator loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    /// Candidate ids entering selection this round.
    pub candidates: Vec<ThoughtId>,
    /// Every match played, in play order.
    pub pairings: Vec<(ThoughtId, ThoughtId)>,
    /// Oracle queries spent this round.
    pub comparisons: usize,
    pub tokens_prompt: u64,
    pub tokens_completion: u64,
    /// Tournament survivors (before post-selection pruning/refill).
    pub selected: Vec<ThoughtId>,
    /// Remain list after the round.
    pub remain: Vec<ThoughtId>,
    /// Answer list after the round.
    pub answers: Vec<ThoughtId>,
    /// Thoughts pruned this round, with reasons.
    pub pruned: Vec<(ThoughtId, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub rounds: Vec<RoundRecord>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("missing schema header line")]
    MissingHeader,
    #[error("unsupported trace schema {schema:?} version {version}")]
    WrongSchema { schema: String, version: u32 },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

impl RunTrace {
    /// Serializes as JSONL: a header line then one record per round.
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&TraceHeader::default()).unwrap();
        out.push('\n');
        for round in &self.rounds {
            out.push_str(&serde_json::to_string(round).unwrap());
            out.push('\n');
        }
        out
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_jsonl().as_bytes())
    }

    pub fn from_jsonl(text: &str) -> Result<Self, TraceError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header_line) = lines.next().ok_or(TraceError::MissingHeader)?;
        let header: TraceHeader = serde_json::from_str(header_line)
            .map_err(|e| TraceError::Malformed { line: 1, reason: e.to_string() })?;
        if header.schema != TRACE_SCHEMA || header.version != TRACE_VERSION {
            return Err(TraceError::WrongSchema { schema: header.schema, version: header.version });
        }
        let mut rounds = Vec::new();
        for (i, line) in lines {
            let record: RoundRecord = serde_json::from_str(line)
                .map_err(|e| TraceError::Malformed { line: i + 1, reason: e.to_string() })?;
            rounds.push(record);
        }
        Ok(Self { rounds })
    }

    /// Total oracle comparisons across rounds.
    pub fn comparisons(&self) -> usize {
        self.rounds.iter().map(|r| r.comparisons).sum()
    }

    /// Total (prompt, completion) tokens across rounds.
    pub fn token_totals(&self) -> (u64, u64) {
        self.rounds
            .iter()
            .fold((0, 0), |(p, c), r| (p + r.tokens_prompt, c + r.tokens_completion))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(round: u32) -> RoundRecord {
        RoundRecord {
            round,
            candidates: vec![ThoughtId(1), ThoughtId(2)],
            pairings: vec![(ThoughtId(1), ThoughtId(2))],
            comparisons: 3,
            tokens_prompt: 10,
            tokens_completion: 4,
            selected: vec![ThoughtId(1)],
            remain: vec![ThoughtId(2)],
            answers: vec![],
            pruned: vec![(ThoughtId(9), "bad".into())],
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let trace = RunTrace { rounds: vec![record(1), record(2)] };
        let text = trace.to_jsonl();
        assert!(text.starts_with(r#"{"schema":"cmptot.run-trace","version":1}"#));
        assert_eq!(text.lines().count(), 3);
        let back = RunTrace::from_jsonl(&text).unwrap();
        assert_eq!(back, trace);
        assert_eq!(back.comparisons(), 6);
        assert_eq!(back.token_totals(), (20, 8));
    }

    #[test]
    fn header_is_required_and_checked() {
        assert!(matches!(RunTrace::from_jsonl(""), Err(TraceError::MissingHeader)));
        let bad = "{\"schema\":\"other\",\"version\":9}\n";
        assert!(matches!(RunTrace::from_jsonl(bad), Err(TraceError::WrongSchema { .. })));
    }

    #[test]
    fn field_names_are_stable() {
        let text = serde_json::to_string(&record(1)).unwrap();
        for field in [
            "round",
            "candidates",
            "pairings",
            "comparisons",
            "tokens_prompt",
            "tokens_completion",
            "selected",
            "remain",
            "answers",
            "pruned",
        ] {
            assert!(text.contains(&format!("\"{field}\"")), "missing {field} in {text}");
        }
    }
}
