//! Task adapters: prompt construction, output parsing, pruning predicates
//! and answer validation for the three benchmark tasks, plus a synthetic
//! task for simulation runs.
//!
//! Adapters are pure given their inputs (one adapter instance per problem
//! instance) and safe for concurrent use.

pub mod data;
pub mod game24;
pub mod prompts;
pub mod qa;
pub mod sim;
pub mod sudoku;
mod templates;

use serde::{Deserialize, Serialize};

pub use prompts::TaskKind;

/// How each round's candidate set is replenished from the remain list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefillPolicy {
    /// Every unselected prior thought re-enters the comparison.
    #[serde(rename = "keep-all")]
    KeepAll,
    /// Top up new thoughts from the remain list until there are 2K of
    /// them (only when at most 2K were generated).
    #[serde(rename = "topup-2k")]
    TopUp2K,
    /// Candidates are the new thoughts only; after selection, the select
    /// list is topped up from the remain list until K or exhaustion.
    #[serde(rename = "refill-to-k")]
    RefillToK,
}

/// Per-task default tree shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskDefaults {
    pub depth_t: usize,
    pub fanout_m: usize,
    pub select_k: usize,
}

/// One generation request; each request is a single chat completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenRequest {
    pub prompt: String,
}

/// Task-specific behavior plugged into the orchestrator loop.
pub trait TaskAdapter: Send + Sync {
    fn name(&self) -> &'static str;

    fn kind(&self) -> TaskKind;

    fn defaults(&self) -> TaskDefaults;

    fn refill_policy(&self) -> RefillPolicy;

    /// Whether the run terminates as soon as an answer enters the answer
    /// list (Game of 24, Sudoku) or keeps collecting answers (QA).
    fn stop_on_first_answer(&self) -> bool;

    /// Prompts for generating children of the thought whose chain is
    /// given (`None` for the initial layer). `m` is the requested fan-out;
    /// tasks with variable fan-out may issue fewer requests.
    fn generation_requests(&self, chain: Option<&[String]>, m: usize) -> Vec<GenRequest>;

    /// New thought contents parsed out of one generation reply.
    fn parse_generation(&self, reply: &str, chain: Option<&[String]>) -> Vec<String>;

    /// The text standing in for this thought in a comparison prompt.
    fn comparison_payload(&self, chain: &[String]) -> String;

    /// A filled comparison prompt for two payloads, variant in 1..=3.
    fn comparison_prompt(&self, input_1: &str, input_2: &str, variant: u8) -> String;

    /// Pre-selection pruning; malformed content is always caught here.
    /// Returns the prune reason.
    fn prune_early(&self, chain: &[String]) -> Option<String>;

    /// Post-selection pruning (taskwise validity applied to both selected
    /// and unselected thoughts).
    fn prune_late(&self, chain: &[String]) -> Option<String>;

    /// The final answer carried by this chain, if any. Only answers that
    /// pass the task's own validity check are reported.
    fn detect_answer(&self, chain: &[String]) -> Option<String>;

    /// Scores a final answer against the instance ground truth.
    fn score(&self, answer: &str) -> bool;
}

// ---------------------------------------------------------------------------
// Multiple-choice QA
// ---------------------------------------------------------------------------

/// AQuA-style multiple choice over options A..=E.
pub struct QaTask {
    question: String,
    correct: Option<char>,
}

impl QaTask {
    pub fn new(question: impl Into<String>, correct: Option<char>) -> Self {
        Self { question: question.into(), correct }
    }

    pub fn question(&self) -> &str {
        &self.question
    }
}

impl TaskAdapter for QaTask {
    fn name(&self) -> &'static str {
        "qa"
    }

    fn kind(&self) -> TaskKind {
        TaskKind::Qa
    }

    fn defaults(&self) -> TaskDefaults {
        TaskDefaults { depth_t: 3, fanout_m: 12, select_k: 3 }
    }

    fn refill_policy(&self) -> RefillPolicy {
        RefillPolicy::KeepAll
    }

    fn stop_on_first_answer(&self) -> bool {
        false
    }

    fn generation_requests(&self, chain: Option<&[String]>, m: usize) -> Vec<GenRequest> {
        // The same zero-shot prompt is sampled m times; on continuation
        // rounds the chain so far is appended after the template.
        let mut prompt = prompts::qa_generation_prompt(&self.question);
        if let Some(chain) = chain {
            prompt.push('\n');
            prompt.push_str(&chain.join("\n"));
        }
        (0..m).map(|_| GenRequest { prompt: prompt.clone() }).collect()
    }

    fn parse_generation(&self, reply: &str, _chain: Option<&[String]>) -> Vec<String> {
        let text = reply.trim();
        if text.is_empty() {
            Vec::new()
        } else {
            vec![text.to_string()]
        }
    }

    fn comparison_payload(&self, chain: &[String]) -> String {
        chain.join("\n")
    }

    fn comparison_prompt(&self, input_1: &str, input_2: &str, variant: u8) -> String {
        prompts::build_comparison_prompt(TaskKind::Qa, input_1, input_2, variant, None)
    }

    fn prune_early(&self, _chain: &[String]) -> Option<String> {
        None
    }

    fn prune_late(&self, _chain: &[String]) -> Option<String> {
        None
    }

    fn detect_answer(&self, chain: &[String]) -> Option<String> {
        let last = chain.last()?;
        qa::parse_answer_letter(last).map(|c| c.to_string())
    }

    fn score(&self, answer: &str) -> bool {
        match self.correct {
            Some(c) => answer.trim().eq_ignore_ascii_case(&c.to_string()),
            None => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Game of 24
// ---------------------------------------------------------------------------

use game24::{format_values, Game24State, Value};

/// Reach 24 from four numbers with `+ - * /`.
pub struct Game24Task {
    numbers: Vec<Value>,
    /// Optional extra pruning gate: drop states from which 24 is
    /// unreachable (brute-force check). Off by default; the standard rule
    /// only eliminates single leftovers that are not 24.
    solvable_gate: bool,
}

impl Game24Task {
    pub fn new(numbers: [i64; 4]) -> Self {
        Self { numbers: game24::values(&numbers), solvable_gate: false }
    }

    pub fn with_solvable_gate(mut self, on: bool) -> Self {
        self.solvable_gate = on;
        self
    }

    pub fn numbers(&self) -> &[Value] {
        &self.numbers
    }

    /// Replays a chain of step/answer lines into a state.
    fn replay(&self, chain: &[String]) -> Result<Game24State, String> {
        let mut state = Game24State::new(&self.numbers);
        for content in chain {
            let content = content.trim();
            if let Some(expr) = content.strip_prefix("Answer:") {
                state.answer_expr = Some(expr.trim().to_string());
            } else {
                let step = game24::parse_step(content).map_err(|e| e.to_string())?;
                state.apply(step).map_err(|e| e.to_string())?;
            }
        }
        Ok(state)
    }
}

impl TaskAdapter for Game24Task {
    fn name(&self) -> &'static str {
        "game24"
    }

    fn kind(&self) -> TaskKind {
        TaskKind::Game24
    }

    fn defaults(&self) -> TaskDefaults {
        TaskDefaults { depth_t: 6, fanout_m: 6, select_k: 5 }
    }

    fn refill_policy(&self) -> RefillPolicy {
        RefillPolicy::TopUp2K
    }

    fn stop_on_first_answer(&self) -> bool {
        true
    }

    fn generation_requests(&self, chain: Option<&[String]>, _m: usize) -> Vec<GenRequest> {
        // One request per parent; the reply carries a variable number of
        // next steps (or the final formula once one number remains).
        let state = match chain {
            Some(chain) => match self.replay(chain) {
                Ok(s) => s,
                Err(_) => return Vec::new(),
            },
            None => Game24State::new(&self.numbers),
        };
        let prompt = if state.remaining.len() == 1 {
            let mut p = prompts::g24_answer_prompt(&format_values(&self.numbers));
            p.push_str("\nSteps:\n");
            for step in &state.steps {
                p.push_str(&format!(
                    "{} {} {} = {} (left: {})\n",
                    game24::format_value(&step.a),
                    step.op,
                    game24::format_value(&step.b),
                    game24::format_value(&step.result),
                    format_values(&step.left),
                ));
            }
            p
        } else {
            prompts::g24_steps_prompt(&format_values(&state.remaining))
        };
        vec![GenRequest { prompt }]
    }

    fn parse_generation(&self, reply: &str, _chain: Option<&[String]>) -> Vec<String> {
        // An answer line ends the chain; otherwise every well-formed step
        // line becomes its own thought.
        for line in reply.lines() {
            let line = line.trim();
            if line.starts_with("Answer:") {
                return vec![line.to_string()];
            }
        }
        reply
            .lines()
            .map(str::trim)
            .filter(|l| game24::parse_step(l).is_ok())
            .map(str::to_string)
            .collect()
    }

    fn comparison_payload(&self, chain: &[String]) -> String {
        // Comparisons weigh the groups of remaining numbers.
        match self.replay(chain) {
            Ok(state) => format_values(&state.remaining),
            Err(_) => chain.last().cloned().unwrap_or_default(),
        }
    }

    fn comparison_prompt(&self, input_1: &str, input_2: &str, variant: u8) -> String {
        prompts::build_comparison_prompt(TaskKind::Game24, input_1, input_2, variant, None)
    }

    fn prune_early(&self, chain: &[String]) -> Option<String> {
        let state = match self.replay(chain) {
            Ok(s) => s,
            Err(reason) => return Some(reason),
        };
        if let Some(expr) = &state.answer_expr {
            if let Err(e) = game24::validate_answer(expr, &self.numbers) {
                return Some(e.to_string());
            }
            return None;
        }
        if state.remaining.len() == 1 && state.remaining[0] != game24::target() {
            return Some(format!(
                "single remaining number {} is not 24",
                game24::format_value(&state.remaining[0])
            ));
        }
        if self.solvable_gate && !game24::solvable(&state.remaining) {
            return Some(format!("24 is unreachable from {}", format_values(&state.remaining)));
        }
        None
    }

    fn prune_late(&self, _chain: &[String]) -> Option<String> {
        None
    }

    fn detect_answer(&self, chain: &[String]) -> Option<String> {
        let state = self.replay(chain).ok()?;
        let expr = state.answer_expr?;
        game24::validate_answer(&expr, &self.numbers).ok()?;
        Some(expr)
    }

    fn score(&self, answer: &str) -> bool {
        game24::validate_answer(answer, &self.numbers).is_ok()
    }
}

// ---------------------------------------------------------------------------
// Sudoku
// ---------------------------------------------------------------------------

use sudoku::SudokuGrid;

/// Latin-square Sudoku completion (row/column constraints only).
pub struct SudokuTask {
    givens: SudokuGrid,
}

impl SudokuTask {
    pub fn new(givens: SudokuGrid) -> Self {
        Self { givens }
    }

    pub fn givens(&self) -> &SudokuGrid {
        &self.givens
    }

    fn latest_grid(&self, chain: &[String]) -> Result<SudokuGrid, String> {
        match chain.last() {
            Some(content) => sudoku::parse_array(content.trim()).map_err(|e| e.to_string()),
            None => Ok(self.givens.clone()),
        }
    }
}

impl TaskAdapter for SudokuTask {
    fn name(&self) -> &'static str {
        "sudoku"
    }

    fn kind(&self) -> TaskKind {
        TaskKind::Sudoku
    }

    fn defaults(&self) -> TaskDefaults {
        TaskDefaults { depth_t: 15, fanout_m: 5, select_k: 3 }
    }

    fn refill_policy(&self) -> RefillPolicy {
        RefillPolicy::RefillToK
    }

    fn stop_on_first_answer(&self) -> bool {
        true
    }

    fn generation_requests(&self, chain: Option<&[String]>, m: usize) -> Vec<GenRequest> {
        let question = match chain {
            Some(chain) => match self.latest_grid(chain) {
                Ok(g) => g.render(),
                Err(_) => return Vec::new(),
            },
            None => self.givens.render(),
        };
        let prompt = prompts::sudoku_generation_prompt(self.givens.size(), &question);
        (0..m).map(|_| GenRequest { prompt: prompt.clone() }).collect()
    }

    fn parse_generation(&self, reply: &str, _chain: Option<&[String]>) -> Vec<String> {
        // Canonicalize parseable grids; keep raw text otherwise so the
        // early prune records a reason instead of silently dropping it.
        match sudoku::parse_reply(reply) {
            Ok(grid) => vec![grid.render()],
            Err(_) => {
                let text = reply.trim();
                if text.is_empty() {
                    Vec::new()
                } else {
                    vec![text.to_string()]
                }
            }
        }
    }

    fn comparison_payload(&self, chain: &[String]) -> String {
        chain.last().cloned().unwrap_or_else(|| self.givens.render())
    }

    fn comparison_prompt(&self, input_1: &str, input_2: &str, variant: u8) -> String {
        prompts::build_comparison_prompt(
            TaskKind::Sudoku,
            input_1,
            input_2,
            variant,
            Some(self.givens.size()),
        )
    }

    fn prune_early(&self, chain: &[String]) -> Option<String> {
        match self.latest_grid(chain) {
            Ok(_) => None,
            Err(reason) => Some(reason),
        }
    }

    fn prune_late(&self, chain: &[String]) -> Option<String> {
        let grid = match self.latest_grid(chain) {
            Ok(g) => g,
            Err(reason) => return Some(reason),
        };
        let check = sudoku::check(&grid, &self.givens);
        if !check.consistent {
            return Some("duplicate number in a row or column".to_string());
        }
        if !check.respects_givens {
            return Some("a given number was changed".to_string());
        }
        None
    }

    fn detect_answer(&self, chain: &[String]) -> Option<String> {
        let grid = self.latest_grid(chain).ok()?;
        if sudoku::check(&grid, &self.givens).solved() {
            Some(grid.render())
        } else {
            None
        }
    }

    fn score(&self, answer: &str) -> bool {
        match sudoku::parse_array(answer.trim()) {
            Ok(grid) => sudoku::check(&grid, &self.givens).solved(),
            Err(_) => false,
        }
    }
}
