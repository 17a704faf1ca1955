//! Prompt builders over the pinned templates, and comparison-reply parsing.
//!
//! Builders do plain placeholder substitution on the golden templates;
//! anything beyond substitution (appending a partial chain for
//! continuation rounds) is concatenated after the template so the
//! template bytes themselves stay intact.

use serde::{Deserialize, Serialize};

use super::templates;
use crate::preference::Vote;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Qa,
    Game24,
    Sudoku,
}

/// The comparison template for a task and variant (1..=3).
pub fn comparison_template(task: TaskKind, variant: u8) -> &'static str {
    match (task, variant) {
        (TaskKind::Qa, 1) => templates::QA_COMPARE_1,
        (TaskKind::Qa, 2) => templates::QA_COMPARE_2,
        (TaskKind::Qa, 3) => templates::QA_COMPARE_3,
        (TaskKind::Game24, 1) => templates::G24_COMPARE_1,
        (TaskKind::Game24, 2) => templates::G24_COMPARE_2,
        (TaskKind::Game24, 3) => templates::G24_COMPARE_3,
        (TaskKind::Sudoku, 1) => templates::SUDOKU_COMPARE_1,
        (TaskKind::Sudoku, 2) => templates::SUDOKU_COMPARE_2,
        (TaskKind::Sudoku, 3) => templates::SUDOKU_COMPARE_3,
        (_, v) => panic!("comparison prompt variant {v} out of range 1..=3"),
    }
}

/// Substitutes `{input_1}`, `{input_2}` (and `{puzzle_size}` for Sudoku)
/// into the selected template.
pub fn build_comparison_prompt(
    task: TaskKind,
    input_1: &str,
    input_2: &str,
    variant: u8,
    puzzle_size: Option<usize>,
) -> String {
    let mut text = comparison_template(task, variant).to_string();
    if let Some(n) = puzzle_size {
        text = text.replace("{puzzle_size}", &n.to_string());
    }
    text.replace("{input_1}", input_1).replace("{input_2}", input_2)
}

pub fn qa_generation_prompt(question: &str) -> String {
    templates::QA_GENERATION.replace("{question}", question)
}

pub fn g24_steps_prompt(input: &str) -> String {
    templates::G24_GENERATE_STEPS.replace("{input}", input)
}

pub fn g24_answer_prompt(input: &str) -> String {
    templates::G24_GENERATE_ANSWER.replace("{input}", input)
}

pub fn sudoku_generation_prompt(puzzle_size: usize, question: &str) -> String {
    templates::SUDOKU_GENERATION
        .replace("{puzzle_size}", &puzzle_size.to_string())
        .replace("{question}", question)
}

/// Extracts the judged side from a comparison reply: the first standalone
/// digit run equal to `1` or `2` (so "Answer: 2" parses, "12" does not).
/// `None` means the reply is unparseable and the caller should retry or
/// fall back to its tie-break.
pub fn parse_comparison_reply(text: &str) -> Option<Vote> {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            match &text[start..i] {
                "1" => return Some(Vote::First),
                "2" => return Some(Vote::Second),
                _ => {}
            }
        } else {
            i += 1;
        }
    }
    None
}
