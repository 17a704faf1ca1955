//! Comparison-driven tree-of-thoughts.
//!
//! Instead of asking an evaluator to score candidate reasoning steps in
//! isolation, this crate selects the most promising intermediate thoughts
//! each round through noisy pairwise-comparison tournaments:
//!
//! - [`preference`] — the comparison-oracle contract plus simulated oracles
//!   with known ground truth (linear, Bradley-Terry and explicit-matrix
//!   preference models) and transitivity property checkers.
//! - [`selection`] — the two tournament engines: majority-vote knockout and
//!   a dueling knockout that adapts the number of comparisons per pair with
//!   Chernoff-style confidence intervals.
//! - [`orchestrator`] — the outer loop over a thought tree: generate,
//!   prune, compare, select, and backtrack via a remain list.
//! - [`tasks`] — adapters for multiple-choice QA, the Game of 24 and
//!   Latin-square Sudoku: prompt construction, output parsing, pruning
//!   rules and brute-force validators.
//! - [`gateway`] — an OpenAI-compatible chat-completions client with
//!   retries, caching, token accounting and deterministic record/replay.
//! - [`harness`] — experiment runner: PAC simulation suites, comparison
//!   complexity scaling, task benchmark runs and ablation sweeps.
//!
//! The numeric core (preference models and selection math) is generic over
//! the scalar type via [`Real`]; `f64` aliases are exported at the crate
//! root and are what the orchestrator and harness use. Game-of-24
//! arithmetic is exact rational arithmetic, never floating point.

pub mod gateway;
pub mod harness;
pub mod llm;
pub mod orchestrator;
pub mod preference;
pub mod seed;
pub mod selection;
pub mod tasks;
pub mod thought;
pub mod trace;

use std::fmt;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar trait for the generic numeric core: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

pub use thought::{Thought, ThoughtId, ThoughtStatus};

/// Default-precision preference model.
pub type Model = preference::PreferenceModel<f64>;
/// Default-precision transitivity report.
pub type Transitivity = preference::TransitivityReport<f64>;
/// Default-precision selection parameters.
pub type Params = selection::SelectionParams<f64>;
/// Default-precision per-round bias/confidence/budget schedule.
pub type Schedule = selection::RoundSchedule<f64>;
/// Default-precision duel state.
pub type Duel = selection::DuelState<f64>;
