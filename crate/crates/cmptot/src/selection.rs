//! Tournament selection of the K most promising thoughts.
//!
//! Both engines run halving rounds: shuffle the candidates into disjoint
//! pairs, resolve each pair through the comparison oracle, keep winners.
//! Once at most `2K` candidates remain, only `|Z| - K` pairs are formed so
//! the round lands exactly on `K`; odd counts give one random bye.
//!
//! Standard mode resolves a pair by majority over `n` independent votes.
//! Dueling mode resolves a pair adaptively: it tracks the empirical win
//! rate `p_hat` and a confidence radius `c_hat` and stops as soon as
//! `|p_hat - 1/2| > c_hat - eps_i` or the per-round budget is exhausted,
//! with the bias/confidence schedule tightening by halving-round index.
//! Ties at the budget are broken from a dedicated seeded sub-stream so
//! votes drawn elsewhere never perturb tie outcomes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand::seq::SliceRandom;

use crate::preference::{Candidate, ComparisonOracle, ComparisonOutcome, OracleError, Vote};
use crate::seed::{self, stream};
use crate::thought::ThoughtId;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    Standard,
    Dueling,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("K must be >= 1")]
    BadK,
    #[error("votes per pair must be >= 1")]
    BadVotes,
    #[error("epsilon must lie in (0, 1/2)")]
    BadEpsilon,
    #[error("delta must lie in (0, 1)")]
    BadDelta,
    #[error("gamma must be strictly positive")]
    BadGamma,
    #[error("budget cap must be >= 1 when present")]
    BadBudgetCap,
}

/// Knobs for one selection call.
///
/// Standard mode ignores `epsilon`, `delta`, `gamma` and `budget_cap`;
/// dueling mode ignores `votes_per_pair`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: Deserialize<'de>"))]
pub struct SelectionParams<F> {
    pub mode: SelectionMode,
    /// Target number of survivors.
    pub k: usize,
    /// Votes per pair in standard mode.
    pub votes_per_pair: usize,
    pub epsilon: F,
    pub delta: F,
    pub gamma: F,
    /// Hard per-pair comparison cap in dueling mode. Practical deployments
    /// cap at 3; uncapped is for simulations.
    pub budget_cap: Option<usize>,
    pub seed: u64,
}

impl<F: Real> SelectionParams<F> {
    pub fn standard(k: usize, votes_per_pair: usize, seed: u64) -> Result<Self, ParamError> {
        let params = Self {
            mode: SelectionMode::Standard,
            k,
            votes_per_pair,
            epsilon: F::from_f64(0.1).unwrap(),
            delta: F::from_f64(0.1).unwrap(),
            gamma: F::one(),
            budget_cap: None,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn dueling(
        k: usize,
        epsilon: F,
        delta: F,
        gamma: F,
        budget_cap: Option<usize>,
        seed: u64,
    ) -> Result<Self, ParamError> {
        let params = Self {
            mode: SelectionMode::Dueling,
            k,
            votes_per_pair: 1,
            epsilon,
            delta,
            gamma,
            budget_cap,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.k < 1 {
            return Err(ParamError::BadK);
        }
        match self.mode {
            SelectionMode::Standard => {
                if self.votes_per_pair < 1 {
                    return Err(ParamError::BadVotes);
                }
            }
            SelectionMode::Dueling => {
                let half = F::from_f64(0.5).unwrap();
                if !(self.epsilon > F::zero() && self.epsilon < half) {
                    return Err(ParamError::BadEpsilon);
                }
                if !(self.delta > F::zero() && self.delta < F::one()) {
                    return Err(ParamError::BadDelta);
                }
                if !(self.gamma > F::zero()) || !self.gamma.is_finite() {
                    return Err(ParamError::BadGamma);
                }
                if self.budget_cap == Some(0) {
                    return Err(ParamError::BadBudgetCap);
                }
            }
        }
        Ok(())
    }
}

/// Bias, confidence and per-pair budget for halving round `i` (1-based).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RoundSchedule<F> {
    pub round: usize,
    /// `eps_i = (2^(1/3) - 1) * eps / (gamma * 2^(i/3))`
    pub eps_i: F,
    /// `delta_i = delta / 2^i`
    pub delta_i: F,
    /// `ln(2 / delta_i) / (2 * eps_i^2)` before rounding and capping.
    pub budget_raw: F,
    /// `ceil(budget_raw)` clamped by the configured cap; always >= 1.
    pub budget: usize,
}

/// Evaluates the per-round schedule. As `gamma` grows the bias shrinks and
/// the raw budget diverges; a finite cap is then the only stopping bound.
pub fn round_schedule<F: Real>(
    i: usize,
    epsilon: F,
    delta: F,
    gamma: F,
    budget_cap: Option<usize>,
) -> RoundSchedule<F> {
    assert!(i >= 1, "halving rounds are 1-based");
    let two = F::from_f64(2.0).unwrap();
    let third = F::one() / F::from_f64(3.0).unwrap();
    let cbrt2 = two.powf(third);
    let eps_i = (cbrt2 - F::one()) * epsilon / (gamma * two.powf(F::from_usize(i).unwrap() * third));
    let delta_i = delta / two.powi(i as i32);
    let budget_raw = (two / delta_i).ln() / (two * eps_i * eps_i);
    let budget = if budget_raw.is_finite() {
        budget_raw
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX)
            .max(1)
    } else {
        usize::MAX
    };
    let budget = match budget_cap {
        Some(cap) => budget.min(cap),
        None => budget,
    };
    RoundSchedule { round: i, eps_i, delta_i, budget_raw, budget }
}

/// Confidence radius after `r >= 1` comparisons at confidence `delta_i`:
/// `sqrt(ln(4 r^2 / delta_i) / (2 r))`.
pub fn confidence_radius<F: Real>(r: usize, delta_i: F) -> F {
    assert!(r >= 1);
    let two = F::from_f64(2.0).unwrap();
    let four = F::from_f64(4.0).unwrap();
    let rf = F::from_usize(r).unwrap();
    ((four * rf * rf / delta_i).ln() / (two * rf)).sqrt()
}

/// Running state of one adaptive duel.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DuelState<F> {
    /// Empirical win fraction of the first element; 1/2 before any vote.
    pub p_hat: F,
    /// Confidence radius; 1/2 before any vote.
    pub c_hat: F,
    /// Comparisons so far.
    pub r: usize,
    pub wins_first: usize,
    /// Per-pair comparison cap for this duel.
    pub budget: usize,
}

impl<F: Real> DuelState<F> {
    pub fn new(budget: usize) -> Self {
        let half = F::from_f64(0.5).unwrap();
        Self { p_hat: half, c_hat: half, r: 0, wins_first: 0, budget }
    }

    fn record(&mut self, vote: Vote, delta_i: F) {
        self.r += 1;
        if vote == Vote::First {
            self.wins_first += 1;
        }
        self.p_hat = F::from_usize(self.wins_first).unwrap() / F::from_usize(self.r).unwrap();
        self.c_hat = confidence_radius(self.r, delta_i);
    }

    /// The stopping test: `|p_hat - 1/2| > c_hat - eps_i`.
    fn confident(&self, eps_i: F) -> bool {
        (self.p_hat - F::from_f64(0.5).unwrap()).abs() > self.c_hat - eps_i
    }
}

/// Result of one adaptive duel.
#[derive(Debug, Clone)]
pub struct DuelOutcome<F> {
    pub winner: Vote,
    pub outcome: ComparisonOutcome,
    pub state: DuelState<F>,
}

/// Oracle failure in the middle of a duel, with the state reached so far.
#[derive(Debug, Error)]
#[error("oracle failed during duel after {} comparisons: {source}", state.r)]
pub struct DuelInterrupted<F: Real> {
    pub source: OracleError,
    pub state: DuelState<F>,
}

/// Runs one duel between `a` and `b` under the given round schedule,
/// querying one vote at a time. The winner is the side with more wins;
/// an exact tie at the stopping point is broken from `tie_seed`.
pub fn duel_pair<F: Real>(
    a: &Candidate,
    b: &Candidate,
    sched: &RoundSchedule<F>,
    oracle: &dyn ComparisonOracle,
    tie_seed: u64,
) -> Result<DuelOutcome<F>, DuelInterrupted<F>> {
    let mut state = DuelState::new(sched.budget);
    let mut votes = Vec::new();
    while state.r < state.budget {
        let vote = match oracle.compare(a, b) {
            Ok(v) => v,
            Err(source) => return Err(DuelInterrupted { source, state }),
        };
        votes.push(vote);
        state.record(vote, sched.delta_i);
        if state.confident(sched.eps_i) {
            break;
        }
    }
    // Integer comparison sidesteps float equality on p_hat.
    let winner = match (2 * state.wins_first).cmp(&state.r) {
        std::cmp::Ordering::Greater => Vote::First,
        std::cmp::Ordering::Less => Vote::Second,
        std::cmp::Ordering::Equal => tie_break(tie_seed),
    };
    Ok(DuelOutcome { winner, outcome: ComparisonOutcome::new(winner, votes), state })
}

fn tie_break(tie_seed: u64) -> Vote {
    if seed::unit_uniform(tie_seed) < 0.5 {
        Vote::First
    } else {
        Vote::Second
    }
}

/// Strict majority of the votes; `None` on an exact tie (only reachable
/// for even vote counts).
pub fn majority(votes: &[Vote]) -> Option<Vote> {
    let first = votes.iter().filter(|v| **v == Vote::First).count();
    match (2 * first).cmp(&votes.len()) {
        std::cmp::Ordering::Greater => Some(Vote::First),
        std::cmp::Ordering::Less => Some(Vote::Second),
        std::cmp::Ordering::Equal => None,
    }
}

/// One resolved match inside a selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchRecord {
    /// Halving round (1-based) the match belongs to.
    pub round: usize,
    pub first: ThoughtId,
    pub second: ThoughtId,
    pub winner: ThoughtId,
    /// Oracle queries spent on this match.
    pub queries: usize,
}

/// Survivors, casualties, and full accounting for one selection call.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionResult {
    /// In input order.
    pub selected: Vec<ThoughtId>,
    /// In elimination order.
    pub eliminated: Vec<ThoughtId>,
    pub comparisons_used: usize,
    /// Oracle queries per halving round.
    pub per_round_counts: Vec<usize>,
    pub matches: Vec<MatchRecord>,
}

impl SelectionResult {
    fn passthrough(candidates: &[Candidate]) -> Self {
        Self {
            selected: candidates.iter().map(|c| c.id).collect(),
            eliminated: Vec::new(),
            comparisons_used: 0,
            per_round_counts: Vec::new(),
            matches: Vec::new(),
        }
    }

    /// Number of matches the given thought played.
    pub fn matches_played(&self, id: ThoughtId) -> u32 {
        self.matches.iter().filter(|m| m.first == id || m.second == id).count() as u32
    }
}

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("oracle failure after {comparisons_used} comparisons: {source}")]
    Oracle {
        source: OracleError,
        comparisons_used: usize,
        per_round_counts: Vec<usize>,
    },
}

/// Plans one halving round over `order` (indices into the candidate
/// slice): pairs to play and indices that advance unopposed. When at most
/// `2k` candidates remain, exactly `len - k` pairs are formed; otherwise
/// everything is paired, with one random bye on odd counts.
fn plan_round(
    order: &mut Vec<usize>,
    k: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> (Vec<(usize, usize)>, Vec<usize>) {
    order.shuffle(rng);
    let len = order.len();
    let n_pairs = if len <= 2 * k { len - k } else { len / 2 };
    let mut pairs = Vec::with_capacity(n_pairs);
    for p in 0..n_pairs {
        pairs.push((order[2 * p], order[2 * p + 1]));
    }
    let byes = order[2 * n_pairs..].to_vec();
    (pairs, byes)
}

/// Shared tournament loop. `resolve` settles one pair and returns the
/// winning side plus the queries spent.
fn run_tournament<F, R>(
    candidates: &[Candidate],
    params: &SelectionParams<F>,
    mut resolve: R,
) -> Result<SelectionResult, SelectionError>
where
    F: Real,
    R: FnMut(usize, &Candidate, &Candidate) -> Result<(Vote, usize), OracleError>,
{
    if candidates.is_empty() {
        return Err(SelectionError::EmptyCandidates);
    }
    if candidates.len() <= params.k {
        return Ok(SelectionResult::passthrough(candidates));
    }

    let mut rng = seed::rng(seed::derive(params.seed, &[stream::PAIRING]));
    let mut alive: Vec<usize> = (0..candidates.len()).collect();
    let mut eliminated = Vec::new();
    let mut matches = Vec::new();
    let mut per_round_counts = Vec::new();
    let mut comparisons_used = 0usize;
    let mut round = 0usize;

    while alive.len() > params.k {
        round += 1;
        let (pairs, byes) = plan_round(&mut alive, params.k, &mut rng);
        let mut round_queries = 0usize;
        let mut survivors = byes;
        for (ia, ib) in pairs {
            let (a, b) = (&candidates[ia], &candidates[ib]);
            let (winner, queries) = match resolve(round, a, b) {
                Ok(r) => r,
                Err(source) => {
                    per_round_counts.push(round_queries);
                    return Err(SelectionError::Oracle {
                        source,
                        comparisons_used: comparisons_used + round_queries,
                        per_round_counts,
                    });
                }
            };
            round_queries += queries;
            let (win_idx, lose_idx) = match winner {
                Vote::First => (ia, ib),
                Vote::Second => (ib, ia),
            };
            matches.push(MatchRecord {
                round,
                first: a.id,
                second: b.id,
                winner: candidates[win_idx].id,
                queries,
            });
            survivors.push(win_idx);
            eliminated.push(candidates[lose_idx].id);
        }
        comparisons_used += round_queries;
        per_round_counts.push(round_queries);
        alive = survivors;
    }

    alive.sort_unstable();
    Ok(SelectionResult {
        selected: alive.into_iter().map(|i| candidates[i].id).collect(),
        eliminated,
        comparisons_used,
        per_round_counts,
        matches,
    })
}

fn tie_seed_for<F: Real>(params: &SelectionParams<F>, a: ThoughtId, b: ThoughtId, round: usize) -> u64 {
    let (lo, hi) = (a.0.min(b.0), a.0.max(b.0));
    seed::derive(params.seed, &[stream::TIE_BREAK, lo, hi, round as u64])
}

/// Majority-vote knockout: each pair is resolved by `n` independent oracle
/// votes. With odd `n` the majority is always strict; even `n` can tie and
/// falls back to the seeded tie-break.
pub fn select_standard<F: Real>(
    candidates: &[Candidate],
    params: &SelectionParams<F>,
    oracle: &dyn ComparisonOracle,
) -> Result<SelectionResult, SelectionError> {
    let n = params.votes_per_pair;
    run_tournament(candidates, params, |round, a, b| {
        let mut votes = Vec::with_capacity(n);
        for _ in 0..n {
            votes.push(oracle.compare(a, b)?);
        }
        let winner = majority(&votes)
            .unwrap_or_else(|| tie_break(tie_seed_for(params, a.id, b.id, round)));
        Ok((winner, n))
    })
}

/// Dueling knockout: each pair is resolved adaptively under the round-`i`
/// schedule, with `i` incremented once per halving round.
pub fn select_dueling<F: Real>(
    candidates: &[Candidate],
    params: &SelectionParams<F>,
    oracle: &dyn ComparisonOracle,
) -> Result<SelectionResult, SelectionError> {
    let mut schedules: Vec<RoundSchedule<F>> = Vec::new();
    run_tournament(candidates, params, |round, a, b| {
        while schedules.len() < round {
            schedules.push(round_schedule(
                schedules.len() + 1,
                params.epsilon,
                params.delta,
                params.gamma,
                params.budget_cap,
            ));
        }
        let sched = &schedules[round - 1];
        let tie = tie_seed_for(params, a.id, b.id, round);
        match duel_pair(a, b, sched, oracle, tie) {
            Ok(duel) => Ok((duel.winner, duel.outcome.queries_used)),
            Err(interrupted) => Err(interrupted.source),
        }
    })
}

/// Dispatches on `params.mode`.
pub fn select<F: Real>(
    candidates: &[Candidate],
    params: &SelectionParams<F>,
    oracle: &dyn ComparisonOracle,
) -> Result<SelectionResult, SelectionError> {
    match params.mode {
        SelectionMode::Standard => select_standard(candidates, params, oracle),
        SelectionMode::Dueling => select_dueling(candidates, params, oracle),
    }
}
