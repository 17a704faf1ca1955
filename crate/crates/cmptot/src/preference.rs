//! Simulated preference ground truth and the comparison-oracle contract.
//!
//! A [`PreferenceModel`] fixes an unknown-to-the-algorithm ranking over M
//! items together with a pairwise win-probability matrix `p(i, j)`: when
//! items `i` and `j` are compared, `i` wins with probability `p(i, j)` and
//! `p(i, j) + p(j, i) = 1`. Higher-ranked items win with probability at
//! least 1/2. The selection guarantees additionally assume a relaxed form
//! of strong stochastic transitivity parameterized by `gamma` and the
//! stochastic triangle inequality; [`check_transitivity`] scans all ranked
//! triples and reports violations instead of hard-failing, since `gamma`
//! is a modeling knob. Clamping in the linear model can break these
//! properties near saturation, which is exactly what the checker is for.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{self, stream};
use crate::thought::ThoughtId;
use crate::Real;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("utility {0} is not finite")]
    NonFiniteUtility(usize),
    #[error("weight {0} must be strictly positive")]
    NonPositiveWeight(usize),
    #[error("model must contain at least one item")]
    Empty,
    #[error("win matrix must be square, row {0} has wrong length")]
    NotSquare(usize),
    #[error("p({0},{1}) out of [0,1]")]
    OutOfRange(usize, usize),
    #[error("p({i},{j}) + p({j},{i}) != 1")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("diagonal p({0},{0}) != 1/2")]
    BadDiagonal(usize),
    #[error("utility({i}) >= utility({j}) but p({i},{j}) < 1/2")]
    RankingInconsistent { i: usize, j: usize },
    #[error("utilities length {got} does not match matrix size {expected}")]
    UtilityLength { got: usize, expected: usize },
    #[error("gamma must be strictly positive")]
    BadGamma,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ModelKind<F> {
    Linear { utilities: Vec<F>, slope: F },
    Btl { weights: Vec<F> },
    Matrix { p: Vec<Vec<F>>, utilities: Vec<F> },
}

/// Ground-truth ranking plus pairwise win probabilities.
///
/// Serializes as `{"kind": "linear"|"btl"|"matrix", ..., "gamma": g}` for
/// harness config files; see the loaders in [`crate::harness`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: Deserialize<'de>"))]
pub struct PreferenceModel<F> {
    #[serde(flatten)]
    kind: ModelKind<F>,
    gamma: F,
}

impl<F: Real> PreferenceModel<F> {
    /// Linear link: `p(i, j) = clamp(1/2 + slope * (u_i - u_j), 0, 1)`.
    pub fn linear(utilities: Vec<F>, slope: F) -> Result<Self, ModelError> {
        if utilities.is_empty() {
            return Err(ModelError::Empty);
        }
        for (i, u) in utilities.iter().enumerate() {
            if !u.is_finite() {
                return Err(ModelError::NonFiniteUtility(i));
            }
        }
        if !(slope > F::zero()) || !slope.is_finite() {
            return Err(ModelError::BadGamma); // slope > 0 mirrors the gamma contract
        }
        Ok(Self { kind: ModelKind::Linear { utilities, slope }, gamma: F::one() })
    }

    /// Evenly spaced utilities `m-1, m-2, ..., 0` with a linear link:
    /// adjacent items differ by `slope` in win probability.
    pub fn linear_unit_gaps(m: usize, slope: F) -> Result<Self, ModelError> {
        let utilities = (0..m).map(|i| F::from_usize(m - 1 - i).unwrap()).collect();
        Self::linear(utilities, slope)
    }

    /// Bradley-Terry link: `p(i, j) = w_i / (w_i + w_j)`.
    pub fn btl(weights: Vec<F>) -> Result<Self, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::Empty);
        }
        for (i, w) in weights.iter().enumerate() {
            if !(w.is_finite() && *w > F::zero()) {
                return Err(ModelError::NonPositiveWeight(i));
            }
        }
        Ok(Self { kind: ModelKind::Btl { weights }, gamma: F::one() })
    }

    /// Explicit win matrix with an explicit ranking.
    pub fn matrix(p: Vec<Vec<F>>, utilities: Vec<F>) -> Result<Self, ModelError> {
        let model = Self { kind: ModelKind::Matrix { p, utilities }, gamma: F::one() };
        model.validate()?;
        Ok(model)
    }

    /// A noise-free model: `p(i, j)` is 1 or 0 off the diagonal according
    /// to the utility order (utilities must be pairwise distinct).
    pub fn deterministic(utilities: Vec<F>) -> Result<Self, ModelError> {
        let m = utilities.len();
        if m == 0 {
            return Err(ModelError::Empty);
        }
        let half = F::from_f64(0.5).unwrap();
        let mut p = vec![vec![half; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    p[i][j] = if utilities[i] > utilities[j] { F::one() } else { F::zero() };
                }
            }
        }
        Self::matrix(p, utilities)
    }

    /// Replaces the stochasticity parameter (default 1).
    pub fn with_gamma(mut self, gamma: F) -> Result<Self, ModelError> {
        if !(gamma > F::zero()) || !gamma.is_finite() {
            return Err(ModelError::BadGamma);
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn gamma(&self) -> F {
        self.gamma
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            ModelKind::Linear { utilities, .. } => utilities.len(),
            ModelKind::Btl { weights } => weights.len(),
            ModelKind::Matrix { p, .. } => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The score that defines the ranking (higher is better). For BTL
    /// models the weight itself serves as the utility.
    pub fn utility(&self, i: usize) -> F {
        match &self.kind {
            ModelKind::Linear { utilities, .. } => utilities[i],
            ModelKind::Btl { weights } => weights[i],
            ModelKind::Matrix { utilities, .. } => utilities[i],
        }
    }

    /// Index of the true maximum (first index on utility ties).
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.len() {
            if self.utility(i) > self.utility(best) {
                best = i;
            }
        }
        best
    }

    /// Win probability `p(i, j)`; `p(i, i) = 1/2` by construction.
    pub fn win_prob(&self, i: usize, j: usize) -> F {
        let half = F::from_f64(0.5).unwrap();
        if i == j {
            return half;
        }
        match &self.kind {
            ModelKind::Linear { utilities, slope } => {
                let raw = half + *slope * (utilities[i] - utilities[j]);
                raw.max(F::zero()).min(F::one())
            }
            ModelKind::Btl { weights } => weights[i] / (weights[i] + weights[j]),
            ModelKind::Matrix { p, .. } => p[i][j],
        }
    }

    /// Advantage `p~(i, j) = p(i, j) - 1/2`.
    pub fn advantage(&self, i: usize, j: usize) -> F {
        self.win_prob(i, j) - F::from_f64(0.5).unwrap()
    }

    /// Whether item `a` is an epsilon-maximum: with `b` the true best,
    /// `p(a, b) >= 1/2 - eps`.
    pub fn is_eps_maximum(&self, a: usize, eps: F) -> bool {
        let best = self.best_index();
        self.win_prob(a, best) >= F::from_f64(0.5).unwrap() - eps
    }

    /// Structural validation; matrix models are checked cell by cell.
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.gamma > F::zero()) || !self.gamma.is_finite() {
            return Err(ModelError::BadGamma);
        }
        match &self.kind {
            ModelKind::Linear { utilities, .. } => {
                if utilities.is_empty() {
                    return Err(ModelError::Empty);
                }
                for (i, u) in utilities.iter().enumerate() {
                    if !u.is_finite() {
                        return Err(ModelError::NonFiniteUtility(i));
                    }
                }
            }
            ModelKind::Btl { weights } => {
                if weights.is_empty() {
                    return Err(ModelError::Empty);
                }
                for (i, w) in weights.iter().enumerate() {
                    if !(w.is_finite() && *w > F::zero()) {
                        return Err(ModelError::NonPositiveWeight(i));
                    }
                }
            }
            ModelKind::Matrix { p, utilities } => {
                let m = p.len();
                if m == 0 {
                    return Err(ModelError::Empty);
                }
                if utilities.len() != m {
                    return Err(ModelError::UtilityLength { got: utilities.len(), expected: m });
                }
                let half = F::from_f64(0.5).unwrap();
                let tol = F::epsilon().sqrt();
                for (i, row) in p.iter().enumerate() {
                    if row.len() != m {
                        return Err(ModelError::NotSquare(i));
                    }
                    if (row[i] - half).abs() > tol {
                        return Err(ModelError::BadDiagonal(i));
                    }
                    for (j, &pij) in row.iter().enumerate() {
                        if !(pij >= F::zero() && pij <= F::one()) {
                            return Err(ModelError::OutOfRange(i, j));
                        }
                        if ((pij + p[j][i]) - F::one()).abs() > tol {
                            return Err(ModelError::NotAntisymmetric { i, j });
                        }
                        if i != j && utilities[i] >= utilities[j] && pij < half - tol {
                            return Err(ModelError::RankingInconsistent { i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A ranked triple `(i, j, k)` that violates a transitivity property,
/// with the advantages involved.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TripleWitness<F> {
    pub triple: (usize, usize, usize),
    pub adv_ik: F,
    pub adv_ij: F,
    pub adv_jk: F,
}

/// Result of the exhaustive ranked-triple scan.
#[derive(Debug, Clone, Serialize)]
pub struct TransitivityReport<F> {
    /// `p~(i,k) >= max(p~(i,j), p~(j,k)) / gamma` held on every triple.
    pub sst_gamma_ok: bool,
    /// `p~(i,k) <= p~(i,j) + p~(j,k)` held on every triple.
    pub triangle_ok: bool,
    pub sst_violations: usize,
    pub triangle_violations: usize,
    pub sst_witnesses: Vec<TripleWitness<F>>,
    pub triangle_witnesses: Vec<TripleWitness<F>>,
    pub triples_checked: usize,
}

const MAX_WITNESSES: usize = 64;

/// Scans all ordered triples with strictly decreasing utility and checks
/// the gamma-relaxed strong-stochastic-transitivity condition and the
/// stochastic triangle inequality. Intended for models of at most ~10^3
/// items; the scan is cubic.
pub fn check_transitivity<F: Real>(model: &PreferenceModel<F>) -> TransitivityReport<F> {
    let m = model.len();
    let tol = F::epsilon().sqrt();
    let inv_gamma = F::one() / model.gamma();
    let mut report = TransitivityReport {
        sst_gamma_ok: true,
        triangle_ok: true,
        sst_violations: 0,
        triangle_violations: 0,
        sst_witnesses: Vec::new(),
        triangle_witnesses: Vec::new(),
        triples_checked: 0,
    };

    // Indices ordered best-first; ties in utility are skipped below.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        model
            .utility(b)
            .partial_cmp(&model.utility(a))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    for a in 0..m {
        for b in (a + 1)..m {
            if !(model.utility(order[a]) > model.utility(order[b])) {
                continue;
            }
            for c in (b + 1)..m {
                if !(model.utility(order[b]) > model.utility(order[c])) {
                    continue;
                }
                let (i, j, k) = (order[a], order[b], order[c]);
                report.triples_checked += 1;
                let adv_ik = model.advantage(i, k);
                let adv_ij = model.advantage(i, j);
                let adv_jk = model.advantage(j, k);
                let witness = || TripleWitness { triple: (i, j, k), adv_ik, adv_ij, adv_jk };

                if adv_ik + tol < inv_gamma * adv_ij.max(adv_jk) {
                    report.sst_gamma_ok = false;
                    report.sst_violations += 1;
                    if report.sst_witnesses.len() < MAX_WITNESSES {
                        report.sst_witnesses.push(witness());
                    }
                }
                if adv_ik > adv_ij + adv_jk + tol {
                    report.triangle_ok = false;
                    report.triangle_violations += 1;
                    if report.triangle_witnesses.len() < MAX_WITNESSES {
                        report.triangle_witnesses.push(witness());
                    }
                }
            }
        }
    }
    report
}

/// A single pairwise preference vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vote {
    First,
    Second,
}

impl Vote {
    pub fn flip(self) -> Vote {
        match self {
            Vote::First => Vote::Second,
            Vote::Second => Vote::First,
        }
    }
}

/// Aggregated record of one resolved match.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonOutcome {
    pub winner: Vote,
    pub raw_votes: Vec<Vote>,
    pub queries_used: usize,
}

impl ComparisonOutcome {
    /// `queries_used` is defined as the vote count; at least one vote.
    pub fn new(winner: Vote, raw_votes: Vec<Vote>) -> Self {
        assert!(!raw_votes.is_empty(), "a match consists of at least one vote");
        let queries_used = raw_votes.len();
        Self { winner, raw_votes, queries_used }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("comparison oracle unavailable: {0}")]
    Unavailable(String),
    #[error("oracle does not know item {0}")]
    UnknownItem(ThoughtId),
}

/// A view of a thought as a tournament entrant: its id plus the text the
/// oracle compares (built by the task adapter from the full chain).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Candidate {
    pub id: ThoughtId,
    pub payload: String,
}

impl Candidate {
    pub fn new(id: ThoughtId, payload: impl Into<String>) -> Self {
        Self { id, payload: payload.into() }
    }

    /// A payload-free entrant, for simulations keyed purely by id.
    pub fn bare(id: u64) -> Self {
        Self { id: ThoughtId(id), payload: String::new() }
    }
}

/// Source of pairwise winner votes. Implementations must be safe to call
/// from concurrent contexts; repeated calls on the same pair are
/// independent draws (simulated) or distinct queries (LLM-backed).
pub trait ComparisonOracle: Send + Sync {
    fn compare(&self, a: &Candidate, b: &Candidate) -> Result<Vote, OracleError>;

    /// Total votes served so far (for accounting assertions).
    fn calls(&self) -> u64;
}

fn pair_key(a: ThoughtId, b: ThoughtId) -> (u64, u64) {
    (a.0.min(b.0), a.0.max(b.0))
}

/// Draws one vote for the query `(a, b)` with first-wins probability `p`.
/// The draw is a pure function of (seed, unordered pair, repetition), so
/// evaluation order across pairs cannot change outcomes; the orientation
/// only flips which side the probability refers to.
pub(crate) fn bernoulli_vote(master: u64, a: ThoughtId, b: ThoughtId, rep: u64, p: f64) -> Vote {
    let (lo, hi) = pair_key(a, b);
    let sub = seed::derive(master, &[stream::VOTE, lo, hi, rep]);
    if seed::unit_uniform(sub) < p {
        Vote::First
    } else {
        Vote::Second
    }
}

/// Tracks how many times each unordered pair has been queried, so each
/// repetition gets its own sub-seed.
#[derive(Debug, Default)]
pub(crate) struct RepCounter {
    reps: Mutex<HashMap<(u64, u64), u64>>,
}

impl RepCounter {
    pub fn next(&self, a: ThoughtId, b: ThoughtId) -> u64 {
        let mut reps = self.reps.lock().unwrap();
        let slot = reps.entry(pair_key(a, b)).or_insert(0);
        let rep = *slot;
        *slot += 1;
        rep
    }
}

/// Simulated oracle backed by a [`PreferenceModel`] with an explicit
/// id-to-item binding.
pub struct SimulatedOracle<F> {
    model: PreferenceModel<F>,
    index: HashMap<ThoughtId, usize>,
    master: u64,
    reps: RepCounter,
    calls: AtomicU64,
}

impl<F: Real> SimulatedOracle<F> {
    /// Binds ids `0..model.len()` to items `0..model.len()`.
    pub fn new(model: PreferenceModel<F>, seed: u64) -> Self {
        let index = (0..model.len()).map(|i| (ThoughtId(i as u64), i)).collect();
        Self { model, index, master: seed, reps: RepCounter::default(), calls: AtomicU64::new(0) }
    }

    /// Binds the given ids, in order, to items `0..n`.
    pub fn bound(model: PreferenceModel<F>, seed: u64, ids: &[ThoughtId]) -> Self {
        let index = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        Self { model, index, master: seed, reps: RepCounter::default(), calls: AtomicU64::new(0) }
    }

    pub fn model(&self) -> &PreferenceModel<F> {
        &self.model
    }

    pub fn item_of(&self, id: ThoughtId) -> Option<usize> {
        self.index.get(&id).copied()
    }
}

impl<F: Real> ComparisonOracle for SimulatedOracle<F> {
    fn compare(&self, a: &Candidate, b: &Candidate) -> Result<Vote, OracleError> {
        let ia = *self.index.get(&a.id).ok_or(OracleError::UnknownItem(a.id))?;
        let ib = *self.index.get(&b.id).ok_or(OracleError::UnknownItem(b.id))?;
        let p = self.model.win_prob(ia, ib).to_f64().unwrap_or(0.5);
        let rep = self.reps.next(a.id, b.id);
        self.calls.fetch_add(1, Ordering::Relaxed);
        Ok(bernoulli_vote(self.master, a.id, b.id, rep, p))
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

/// Simulated oracle whose ground truth is a utility function of the
/// candidate payload, with a clamped linear link of the given slope.
/// Used for orchestrator simulations where thoughts are created on the
/// fly and cannot be pre-bound to model indices.
pub struct UtilityOracle<U> {
    utility: U,
    slope: f64,
    master: u64,
    reps: RepCounter,
    calls: AtomicU64,
}

impl<U> UtilityOracle<U>
where
    U: Fn(&str) -> f64 + Send + Sync,
{
    pub fn new(utility: U, slope: f64, seed: u64) -> Self {
        Self { utility, slope, master: seed, reps: RepCounter::default(), calls: AtomicU64::new(0) }
    }
}

impl<U> ComparisonOracle for UtilityOracle<U>
where
    U: Fn(&str) -> f64 + Send + Sync,
{
    fn compare(&self, a: &Candidate, b: &Candidate) -> Result<Vote, OracleError> {
        let ua = (self.utility)(&a.payload);
        let ub = (self.utility)(&b.payload);
        let p = (0.5 + self.slope * (ua - ub)).clamp(0.0, 1.0);
        let rep = self.reps.next(a.id, b.id);
        self.calls.fetch_add(1, Ordering::Relaxed);
        Ok(bernoulli_vote(self.master, a.id, b.id, rep, p))
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(i: u64) -> Candidate {
        Candidate::bare(i)
    }

    #[test]
    fn linear_model_probabilities() {
        let m = PreferenceModel::linear(vec![1.0_f64, 0.0], 0.2).unwrap();
        assert!((m.win_prob(0, 1) - 0.7).abs() < 1e-12);
        assert!((m.win_prob(1, 0) - 0.3).abs() < 1e-12);
        assert_eq!(m.gamma(), 1.0);

        let eq = PreferenceModel::linear(vec![3.5, 3.5], 0.7).unwrap();
        assert_eq!(eq.win_prob(0, 1), 0.5);

        let clamped = PreferenceModel::linear(vec![5.0, 0.0], 0.2).unwrap();
        assert_eq!(clamped.win_prob(0, 1), 1.0);
        assert_eq!(clamped.win_prob(1, 0), 0.0);
    }

    #[test]
    fn linear_model_rejects_non_finite() {
        assert_eq!(
            PreferenceModel::linear(vec![f64::NAN, 0.0], 0.2),
            Err(ModelError::NonFiniteUtility(0))
        );
    }

    #[test]
    fn btl_model_probabilities() {
        let m = PreferenceModel::btl(vec![3.0_f64, 1.0]).unwrap();
        assert!((m.win_prob(0, 1) - 0.75).abs() < 1e-12);

        let sym = PreferenceModel::btl(vec![1.0, 1.0]).unwrap();
        assert_eq!(sym.win_prob(0, 1), 0.5);

        let m9 = PreferenceModel::btl(vec![9.0_f64, 1.0, 1.0]).unwrap();
        assert!((m9.win_prob(0, 1) - 0.9).abs() < 1e-12);
        assert!((m9.win_prob(0, 2) - 0.9).abs() < 1e-12);

        assert_eq!(PreferenceModel::btl(vec![1.0, 0.0]), Err(ModelError::NonPositiveWeight(1)));
        assert_eq!(PreferenceModel::btl(vec![-1.0]), Err(ModelError::NonPositiveWeight(0)));
    }

    #[test]
    fn antisymmetry_exact() {
        let lin = PreferenceModel::linear(vec![2.0, 0.3, -1.0], 0.13).unwrap();
        let btl = PreferenceModel::btl(vec![4.0, 2.0, 1.0]).unwrap();
        for m in [lin, btl] {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(m.win_prob(i, j) + m.win_prob(j, i), 1.0, "pair ({i},{j})");
                }
                assert_eq!(m.win_prob(i, i), 0.5);
            }
        }
    }

    #[test]
    fn matrix_model_validation() {
        // Valid handcrafted matrix.
        let p = vec![vec![0.5_f64, 0.7], vec![0.3, 0.5]];
        let m = PreferenceModel::matrix(p, vec![1.0_f64, 0.0]).unwrap();
        assert_eq!(m.win_prob(0, 1), 0.7);

        // Antisymmetry violation.
        let bad = vec![vec![0.5, 0.7], vec![0.4, 0.5]];
        assert!(matches!(
            PreferenceModel::matrix(bad, vec![1.0, 0.0]),
            Err(ModelError::NotAntisymmetric { .. })
        ));

        // Ranking inconsistency: item 0 ranked higher but loses.
        let upset = vec![vec![0.5, 0.4], vec![0.6, 0.5]];
        assert!(matches!(
            PreferenceModel::matrix(upset, vec![1.0, 0.0]),
            Err(ModelError::RankingInconsistent { .. })
        ));
    }

    #[test]
    fn deterministic_model_is_noise_free() {
        let m = PreferenceModel::deterministic(vec![0.3, 1.0, -2.0]).unwrap();
        assert_eq!(m.win_prob(1, 0), 1.0);
        assert_eq!(m.win_prob(0, 1), 0.0);
        assert_eq!(m.win_prob(0, 2), 1.0);
        assert_eq!(m.best_index(), 1);
    }

    #[test]
    fn transitivity_on_btl_triple() {
        let m = PreferenceModel::btl(vec![4.0, 2.0, 1.0]).unwrap();
        let rep = check_transitivity(&m);
        assert_eq!(rep.triples_checked, 1);
        assert!(rep.triangle_ok);
        assert!(rep.sst_gamma_ok);
    }

    #[test]
    fn transitivity_unclamped_linear() {
        let m = PreferenceModel::linear(vec![0.9, 0.5, 0.2, 0.0], 0.3).unwrap();
        let rep = check_transitivity(&m);
        assert!(rep.triangle_ok);
        assert!(rep.sst_gamma_ok);
        assert_eq!(rep.triples_checked, 4);
    }

    #[test]
    fn transitivity_flags_handcrafted_sst_violation() {
        // advantages: p~(i,j) = p~(j,k) = 0.2, p~(i,k) = 0.05 < 0.2.
        let p = vec![
            vec![0.5, 0.7, 0.55],
            vec![0.3, 0.5, 0.7],
            vec![0.45, 0.3, 0.5],
        ];
        let m = PreferenceModel::matrix(p, vec![3.0, 2.0, 1.0]).unwrap();
        let rep = check_transitivity(&m);
        assert!(!rep.sst_gamma_ok);
        assert_eq!(rep.sst_violations, 1);
        assert_eq!(rep.sst_witnesses[0].triple, (0, 1, 2));
        // 0.05 < 0.2 + 0.2 so the triangle inequality still holds.
        assert!(rep.triangle_ok);
    }

    #[test]
    fn oracle_deterministic_extremes() {
        let sure = PreferenceModel::linear(vec![10.0, 0.0], 1.0).unwrap();
        let o = SimulatedOracle::new(sure, 42);
        for _ in 0..20 {
            assert_eq!(o.compare(&cand(0), &cand(1)).unwrap(), Vote::First);
        }
        let never = PreferenceModel::linear(vec![0.0, 10.0], 1.0).unwrap();
        let o = SimulatedOracle::new(never, 43);
        for _ in 0..20 {
            assert_eq!(o.compare(&cand(0), &cand(1)).unwrap(), Vote::Second);
        }
    }

    #[test]
    fn oracle_monte_carlo_rate() {
        // p(0, 1) = 0.7; 10_000 draws land within +-0.02 of it.
        let m = PreferenceModel::linear(vec![1.0, 0.0], 0.2).unwrap();
        let o = SimulatedOracle::new(m, 7);
        let n = 10_000;
        let wins = (0..n)
            .filter(|_| o.compare(&cand(0), &cand(1)).unwrap() == Vote::First)
            .count();
        let rate = wins as f64 / n as f64;
        assert!((rate - 0.7).abs() < 0.02, "rate={rate}");
        assert_eq!(o.calls(), n as u64);
    }

    #[test]
    fn oracle_stream_is_pure_function_of_seed_and_queries() {
        let model = PreferenceModel::linear(vec![2.0, 1.0, 0.0], 0.1).unwrap();
        let run = |seed: u64| -> Vec<Vote> {
            let o = SimulatedOracle::new(model.clone(), seed);
            let queries = [(0u64, 1u64), (1, 2), (0, 1), (0, 2), (0, 1)];
            queries.iter().map(|&(a, b)| o.compare(&cand(a), &cand(b)).unwrap()).collect()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6)); // overwhelmingly likely for 5 draws at p!=0/1
    }

    #[test]
    fn oracle_repetitions_are_independent_of_other_pairs() {
        // Interleaving queries on another pair must not change this pair's stream.
        let model = PreferenceModel::linear(vec![1.0, 0.5, 0.0], 0.2).unwrap();
        let a = SimulatedOracle::new(model.clone(), 11);
        let plain: Vec<Vote> = (0..50).map(|_| a.compare(&cand(0), &cand(1)).unwrap()).collect();

        let b = SimulatedOracle::new(model, 11);
        let mut interleaved = Vec::new();
        for i in 0..50 {
            if i % 3 == 0 {
                let _ = b.compare(&cand(1), &cand(2)).unwrap();
            }
            interleaved.push(b.compare(&cand(0), &cand(1)).unwrap());
        }
        assert_eq!(plain, interleaved);
    }

    #[test]
    fn model_json_round_trip() {
        let m = PreferenceModel::btl(vec![3.0, 1.0]).unwrap().with_gamma(0.5).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"kind\":\"btl\""), "{json}");
        assert!(json.contains("\"gamma\":0.5"), "{json}");
        let back: PreferenceModel<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);

        let lin: PreferenceModel<f64> = serde_json::from_str(
            r#"{"kind":"linear","utilities":[1.0,0.0],"slope":0.2,"gamma":1.0}"#,
        )
        .unwrap();
        assert!((lin.win_prob(0, 1) - 0.7).abs() < 1e-12);
    }
}
