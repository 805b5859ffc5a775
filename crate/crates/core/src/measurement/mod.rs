//! Born probabilities, Lüders collapse, sequential programs, joint
//! distributions of commuting sets and correlation analysis.

mod sampling;

pub use sampling::{sample, FrequencyTable};

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::observables::{dirac::check_commuting, SpectralObservable};

/// Labels closer than this are the same outcome.
const LABEL_TOL: f64 = 1e-9;

fn same_label(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < LABEL_TOL)
}

/// Outcome labels (one eigenvalue per measured observable) with probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub entries: Vec<(Vec<f64>, f64)>,
}

impl Distribution {
    /// Probability of `label`, zero when absent.
    pub fn prob(&self, label: &[f64]) -> f64 {
        self.entries.iter().find(|(l, _)| same_label(l, label)).map_or(0.0, |(_, p)| *p)
    }

    /// Probability of a single-observable outcome.
    pub fn prob_of(&self, value: f64) -> f64 {
        self.prob(&[value])
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Marginal over position `index` of the labels.
    pub fn marginal(&self, index: usize) -> Distribution {
        let mut entries: Vec<(Vec<f64>, f64)> = Vec::new();
        for (label, p) in &self.entries {
            let key = vec![label[index]];
            match entries.iter_mut().find(|(l, _)| same_label(l, &key)) {
                Some((_, q)) => *q += p,
                None => entries.push((key, *p)),
            }
        }
        Distribution { entries }
    }
}

fn check_state(state: &StateVector, obs: &SpectralObservable, config: &Config) -> Result<()> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: obs.dim(), found: state.dim() });
    }
    if !state.is_normalized(config) {
        return Err(Error::NotNormalized { norm_sqr: state.norm_sqr() });
    }
    Ok(())
}

/// `P(λᵢ) = ‖Pᵢ|state>‖²` for every branch, zeros included, in branch order.
pub fn born_distribution(state: &StateVector, obs: &SpectralObservable, config: &Config) -> Result<Distribution> {
    check_state(state, obs, config)?;
    let entries = obs
        .branches()
        .iter()
        .enumerate()
        .map(|(i, b)| Ok((vec![b.eigenvalue], obs.project(i, state)?.norm_sqr())))
        .collect::<Result<_>>()?;
    Ok(Distribution { entries })
}

/// Result of one projective measurement.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub observable: String,
    pub outcome: f64,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Lüders collapse: `Pᵢ|state> / ‖Pᵢ|state>‖` for the branch of `outcome`.
///
/// Outcomes with probability at or below `config.zero` are impossible
/// branches and fail with [`Error::ZeroProbability`].
pub fn collapse(
    state: &StateVector,
    obs: &SpectralObservable,
    outcome: f64,
    config: &Config,
) -> Result<MeasurementRecord> {
    check_state(state, obs, config)?;
    let branch = obs
        .branch_index(outcome, config.cluster)
        .ok_or_else(|| Error::NotAnEigenvalue { observable: obs.label().to_string(), outcome })?;
    let projected = obs.project(branch, state)?;
    let probability = projected.norm_sqr();
    if probability <= config.zero {
        return Err(Error::ZeroProbability { observable: obs.label().to_string(), outcome, probability });
    }
    Ok(MeasurementRecord {
        observable: obs.label().to_string(),
        outcome: obs.branches()[branch].eigenvalue,
        probability,
        post_state: projected.scale((1.0 / probability.sqrt()).into()),
    })
}

/// Collapses left to right; step `k` (1-based) errors are wrapped in [`Error::Step`].
/// Each record's probability is conditional on the earlier outcomes.
pub fn run_sequence(
    state: &StateVector,
    program: &[&SpectralObservable],
    outcomes: &[f64],
    config: &Config,
) -> Result<Vec<MeasurementRecord>> {
    if program.len() != outcomes.len() {
        return Err(Error::WrongArity { expected: program.len(), found: outcomes.len() });
    }
    let mut current = state.clone();
    let mut records = Vec::with_capacity(program.len());
    for (step, (obs, &outcome)) in program.iter().zip(outcomes).enumerate() {
        let record = collapse(&current, obs, outcome, config)
            .map_err(|e| Error::Step { step: step + 1, source: Box::new(e) })?;
        current = record.post_state.clone();
        records.push(record);
    }
    Ok(records)
}

/// Product of the conditional step probabilities of a record list.
pub fn joint_probability(records: &[MeasurementRecord]) -> f64 {
    records.iter().map(|r| r.probability).product()
}

/// Probability of the outcome string of a sequential program, without
/// normalizing in between. Impossible strings give 0 instead of an error.
pub fn sequence_probability(
    state: &StateVector,
    program: &[&SpectralObservable],
    outcomes: &[f64],
    config: &Config,
) -> Result<f64> {
    if program.len() != outcomes.len() {
        return Err(Error::WrongArity { expected: program.len(), found: outcomes.len() });
    }
    if let Some(first) = program.first() {
        check_state(state, first, config)?;
    }
    let mut current = state.clone();
    for (obs, &outcome) in program.iter().zip(outcomes) {
        let branch = obs
            .branch_index(outcome, config.cluster)
            .ok_or_else(|| Error::NotAnEigenvalue { observable: obs.label().to_string(), outcome })?;
        current = obs.project(branch, &current)?;
    }
    Ok(current.norm_sqr())
}

/// Distribution over all outcome strings of a sequential program, in
/// lexicographic branch order. For a commuting program this equals
/// [`joint_distribution`].
pub fn sequence_distribution(
    state: &StateVector,
    program: &[&SpectralObservable],
    config: &Config,
) -> Result<Distribution> {
    let first = program.first().ok_or_else(|| Error::InvalidArgument("empty program".into()))?;
    check_state(state, first, config)?;
    let mut entries = Vec::new();
    enumerate(state, program, &mut Vec::new(), &mut entries)?;
    Ok(Distribution { entries })
}

fn enumerate(
    unnormalized: &StateVector,
    program: &[&SpectralObservable],
    prefix: &mut Vec<f64>,
    out: &mut Vec<(Vec<f64>, f64)>,
) -> Result<()> {
    let Some((obs, rest)) = program.split_first() else {
        out.push((prefix.clone(), unnormalized.norm_sqr()));
        return Ok(());
    };
    for (i, b) in obs.branches().iter().enumerate() {
        let projected = obs.project(i, unnormalized)?;
        prefix.push(b.eigenvalue);
        enumerate(&projected, rest, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Joint outcome distribution of a pairwise commuting set.
pub fn joint_distribution(state: &StateVector, set: &[&SpectralObservable], config: &Config) -> Result<Distribution> {
    check_commuting(set, config)?;
    sequence_distribution(state, set, config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalCertainty {
    pub a: f64,
    pub p_a: f64,
    /// Most likely `b` outcome given `a`.
    pub b: f64,
    pub p_b_given_a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    /// Over `(a, b)` pairs.
    pub joint: Distribution,
    pub perfectly_correlated: bool,
    pub max_conditional_certainty: f64,
    /// One entry per `a` outcome with nonzero probability.
    pub conditionals: Vec<ConditionalCertainty>,
}

/// Whether the outcome of `a` determines the outcome of `b` on `state`.
///
/// `a` and `b` must act on disjoint sites.
pub fn correlation_check(
    state: &StateVector,
    a: &SpectralObservable,
    b: &SpectralObservable,
    config: &Config,
) -> Result<CorrelationReport> {
    if a.support().iter().any(|s| b.support().contains(s)) {
        return Err(Error::OverlappingSupports { first: a.label().to_string(), second: b.label().to_string() });
    }
    let joint = joint_distribution(state, &[a, b], config)?;
    let mut conditionals = Vec::new();
    for branch in a.branches() {
        let row: Vec<&(Vec<f64>, f64)> =
            joint.entries.iter().filter(|(l, _)| (l[0] - branch.eigenvalue).abs() < LABEL_TOL).collect();
        let p_a: f64 = row.iter().map(|(_, p)| p).sum();
        if p_a <= config.zero {
            continue;
        }
        let (best, p_best) =
            row.iter().map(|(l, p)| (l[1], p / p_a)).fold((f64::NAN, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        conditionals.push(ConditionalCertainty { a: branch.eigenvalue, p_a, b: best, p_b_given_a: p_best });
    }
    let perfectly_correlated = conditionals.iter().all(|c| c.p_b_given_a >= 1.0 - config.corr);
    let max_conditional_certainty = conditionals.iter().map(|c| c.p_b_given_a).fold(0.0, f64::max);
    Ok(CorrelationReport { joint, perfectly_correlated, max_conditional_certainty, conditionals })
}
