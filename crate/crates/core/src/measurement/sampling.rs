//! Monte Carlo sampling of sequential measurement programs.
//!
//! Each trial walks the outcome tree of the program, drawing one outcome per
//! step from the Born distribution of the current post-measurement state.
//! Tree nodes are expanded lazily and cached, so a trial costs one uniform
//! draw per step once its path has been visited.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::check_state;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::observables::SpectralObservable;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyTable {
    pub trials: u64,
    pub seed: u64,
    /// Observed outcome strings with their counts, in branch order.
    pub counts: Vec<(Vec<f64>, u64)>,
}

impl FrequencyTable {
    pub fn count(&self, label: &[f64]) -> u64 {
        self.counts.iter().find(|(l, _)| super::same_label(l, label)).map_or(0, |(_, c)| *c)
    }

    pub fn frequency(&self, label: &[f64]) -> f64 {
        self.count(label) as f64 / self.trials as f64
    }

    /// Adds the counts of a table drawn from another seed stream.
    pub fn merge(&mut self, other: &FrequencyTable) {
        self.trials += other.trials;
        for (label, c) in &other.counts {
            match self.counts.iter_mut().find(|(l, _)| super::same_label(l, label)) {
                Some((_, mine)) => *mine += c,
                None => self.counts.push((label.clone(), *c)),
            }
        }
    }
}

struct Node {
    cumulative: Vec<f64>,
    /// Normalized post-measurement state per branch, `None` for zero weight.
    states: Vec<Option<StateVector>>,
    /// Index of the expanded node below each branch.
    next: Vec<Option<usize>>,
}

fn expand(state: &StateVector, obs: &SpectralObservable) -> Result<Node> {
    let len = obs.branches().len();
    let mut acc = 0.0;
    let mut cumulative = Vec::with_capacity(len);
    let mut states = Vec::with_capacity(len);
    for i in 0..len {
        let projected = obs.project(i, state)?;
        let p = projected.norm_sqr();
        acc += p;
        cumulative.push(acc);
        states.push((p > 0.0).then(|| projected.scale((1.0 / p.sqrt()).into())));
    }
    Ok(Node { cumulative, states, next: vec![None; len] })
}

impl Node {
    fn choose(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty spectrum");
        let u = rng.gen::<f64>() * total;
        self.cumulative
            .iter()
            .zip(&self.states)
            .position(|(&c, s)| u < c && s.is_some())
            .unwrap_or_else(|| self.states.iter().rposition(Option::is_some).expect("some branch has weight"))
    }
}

/// Samples `trials` runs of `program` on `state` with a ChaCha stream seeded by `seed`.
pub fn sample(
    state: &StateVector,
    program: &[&SpectralObservable],
    trials: u64,
    seed: u64,
    config: &Config,
) -> Result<FrequencyTable> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let first = program.first().ok_or_else(|| Error::InvalidArgument("empty program".into()))?;
    check_state(state, first, config)?;
    for obs in program {
        if obs.dim() != state.dim() {
            return Err(Error::DimensionMismatch { expected: state.dim(), found: obs.dim() });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = vec![expand(state, first)?];
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut path = Vec::with_capacity(program.len());
    for _ in 0..trials {
        path.clear();
        let mut idx = 0;
        for step in 0..program.len() {
            let choice = nodes[idx].choose(&mut rng);
            path.push(choice);
            if step + 1 == program.len() {
                break;
            }
            idx = match nodes[idx].next[choice] {
                Some(child) => child,
                None => {
                    let post = nodes[idx].states[choice].as_ref().expect("chosen branch has weight");
                    let child = expand(post, program[step + 1])?;
                    nodes.push(child);
                    let child_idx = nodes.len() - 1;
                    nodes[idx].next[choice] = Some(child_idx);
                    child_idx
                }
            };
        }
        match counts.get_mut(&path) {
            Some(c) => *c += 1,
            None => {
                counts.insert(path.clone(), 1);
            }
        }
    }

    let counts = counts
        .into_iter()
        .map(|(path, c)| {
            let label = path.iter().zip(program).map(|(&i, obs)| obs.branches()[i].eigenvalue).collect();
            (label, c)
        })
        .collect();
    Ok(FrequencyTable { trials, seed, counts })
}
