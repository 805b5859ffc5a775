//! Functional dependence of one observable on a commuting set.
//!
//! `f` is a function of commuting generators when every joint eigenspace of
//! the generators lies inside a single eigenspace of `f`. Then the joint
//! outcome of the generators fixes the value of `f`.

use serde::Serialize;

use super::SpectralObservable;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{commutator, orthonormalize, StateVector};

/// A nonzero joint eigenspace of a commuting set, labelled by the outcome tuple.
#[derive(Debug, Clone)]
pub struct JointEigenspace {
    pub outcome: Vec<f64>,
    pub basis: Vec<StateVector>,
}

/// Fails with [`Error::NonCommuting`] on the first pair whose commutator has
/// an entry of size `config.recon` or more.
pub(crate) fn check_commuting(set: &[&SpectralObservable], config: &Config) -> Result<()> {
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            if a.dim() != b.dim() {
                return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
            }
            if a.support().iter().all(|s| !b.support().contains(s)) {
                continue;
            }
            let deviation = commutator(&a.matrix(), &b.matrix())?.max_abs();
            if deviation >= config.recon {
                return Err(Error::NonCommuting {
                    first: a.label().to_string(),
                    second: b.label().to_string(),
                    deviation,
                });
            }
        }
    }
    Ok(())
}

/// Joint eigenspaces of a commuting set, in lexicographic order of branch
/// indices. Empty intersections are omitted.
pub fn joint_eigenspaces(set: &[&SpectralObservable], config: &Config) -> Result<Vec<JointEigenspace>> {
    let first = set.first().ok_or_else(|| Error::InvalidArgument("empty observable set".into()))?;
    check_commuting(set, config)?;
    let n = first.n_qubits();
    let mut spaces = vec![JointEigenspace {
        outcome: Vec::new(),
        basis: (0..first.dim()).map(|i| StateVector::basis(n, i).expect("in range")).collect(),
    }];
    for obs in set {
        let mut refined = Vec::new();
        for space in &spaces {
            for (bi, branch) in obs.branches().iter().enumerate() {
                let projected: Vec<StateVector> =
                    space.basis.iter().map(|v| obs.project(bi, v)).collect::<Result<_>>()?;
                let basis = orthonormalize(&projected, 1e-6);
                if basis.is_empty() {
                    continue;
                }
                let mut outcome = space.outcome.clone();
                outcome.push(branch.eigenvalue);
                refined.push(JointEigenspace { outcome, basis });
            }
        }
        spaces = refined;
    }
    Ok(spaces)
}

/// A joint eigenspace that straddles several eigenspaces of `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub outcome: Vec<f64>,
    pub joint_dim: usize,
    /// `(eigenvalue of f, Σ ‖P_λ b‖²)` over an orthonormal basis `b` of the joint eigenspace.
    pub branch_weights: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionReport {
    pub is_function: bool,
    /// Joint outcome ↦ value of `f`; present iff `is_function`.
    pub value_table: Option<Vec<(Vec<f64>, f64)>>,
    /// Present iff not `is_function`.
    pub witness: Option<Witness>,
}

impl FunctionReport {
    pub fn value_for(&self, outcome: &[f64]) -> Option<f64> {
        self.value_table
            .as_ref()?
            .iter()
            .find(|(t, _)| t.len() == outcome.len() && t.iter().zip(outcome).all(|(a, b)| (a - b).abs() < 1e-9))
            .map(|(_, v)| *v)
    }
}

/// Decides whether `f` is a function of the commuting `generators`.
pub fn is_function_of(
    f: &SpectralObservable,
    generators: &[&SpectralObservable],
    config: &Config,
) -> Result<FunctionReport> {
    for g in generators {
        if g.dim() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
        }
    }
    let spaces = joint_eigenspaces(generators, config)?;
    let mut table = Vec::with_capacity(spaces.len());
    for space in spaces {
        let dim = space.basis.len() as f64;
        let mut weights = Vec::with_capacity(f.branches().len());
        for (bi, branch) in f.branches().iter().enumerate() {
            let mut w = 0.0;
            for v in &space.basis {
                w += f.project(bi, v)?.norm_sqr();
            }
            weights.push((branch.eigenvalue, w));
        }
        match weights.iter().find(|(_, w)| (w - dim).abs() < config.recon * dim) {
            Some(&(value, _)) => table.push((space.outcome, value)),
            None => {
                return Ok(FunctionReport {
                    is_function: false,
                    value_table: None,
                    witness: Some(Witness {
                        outcome: space.outcome,
                        joint_dim: space.basis.len(),
                        branch_weights: weights,
                    }),
                })
            }
        }
    }
    Ok(FunctionReport { is_function: true, value_table: Some(table), witness: None })
}
