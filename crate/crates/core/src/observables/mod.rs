//! Observables given by spectral data: eigenvalue ↦ orthonormal eigenbasis.
//!
//! Matrices are derived from the spectral data on demand. Collapse and Born
//! probabilities work directly on the eigenbases, so the eigensolver is only
//! needed when an observable starts life as a matrix.

pub(crate) mod dirac;
mod rotation;

pub use dirac::{is_function_of, joint_eigenspaces, FunctionReport, JointEigenspace, Witness};
pub use rotation::{
    check_invariance, check_invariance_trials, equal_rotation_patterns, per_site_patterns, random_su2,
    InvarianceReport, RotationPattern, Su2,
};

use num_complex::Complex64;

use crate::config::{Config, DEFAULT_MAX_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::{
    check_sites, complete_basis, hermitian_eigen, inner_unchecked, scatter_bits, MatrixOperator, StateVector, ZERO,
};
use crate::states::{bob_basis, spin_zero_basis, SpinZeroBasis};

/// One eigenvalue and an orthonormal basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct Branch {
    pub eigenvalue: f64,
    pub basis: Vec<StateVector>,
}

impl Branch {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// A Hermitian observable as a list of eigenbranches whose projectors
/// resolve the identity.
#[derive(Debug, Clone)]
pub struct SpectralObservable {
    label: String,
    n_qubits: usize,
    branches: Vec<Branch>,
    /// 1-based sites the observable acts on nontrivially.
    support: Vec<usize>,
}

impl SpectralObservable {
    /// Validates distinct eigenvalues, orthonormality of the union of the
    /// eigenbases, and completeness (the bases together span the space).
    pub fn new(
        label: impl Into<String>,
        n_qubits: usize,
        branches: Vec<Branch>,
        support: Vec<usize>,
        config: &Config,
    ) -> Result<Self> {
        let label = label.into();
        if n_qubits == 0 || n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity { requested: n_qubits, max: DEFAULT_MAX_QUBITS });
        }
        check_sites(&support, n_qubits)?;
        let dim = 1usize << n_qubits;
        for (i, b) in branches.iter().enumerate() {
            if !b.eigenvalue.is_finite() {
                return Err(Error::InvalidObservable(format!("{label}: non-finite eigenvalue")));
            }
            if b.basis.is_empty() {
                return Err(Error::InvalidObservable(format!("{label}: empty eigenspace for {}", b.eigenvalue)));
            }
            if branches[..i].iter().any(|o| (o.eigenvalue - b.eigenvalue).abs() <= config.cluster) {
                return Err(Error::InvalidObservable(format!("{label}: repeated eigenvalue {}", b.eigenvalue)));
            }
            for v in &b.basis {
                if v.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
                }
            }
        }
        let all: Vec<&StateVector> = branches.iter().flat_map(|b| &b.basis).collect();
        if all.len() != dim {
            return Err(Error::InvalidObservable(format!(
                "{label}: eigenbases hold {} vectors, need {dim}",
                all.len()
            )));
        }
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                let d = (inner_unchecked(a.amplitudes(), b.amplitudes()) - target).norm();
                if d >= config.orth.max(config.recon) {
                    return Err(Error::InvalidObservable(format!(
                        "{label}: eigenvectors {i} and {j} are not orthonormal (deviation {d:e})"
                    )));
                }
            }
        }
        Ok(SpectralObservable { label, n_qubits, branches, support })
    }

    /// Groups `(eigenvalue, eigenvector)` pairs into branches, merging values
    /// within `config.cluster`.
    pub fn from_eigenpairs(
        label: impl Into<String>,
        pairs: Vec<(f64, StateVector)>,
        support: Vec<usize>,
        config: &Config,
    ) -> Result<Self> {
        let n_qubits =
            pairs.first().map(|(_, v)| v.n_qubits()).ok_or_else(|| Error::InvalidObservable("no eigenpairs".into()))?;
        let mut branches: Vec<Branch> = Vec::new();
        for (value, v) in pairs {
            match branches.iter_mut().find(|b| (b.eigenvalue - value).abs() <= config.cluster) {
                Some(b) => b.basis.push(v),
                None => branches.push(Branch { eigenvalue: value, basis: vec![v] }),
            }
        }
        Self::new(label, n_qubits, branches, support, config)
    }

    /// Diagonalizes a Hermitian matrix and clusters its spectrum.
    pub fn from_matrix(label: impl Into<String>, m: &MatrixOperator, config: &Config) -> Result<Self> {
        let d = hermitian_eigen(m, config)?;
        let n_qubits = m.dim().trailing_zeros() as usize;
        let branches = d
            .clusters(config.cluster)
            .into_iter()
            .map(|(value, idx)| Branch {
                eigenvalue: value,
                basis: idx.into_iter().map(|i| d.eigenvectors[i].clone()).collect(),
            })
            .collect();
        Self::new(label, n_qubits, branches, (1..=n_qubits).collect(), config)
    }

    pub(crate) fn from_parts(label: String, n_qubits: usize, branches: Vec<Branch>, support: Vec<usize>) -> Self {
        SpectralObservable { label, n_qubits, branches, support }
    }

    /// The identity on `n` qubits: a single branch with eigenvalue 1 and empty support.
    pub fn identity(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity { requested: n_qubits, max: DEFAULT_MAX_QUBITS });
        }
        let basis = (0..1usize << n_qubits).map(|i| StateVector::basis(n_qubits, i).unwrap()).collect();
        Ok(Self::from_parts("I".into(), n_qubits, vec![Branch { eigenvalue: 1.0, basis }], Vec::new()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.eigenvalue).collect()
    }

    /// Index of the branch whose eigenvalue is within `tol` of `value`.
    pub fn branch_index(&self, value: f64, tol: f64) -> Option<usize> {
        self.branches.iter().position(|b| (b.eigenvalue - value).abs() <= tol)
    }

    /// `Pᵢ|state>` for branch `i`. Large branches are handled as the
    /// complement of the others.
    pub fn project(&self, branch: usize, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.dim() });
        }
        let rank = self.branches[branch].rank();
        if 2 * rank <= self.dim() {
            Ok(project_onto(&self.branches[branch].basis, state))
        } else {
            let mut out = state.amplitudes().to_vec();
            for (j, b) in self.branches.iter().enumerate() {
                if j == branch {
                    continue;
                }
                let part = project_onto(&b.basis, state);
                for (o, p) in out.iter_mut().zip(part.amplitudes()) {
                    *o -= p;
                }
            }
            Ok(StateVector::from_raw(state.n_qubits(), out))
        }
    }

    /// `Σ λᵢ Pᵢ`.
    pub fn matrix(&self) -> MatrixOperator {
        let dim = self.dim();
        let mut m = MatrixOperator::zeros(dim);
        for b in &self.branches {
            if b.eigenvalue == 0.0 {
                continue;
            }
            for v in &b.basis {
                let a = v.amplitudes();
                for r in 0..dim {
                    if a[r] == ZERO {
                        continue;
                    }
                    let ar = a[r] * b.eigenvalue;
                    for (c, ac) in a.iter().enumerate() {
                        m.add_at(r, c, ar * ac.conj());
                    }
                }
            }
        }
        m
    }

    /// `max |Σ Pᵢ − I|` computed through the eigenvectors.
    pub fn completeness_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut sum = MatrixOperator::zeros(dim);
        for v in self.branches.iter().flat_map(|b| &b.basis) {
            let a = v.amplitudes();
            for r in 0..dim {
                for c in 0..dim {
                    sum.add_at(r, c, a[r] * a[c].conj());
                }
            }
        }
        sum.max_abs_diff(&MatrixOperator::identity(dim)).expect("same dim")
    }

    /// The product of two commuting observables, built from their joint
    /// eigenspaces.
    pub fn product(&self, other: &SpectralObservable, config: &Config) -> Result<SpectralObservable> {
        let spaces = joint_eigenspaces(&[self, other], config)?;
        let pairs = spaces
            .into_iter()
            .flat_map(|s| {
                let value = s.outcome.iter().product::<f64>();
                s.basis.into_iter().map(move |v| (value, v))
            })
            .collect();
        let mut support: Vec<usize> = self.support.iter().chain(&other.support).copied().collect();
        support.sort_unstable();
        support.dedup();
        Self::from_eigenpairs(format!("{}·{}", self.label, other.label), pairs, support, config)
    }
}

pub(crate) fn project_onto(basis: &[StateVector], state: &StateVector) -> StateVector {
    let mut out = vec![ZERO; state.dim()];
    for v in basis {
        let c = inner_unchecked(v.amplitudes(), state.amplitudes());
        if c == ZERO {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v.amplitudes()) {
            *o += c * x;
        }
    }
    StateVector::from_raw(state.n_qubits(), out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn from_char(c: char) -> Option<PauliAxis> {
        match c.to_ascii_lowercase() {
            'x' => Some(PauliAxis::X),
            'y' => Some(PauliAxis::Y),
            'z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }
}

/// σ_axis on 1-based `site` of `n` qubits.
pub fn pauli(axis: PauliAxis, site: usize, n: usize) -> Result<SpectralObservable> {
    if site == 0 || site > n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (up, down) = match axis {
        PauliAxis::Z => ([c(1.0, 0.0), ZERO], [ZERO, c(1.0, 0.0)]),
        PauliAxis::X => ([c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]),
        PauliAxis::Y => ([c(s, 0.0), c(0.0, s)], [c(s, 0.0), c(0.0, -s)]),
    };
    let label = format!("σ{}{}", axis.to_char(), site);
    let single = SpectralObservable::from_parts(
        label.clone(),
        1,
        vec![
            Branch { eigenvalue: 1.0, basis: vec![StateVector::from_raw(1, up.to_vec())] },
            Branch { eigenvalue: -1.0, basis: vec![StateVector::from_raw(1, down.to_vec())] },
        ],
        vec![1],
    );
    Ok(embed(&single, &[site], n)?.with_label(label))
}

/// Collective observable with eigenvalue +1 on `plus`, -1 on `minus` and 0 on
/// the orthogonal complement (completed in computational-basis order).
pub fn collective_observable(label: &str, basis: &SpinZeroBasis) -> SpectralObservable {
    let n = basis.phi0.n_qubits();
    let rest = complete_basis(&[basis.phi1.clone(), basis.phi0.clone()], n);
    SpectralObservable::from_parts(
        label.to_string(),
        n,
        vec![
            Branch { eigenvalue: 1.0, basis: vec![basis.phi1.clone()] },
            Branch { eigenvalue: -1.0, basis: vec![basis.phi0.clone()] },
            Branch { eigenvalue: 0.0, basis: rest },
        ],
        (1..=n).collect(),
    )
}

/// Alice's `F` on four qubits: +1 on φ₁, -1 on φ₀, 0 elsewhere.
pub fn observable_f() -> SpectralObservable {
    collective_observable("F", &spin_zero_basis())
}

/// Bob's `G` on four qubits: +1 on ψ₁, -1 on ψ₀, 0 elsewhere.
pub fn observable_g() -> SpectralObservable {
    collective_observable("G", &bob_basis())
}

/// Lifts `obs` onto the 1-based `sites` of an `n`-qubit register (`obs ⊗ I`
/// up to qubit ordering). Qubit k of `obs` lands on `sites[k-1]`.
pub fn embed(obs: &SpectralObservable, sites: &[usize], n: usize) -> Result<SpectralObservable> {
    if sites.len() != obs.n_qubits {
        return Err(Error::WrongArity { expected: obs.n_qubits, found: sites.len() });
    }
    if n > DEFAULT_MAX_QUBITS {
        return Err(Error::Capacity { requested: n, max: DEFAULT_MAX_QUBITS });
    }
    check_sites(sites, n)?;
    let others: Vec<usize> = (1..=n).filter(|s| !sites.contains(s)).collect();
    let inner_idx: Vec<usize> = (0..obs.dim()).map(|v| scatter_bits(v, sites, n)).collect();
    let branches = obs
        .branches
        .iter()
        .map(|b| {
            let mut basis = Vec::with_capacity(b.rank() << others.len());
            for v in &b.basis {
                for r in 0..1usize << others.len() {
                    let base = scatter_bits(r, &others, n);
                    let mut amps = vec![ZERO; 1 << n];
                    for (i, &a) in v.amplitudes().iter().enumerate() {
                        amps[base | inner_idx[i]] = a;
                    }
                    basis.push(StateVector::from_raw(n, amps));
                }
            }
            Branch { eigenvalue: b.eigenvalue, basis }
        })
        .collect();
    let support = obs.support.iter().map(|&s| sites[s - 1]).collect();
    let label = if obs.n_qubits == n && sites.iter().enumerate().all(|(i, &s)| s == i + 1) {
        obs.label.clone()
    } else {
        format!("{}@{}", obs.label, sites.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))
    };
    Ok(SpectralObservable::from_parts(label, n, branches, support))
}
