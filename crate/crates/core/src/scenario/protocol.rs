//! The claimed single-spin protocol for `F` and the checks that expose it.
//!
//! The protocol measures σz1, σz2, σx3, σx4 and attributes a value to `F`
//! by looking up the resulting mixed-basis ket in the expansions of φ₀ and
//! φ₁: a ket that appears only in φ₁ gives +1, only in φ₀ gives -1.

use serde::Serialize;

use super::ast::{signs_to_string, Sign};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{inner, StateVector};
use crate::measurement::{born_distribution, run_sequence, Distribution};
use crate::observables::{embed, is_function_of, observable_f, pauli, FunctionReport, PauliAxis, SpectralObservable};
use crate::states::{basis_ket, eta_tilde, spin_zero_basis, Axis, AxisBit, Bit, SpinZeroBasis};

/// Measurement axes of the protocol, sites 1 to 4.
const AXES: [Axis; 4] = [Axis::Z, Axis::Z, Axis::X, Axis::X];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimedValue {
    Plus,
    Minus,
    Ambiguous,
    Undefined,
}

impl ClaimedValue {
    /// The attributed eigenvalue, if any.
    pub fn value(self) -> Option<f64> {
        match self {
            ClaimedValue::Plus => Some(1.0),
            ClaimedValue::Minus => Some(-1.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Confirmed,
    Refuted,
}

fn outcome_ket(outcome: &[Sign]) -> Result<StateVector> {
    if outcome.len() != 4 {
        return Err(Error::WrongArity { expected: 4, found: outcome.len() });
    }
    let bits = outcome
        .iter()
        .zip(AXES)
        .map(|(s, axis)| match s {
            Sign::Plus => Ok(AxisBit { axis, bit: Bit::Zero }),
            Sign::Minus => Ok(AxisBit { axis, bit: Bit::One }),
            Sign::Zero => Err(Error::InvalidArgument("single-spin outcomes are + or -".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    basis_ket(&bits)
}

/// The lookup rule against the reconstructed φ₀, φ₁.
pub fn assign_claimed_value(outcome: &[Sign], config: &Config) -> Result<ClaimedValue> {
    assign_claimed_value_with(outcome, &spin_zero_basis(), config)
}

/// The lookup rule against a caller-supplied pair (`phi0` ↦ -1, `phi1` ↦ +1).
pub fn assign_claimed_value_with(outcome: &[Sign], basis: &SpinZeroBasis, config: &Config) -> Result<ClaimedValue> {
    Ok(overlap_row(outcome, basis, config)?.claimed_value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapRow {
    pub outcome: String,
    /// `<ket|φ₀>` as `[re, im]`.
    pub overlap_phi0: [f64; 2],
    pub overlap_phi1: [f64; 2],
    pub claimed_value: ClaimedValue,
}

fn overlap_row(outcome: &[Sign], basis: &SpinZeroBasis, config: &Config) -> Result<OverlapRow> {
    let ket = outcome_ket(outcome)?;
    let o0 = inner(&ket, &basis.phi0)?;
    let o1 = inner(&ket, &basis.phi1)?;
    let (in0, in1) = (o0.norm() > config.zero, o1.norm() > config.zero);
    let claimed_value = match (in0, in1) {
        (false, true) => ClaimedValue::Plus,
        (true, false) => ClaimedValue::Minus,
        (true, true) => ClaimedValue::Ambiguous,
        (false, false) => ClaimedValue::Undefined,
    };
    Ok(OverlapRow {
        outcome: signs_to_string(outcome),
        overlap_phi0: [o0.re, o0.im],
        overlap_phi1: [o1.re, o1.im],
        claimed_value,
    })
}

/// All 16 outcome strings, `++++` first, in binary order with `+` < `-`.
pub fn all_outcomes() -> Vec<Vec<Sign>> {
    (0..16u8).map(|k| (0..4).map(|b| if k >> (3 - b) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect()).collect()
}

/// Overlaps and attributed value for every outcome string.
pub fn claimed_value_table(config: &Config) -> Vec<OverlapRow> {
    let basis = spin_zero_basis();
    all_outcomes().iter().map(|o| overlap_row(o, &basis, config).expect("arity 4")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub outcome: String,
    /// Probability of the outcome string on the input state.
    pub outcome_probability: f64,
    pub claimed_value: ClaimedValue,
    /// Distribution of the target observable on the collapsed state.
    pub quantum_distribution: Distribution,
    pub verdict: Verdict,
    /// Probability of the claimed value; 0 when no value is attributed.
    pub certainty: f64,
}

/// The protocol on an 8-qubit state, Alice on sites 1 to 4.
pub fn run_claimed_protocol(state: &StateVector, outcome: &[Sign], config: &Config) -> Result<ProtocolReport> {
    if state.n_qubits() != 8 {
        return Err(Error::DimensionMismatch { expected: 256, found: state.dim() });
    }
    let claimed = assign_claimed_value(outcome, config)?;
    let program = single_spin_program(8)?;
    let f = embed(&observable_f(), &[1, 2, 3, 4], 8)?;
    let refs: Vec<&SpectralObservable> = program.iter().collect();
    run_protocol_with(state, &refs, outcome, &f, claimed, config)
}

/// σz1, σz2, σx3, σx4 on `n` qubits.
pub fn single_spin_program(n: usize) -> Result<Vec<SpectralObservable>> {
    let axis = |a: Axis| if a == Axis::Z { PauliAxis::Z } else { PauliAxis::X };
    AXES.iter().enumerate().map(|(k, &a)| pauli(axis(a), k + 1, n)).collect()
}

/// Generic runner: post-select `outcome` on `program`, then measure `target`
/// and check whether `claimed` comes out with certainty.
pub fn run_protocol_with(
    state: &StateVector,
    program: &[&SpectralObservable],
    outcome: &[Sign],
    target: &SpectralObservable,
    claimed: ClaimedValue,
    config: &Config,
) -> Result<ProtocolReport> {
    let values: Vec<f64> = outcome.iter().map(|s| s.value()).collect();
    let records = run_sequence(state, program, &values, config)?;
    let post = &records.last().ok_or_else(|| Error::InvalidArgument("empty program".into()))?.post_state;
    let quantum_distribution = born_distribution(post, target, config)?;
    let certainty = claimed.value().map_or(0.0, |v| quantum_distribution.prob_of(v));
    let verdict =
        if claimed.value().is_some() && certainty >= 1.0 - config.corr { Verdict::Confirmed } else { Verdict::Refuted };
    Ok(ProtocolReport {
        outcome: signs_to_string(outcome),
        outcome_probability: records.iter().map(|r| r.probability).product(),
        claimed_value: claimed,
        quantum_distribution,
        verdict,
        certainty,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaCheck {
    pub matches: bool,
    pub fidelity: f64,
    pub residual: f64,
}

/// Whether `candidate` collapses to η̃ (up to phase) on the all-up outcome.
pub fn check_eta_candidate(candidate: &StateVector, config: &Config) -> Result<EtaCheck> {
    if candidate.n_qubits() != 8 {
        return Err(Error::DimensionMismatch { expected: 256, found: candidate.dim() });
    }
    if !candidate.is_normalized(config) {
        return Err(Error::NotNormalized { norm_sqr: candidate.norm_sqr() });
    }
    let program = single_spin_program(8)?;
    let refs: Vec<&SpectralObservable> = program.iter().collect();
    let records = run_sequence(candidate, &refs, &[1.0; 4], config)?;
    let fidelity = records[3].post_state.fidelity(&eta_tilde())?;
    let residual = (1.0 - fidelity).max(0.0);
    Ok(EtaCheck { matches: residual <= 1e-10, fidelity, residual })
}

/// Is `F` a function of σz1, σz2, σx3, σx4 on the four Alice qubits?
pub fn dirac_audit(config: &Config) -> Result<FunctionReport> {
    dirac_audit_with(&observable_f(), config)
}

pub fn dirac_audit_with(f: &SpectralObservable, config: &Config) -> Result<FunctionReport> {
    let program = single_spin_program(4)?;
    let refs: Vec<&SpectralObservable> = program.iter().collect();
    is_function_of(f, &refs, config)
}
