//! `refute`, `audit-function` and `audit-invariance`.

use std::fmt::Write;

use serde::Serialize;

use super::format::{eigen, prob, sig12};
use super::{render, usage_error, Outcome, RunConfig, EXIT_FAILED, EXIT_OK};
use crate::config::Config;
use crate::error::Result;
use crate::linalg::inner;
use crate::measurement::{correlation_check, ConditionalCertainty};
use crate::observables::{
    check_invariance_trials, embed, equal_rotation_patterns, observable_f, observable_g, per_site_patterns,
    FunctionReport, SpectralObservable,
};
use crate::scenario::ast::parse_signs;
use crate::scenario::{
    claimed_value_table, dirac_audit, run_claimed_protocol, ClaimedValue, OverlapRow, ProtocolReport, Verdict,
};
use crate::states::{all_up_ket, eta_tilde, spin_zero_basis};

/// Tolerance for the reproduced overlaps.
const OVERLAP_TOL: f64 = 1e-12;
const ROTATIONS: usize = 100;
/// Per-site rotations must move `F` and `G` by more than this ...
const PER_SITE_THRESHOLD: f64 = 1e-3;
/// ... in at least this many of the trials.
const PER_SITE_MIN_COUNT: usize = 95;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceSummary {
    pub observable: String,
    pub equal_trials: usize,
    pub equal_max_deviation: f64,
    pub equal_invariant: bool,
    pub per_site_trials: usize,
    pub per_site_min_deviation: f64,
    pub per_site_count_above_threshold: usize,
    pub per_site_threshold: f64,
}

impl InvarianceSummary {
    fn passed(&self) -> bool {
        self.equal_invariant && self.per_site_count_above_threshold >= PER_SITE_MIN_COUNT
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StageDetails {
    SpinZero { overlap_phi0: f64, overlap_phi1_squared: f64, basis_orthonormality_deviation: f64 },
    Protocol(ProtocolReport),
    Function { report: FunctionReport },
    Invariance { observables: Vec<InvarianceSummary> },
    Correlation { max_conditional_certainty: f64, perfectly_correlated: bool, conditionals: Vec<ConditionalCertainty> },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    pub details: StageDetails,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefuteReport {
    pub command: String,
    pub seed: u64,
    pub stages: Vec<Stage>,
    pub first_failed_stage: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap_table: Option<Vec<OverlapRow>>,
    pub exit_code: i32,
}

fn stage(index: usize, name: &str, run: impl FnOnce() -> Result<(bool, StageDetails)>) -> Stage {
    let (passed, details) = run().unwrap_or_else(|e| (false, StageDetails::Error { message: e.to_string() }));
    Stage { index, name: name.into(), passed, details }
}

fn spin_zero_stage(config: &Config) -> Stage {
    stage(1, "spin-zero reconstruction", || {
        let basis = spin_zero_basis();
        let up = all_up_ket();
        let overlap_phi0 = inner(&up, &basis.phi0)?.norm();
        let overlap_phi1_squared = inner(&up, &basis.phi1)?.norm_sqr();
        let cross = inner(&basis.phi0, &basis.phi1)?.norm();
        let dev = cross.max((basis.phi0.norm_sqr() - 1.0).abs()).max((basis.phi1.norm_sqr() - 1.0).abs());
        let passed =
            overlap_phi0 < OVERLAP_TOL && (overlap_phi1_squared - 1.0 / 12.0).abs() < OVERLAP_TOL && dev < config.orth;
        Ok((passed, StageDetails::SpinZero { overlap_phi0, overlap_phi1_squared, basis_orthonormality_deviation: dev }))
    })
}

fn protocol_stage(config: &Config) -> Stage {
    stage(2, "claimed protocol on eta_tilde", || {
        let outcome = parse_signs("++++").expect("valid signs");
        let report = run_claimed_protocol(&eta_tilde(), &outcome, config)?;
        let passed = report.claimed_value == ClaimedValue::Plus && report.verdict == Verdict::Refuted;
        Ok((passed, StageDetails::Protocol(report)))
    })
}

fn function_stage(config: &Config) -> Stage {
    stage(3, "functional dependence audit", || {
        let report = dirac_audit(config)?;
        Ok((!report.is_function, StageDetails::Function { report }))
    })
}

fn summarize(obs: &SpectralObservable, seed: u64, config: &Config) -> Result<InvarianceSummary> {
    let equal = check_invariance_trials(obs, &equal_rotation_patterns(seed, ROTATIONS), config)?;
    let per_site = check_invariance_trials(obs, &per_site_patterns(seed, ROTATIONS, obs.n_qubits()), config)?;
    Ok(InvarianceSummary {
        observable: obs.label().to_string(),
        equal_trials: equal.trials,
        equal_max_deviation: equal.max_deviation,
        equal_invariant: equal.invariant,
        per_site_trials: per_site.trials,
        per_site_min_deviation: per_site.deviations.iter().copied().fold(f64::INFINITY, f64::min),
        per_site_count_above_threshold: per_site.count_above(PER_SITE_THRESHOLD),
        per_site_threshold: PER_SITE_THRESHOLD,
    })
}

/// `F` and `G` under 100 equal and 100 per-site seeded rotations.
pub fn invariance_stage(seed: u64, config: &Config) -> Stage {
    stage(4, "rotation invariance audit", || {
        let observables = vec![summarize(&observable_f(), seed, config)?, summarize(&observable_g(), seed, config)?];
        Ok((observables.iter().all(InvarianceSummary::passed), StageDetails::Invariance { observables }))
    })
}

fn correlation_stage(config: &Config) -> Stage {
    stage(5, "F-G correlation on eta_tilde", || {
        let f = embed(&observable_f(), &[1, 2, 3, 4], 8)?.with_label("F");
        let g = embed(&observable_g(), &[5, 6, 7, 8], 8)?.with_label("G");
        let r = correlation_check(&eta_tilde(), &f, &g, config)?;
        Ok((
            !r.perfectly_correlated,
            StageDetails::Correlation {
                max_conditional_certainty: r.max_conditional_certainty,
                perfectly_correlated: r.perfectly_correlated,
                conditionals: r.conditionals,
            },
        ))
    })
}

fn finish(rc: &RunConfig, command: &str, stages: Vec<Stage>, overlap_table: Option<Vec<OverlapRow>>) -> Outcome {
    let first_failed_stage = stages.iter().find(|s| !s.passed).map(|s| s.index);
    let exit_code = if first_failed_stage.is_some() { EXIT_FAILED } else { EXIT_OK };
    let report =
        RefuteReport { command: command.into(), seed: rc.seed, stages, first_failed_stage, overlap_table, exit_code };
    let stderr = report
        .stages
        .iter()
        .find(|s| !s.passed)
        .map(|s| format!("error: stage {} ({}) failed\n", s.index, s.name))
        .unwrap_or_default();
    Outcome { code: exit_code, stdout: render(rc, &report, text_report), stderr }
}

/// The five-stage refutation pipeline.
pub fn cmd_refutation(rc: &RunConfig) -> Outcome {
    let config = match rc.config() {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let stages = vec![
        spin_zero_stage(&config),
        protocol_stage(&config),
        function_stage(&config),
        invariance_stage(rc.seed, &config),
        correlation_stage(&config),
    ];
    finish(rc, "refute", stages, None)
}

/// Stage 3 on its own, with the table of claimed values for all 16 outcome strings.
pub fn cmd_audit_function(rc: &RunConfig) -> Outcome {
    let config = match rc.config() {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    finish(rc, "audit-function", vec![function_stage(&config)], Some(claimed_value_table(&config)))
}

/// Stage 4 on its own.
pub fn cmd_audit_invariance(rc: &RunConfig) -> Outcome {
    let config = match rc.config() {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    finish(rc, "audit-invariance", vec![invariance_stage(rc.seed, &config)], None)
}

fn labels(values: &[f64]) -> String {
    values.iter().map(|v| eigen(*v)).collect::<Vec<_>>().join(", ")
}

fn text_report(r: &RefuteReport) -> String {
    let mut out = String::new();
    writeln!(out, "{} (seed {})", r.command, r.seed).unwrap();
    for s in &r.stages {
        writeln!(out, "[{}] {}: {}", s.index, s.name, if s.passed { "PASS" } else { "FAIL" }).unwrap();
        match &s.details {
            StageDetails::SpinZero { overlap_phi0, overlap_phi1_squared, basis_orthonormality_deviation } => {
                writeln!(out, "    |<0 0 + +|phi0>|={}", sig12(*overlap_phi0)).unwrap();
                writeln!(out, "    |<0 0 + +|phi1>|^2={}", prob(*overlap_phi1_squared)).unwrap();
                writeln!(out, "    orthonormality deviation {}", sig12(*basis_orthonormality_deviation)).unwrap();
            }
            StageDetails::Protocol(p) => {
                writeln!(out, "    outcomes {} with probability {}", p.outcome, prob(p.outcome_probability)).unwrap();
                let claimed = match p.claimed_value.value() {
                    Some(v) => eigen(v),
                    None => format!("{:?}", p.claimed_value).to_lowercase(),
                };
                writeln!(out, "    claimed value of F: {claimed}").unwrap();
                for (label, q) in &p.quantum_distribution.entries {
                    writeln!(out, "    P(F={})={}", eigen(label[0]), prob(*q)).unwrap();
                }
                writeln!(
                    out,
                    "    verdict: {} (certainty {})",
                    if p.verdict == Verdict::Refuted { "refuted" } else { "confirmed" },
                    prob(p.certainty)
                )
                .unwrap();
            }
            StageDetails::Function { report } => {
                writeln!(out, "    F is a function of (σz1, σz2, σx3, σx4): {}", report.is_function).unwrap();
                if let Some(w) = &report.witness {
                    writeln!(out, "    witness: joint outcome ({}), dimension {}", labels(&w.outcome), w.joint_dim)
                        .unwrap();
                    for (value, weight) in &w.branch_weights {
                        writeln!(out, "    weight on F={}: {}", eigen(*value), prob(*weight)).unwrap();
                    }
                }
                if let Some(table) = &report.value_table {
                    for (outcome, value) in table {
                        writeln!(out, "    ({}) -> {}", labels(outcome), eigen(*value)).unwrap();
                    }
                }
            }
            StageDetails::Invariance { observables } => {
                for o in observables {
                    writeln!(
                        out,
                        "    {}: equal rotations max deviation {} over {} trials ({})",
                        o.observable,
                        sig12(o.equal_max_deviation),
                        o.equal_trials,
                        if o.equal_invariant { "invariant" } else { "not invariant" }
                    )
                    .unwrap();
                    writeln!(
                        out,
                        "    {}: per-site rotations above {} in {}/{} trials, min deviation {}",
                        o.observable,
                        sig12(o.per_site_threshold),
                        o.per_site_count_above_threshold,
                        o.per_site_trials,
                        sig12(o.per_site_min_deviation)
                    )
                    .unwrap();
                }
            }
            StageDetails::Correlation { max_conditional_certainty, perfectly_correlated, conditionals } => {
                for c in conditionals {
                    writeln!(
                        out,
                        "    F={} (p={}): most likely G={} with P={}",
                        eigen(c.a),
                        prob(c.p_a),
                        eigen(c.b),
                        prob(c.p_b_given_a)
                    )
                    .unwrap();
                }
                writeln!(out, "    max conditional certainty {}", prob(*max_conditional_certainty)).unwrap();
                writeln!(out, "    perfectly correlated: {perfectly_correlated}").unwrap();
            }
            StageDetails::Error { message } => writeln!(out, "    error: {message}").unwrap(),
        }
    }
    if let Some(table) = &r.overlap_table {
        writeln!(out, "claimed values (σz1 σz2 σx3 σx4):").unwrap();
        for row in table {
            let claimed = row.claimed_value.value().map_or(format!("{:?}", row.claimed_value).to_lowercase(), eigen);
            writeln!(
                out,
                "    {}  <.|phi0>={}  <.|phi1>={}  claimed {}",
                row.outcome,
                sig12(row.overlap_phi0[0]),
                sig12(row.overlap_phi1[0]),
                claimed
            )
            .unwrap();
        }
    }
    match r.first_failed_stage {
        None => writeln!(out, "result: all stages passed").unwrap(),
        Some(k) => writeln!(out, "result: stage {k} failed").unwrap(),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{Command, Format};

    #[test]
    fn default_refutation_passes() {
        let out = cmd_refutation(&RunConfig::new(Command::Refute));
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out.stdout.contains("P(F=+1)=0.0833333333333 (1/12)"), "{}", out.stdout);
        assert!(out.stdout.contains("max conditional certainty 0.75 (3/4)"));
    }

    #[test]
    fn tight_invariance_tolerance_fails_stage_four() {
        let rc = RunConfig::new(Command::Refute).with_tolerance("inv", 1e-16).with_format(Format::Json);
        let out = cmd_refutation(&rc);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("stage 4"));
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["first_failed_stage"], 4);
    }

    #[test]
    fn audit_function_lists_sixteen_rows() {
        let out = cmd_audit_function(&RunConfig::new(Command::AuditFunction).with_format(Format::Json));
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["overlap_table"].as_array().unwrap().len(), 16);
        assert_eq!(v["stages"][0]["details"]["report"]["witness"]["outcome"], serde_json::json!([1.0, 1.0, 1.0, 1.0]));
    }
}
