//! `run` and `sample`.

use std::fmt::Write;
use std::fs;

use serde::Serialize;

use super::format::{complex, eigen, outcome_label, prob, sig12};
use super::{render, usage_error, Outcome, RunConfig, EXIT_FAILED, EXIT_OK, EXIT_PARSE, EXIT_RUNTIME};
use crate::scenario::ast::parse_signs;
use crate::scenario::{parse_scenario_with, ErrorKind, Event, MeasureEvent, ReportBody, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    /// `input`, `lexical`, `syntax`, `semantic` or `runtime`.
    pub kind: String,
    pub line: Option<usize>,
    pub col: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub assertions: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub outcome: Vec<f64>,
    pub exact: f64,
    pub count: u64,
    pub frequency: f64,
    /// Binomial standard deviation of the frequency, `sqrt(p(1-p)/N)`.
    pub sigma: f64,
    /// `(frequency − exact)/sigma`; `None` when sigma is 0.
    pub deviation_sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBlock {
    pub line: usize,
    pub state: String,
    pub observables: Vec<String>,
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<SampleRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input: String,
    pub events: Vec<Event>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleBlock>>,
    pub summary: Summary,
    pub error: Option<ErrorInfo>,
    pub exit_code: i32,
}

pub fn cmd_run(rc: &RunConfig) -> Outcome {
    execute_scenario(rc, false)
}

/// Like `run`, additionally sampling every `measure` line `rc.trials` times;
/// line k (0-based) uses seed `rc.seed + k`.
pub fn cmd_sample(rc: &RunConfig) -> Outcome {
    execute_scenario(rc, true)
}

fn load(rc: &RunConfig) -> Result<(String, Scenario), ErrorInfo> {
    let input_error = |message: String| ErrorInfo { kind: "input".into(), line: None, col: None, message };
    let path = rc.input.as_ref().ok_or_else(|| input_error("no input scenario given".into()))?;
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let config = rc.config().map_err(input_error)?;
    let scenario = parse_scenario_with(&text, &config).map_err(|e| ErrorInfo {
        kind: match e.kind {
            ErrorKind::Lexical => "lexical",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Semantic => "semantic",
        }
        .into(),
        line: Some(e.line),
        col: Some(e.col),
        message: e.message,
    })?;
    Ok((path.display().to_string(), scenario))
}

fn execute_scenario(rc: &RunConfig, sampling: bool) -> Outcome {
    let command = if sampling { "sample" } else { "run" }.to_string();
    let config = match rc.config() {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    if sampling && rc.trials == 0 {
        return usage_error("trials must be at least 1".into());
    }
    let input = rc.input.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    let mut report = RunReport {
        command,
        input,
        events: Vec::new(),
        samples: None,
        summary: Summary { assertions: 0, passed: 0, failed: 0 },
        error: None,
        exit_code: EXIT_OK,
    };
    match load(rc) {
        Err(info) => {
            report.error = Some(info);
            report.exit_code = EXIT_PARSE;
        }
        Ok((_, scenario)) if sampling && !scenario.has_measurements() => {
            report.error = Some(ErrorInfo {
                kind: "input".into(),
                line: None,
                col: None,
                message: "scenario has no `measure` line to sample".into(),
            });
            report.exit_code = EXIT_PARSE;
        }
        Ok((_, scenario)) => {
            let result = scenario.run(&config, sampling.then_some((rc.trials, rc.seed)));
            let passed = result.assertions().filter(|a| a.passed).count();
            let total = result.assertions().count();
            report.summary = Summary { assertions: total, passed, failed: total - passed };
            if sampling {
                report.samples = Some(result.events.iter().filter_map(sample_block).collect());
            }
            report.events = result.events;
            report.exit_code = if let Some(err) = result.error {
                report.error = Some(ErrorInfo {
                    kind: "runtime".into(),
                    line: Some(err.line),
                    col: None,
                    message: err.error.to_string(),
                });
                EXIT_RUNTIME
            } else if total > passed {
                EXIT_FAILED
            } else {
                EXIT_OK
            };
        }
    }
    let stderr =
        report.error.as_ref().map(|e| format!("error: {}\n", error_line(&report.input, e))).unwrap_or_default();
    Outcome { code: report.exit_code, stdout: render(rc, &report, text_report), stderr }
}

fn sample_block(event: &Event) -> Option<SampleBlock> {
    let Event::Measure(m) = event else { return None };
    let table = m.sampled.as_ref()?;
    let trials = table.trials as f64;
    let rows = m
        .program_distribution
        .entries
        .iter()
        .map(|(label, p)| {
            let count = table.count(label);
            let frequency = count as f64 / trials;
            let sigma = (p * (1.0 - p) / trials).max(0.0).sqrt();
            let deviation_sigma = (sigma > 0.0).then(|| (frequency - p) / sigma);
            SampleRow { outcome: label.clone(), exact: *p, count, frequency, sigma, deviation_sigma }
        })
        .collect();
    Some(SampleBlock {
        line: m.line,
        state: m.state.clone(),
        observables: m.steps.iter().map(|s| s.observable.clone()).collect(),
        trials: table.trials,
        seed: table.seed,
        rows,
    })
}

fn error_line(input: &str, e: &ErrorInfo) -> String {
    match (e.line, e.col) {
        (Some(l), Some(c)) => format!("{input}:{l}:{c}: {} error: {}", e.kind, e.message),
        (Some(l), None) => format!("{input}:{l}: {} error: {}", e.kind, e.message),
        _ => e.message.clone(),
    }
}

fn measure_header(m: &MeasureEvent) -> String {
    let names: Vec<&str> = m.steps.iter().map(|s| s.observable.as_str()).collect();
    format!("line {}: measure {}, {} outcomes {}", m.line, m.state, names.join(", "), m.outcomes)
}

fn text_report(r: &RunReport) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", r.command, r.input).unwrap();
    for event in &r.events {
        match event {
            Event::Measure(m) => {
                writeln!(out, "{}", measure_header(m)).unwrap();
                for step in &m.steps {
                    let dist: Vec<String> = step
                        .distribution
                        .entries
                        .iter()
                        .map(|(l, p)| format!("{}: {}", eigen(l[0]), prob(*p)))
                        .collect();
                    writeln!(out, "  distribution of {}: {}", step.observable, dist.join(", ")).unwrap();
                    writeln!(out, "  P({}={})={}", step.observable, eigen(step.outcome), prob(step.probability))
                        .unwrap();
                }
                writeln!(out, "  joint probability {}", prob(m.joint_probability)).unwrap();
            }
            Event::Assert(a) => {
                let values: Vec<f64> = parse_signs(&a.outcomes).unwrap_or_default().iter().map(|s| s.value()).collect();
                writeln!(
                    out,
                    "line {}: assert_prob {}, {} {} = {}: {}",
                    a.line,
                    a.state,
                    a.observables.join(", "),
                    a.outcomes,
                    a.expected_text,
                    if a.passed { "PASS" } else { "FAIL" }
                )
                .unwrap();
                writeln!(
                    out,
                    "  P({})={} expected {}",
                    outcome_label(&a.observables, &values),
                    prob(a.computed),
                    prob(a.expected)
                )
                .unwrap();
            }
            Event::Report(rep) => match &rep.body {
                ReportBody::State { n_qubits, norm, amplitudes } => {
                    writeln!(
                        out,
                        "line {}: report {} ({} qubits, norm {})",
                        rep.line,
                        rep.name,
                        n_qubits,
                        sig12(*norm)
                    )
                    .unwrap();
                    for a in amplitudes {
                        writeln!(out, "  |{}> {}", a.ket, complex(a.re, a.im)).unwrap();
                    }
                }
                ReportBody::Observable { n_qubits, support, spectrum } => {
                    let sites: Vec<String> = support.iter().map(|s| s.to_string()).collect();
                    writeln!(
                        out,
                        "line {}: report {} ({} qubits, support {})",
                        rep.line,
                        rep.name,
                        n_qubits,
                        sites.join(",")
                    )
                    .unwrap();
                    for (value, rank) in spectrum {
                        writeln!(out, "  eigenvalue {} multiplicity {}", eigen(*value), rank).unwrap();
                    }
                }
            },
        }
    }
    if let Some(samples) = &r.samples {
        for b in samples {
            writeln!(out, "sample line {}: {} trials, seed {}", b.line, b.trials, b.seed).unwrap();
            for row in &b.rows {
                let z = row.deviation_sigma.map_or("n/a".to_string(), sig12);
                writeln!(
                    out,
                    "  {}: exact {} count {} frequency {} sigma {} deviation {}",
                    outcome_label(&b.observables, &row.outcome),
                    prob(row.exact),
                    row.count,
                    sig12(row.frequency),
                    sig12(row.sigma),
                    z
                )
                .unwrap();
            }
        }
    }
    if let Some(e) = &r.error {
        writeln!(out, "error: {}", error_line(&r.input, e)).unwrap();
    }
    writeln!(out, "assertions: {} passed, {} failed", r.summary.passed, r.summary.failed).unwrap();
    writeln!(out, "exit code: {}", r.exit_code).unwrap();
    out
}
