//! The scenario language: parsing, validation, execution, and the claimed
//! single-spin protocol for `F`.
//!
//! ```
//! use luders::scenario::parse_scenario;
//! use luders::Config;
//!
//! let s = parse_scenario(
//!     "state et = eta_tilde\n\
//!      obs f4 = embed(F; 1,2,3,4; 8)\n\
//!      assert_prob et, f4 + = 1/12\n",
//! )
//! .unwrap();
//! let run = s.run(&Config::default(), None);
//! assert!(run.error.is_none() && run.all_passed());
//! ```

pub mod ast;
mod error;
mod eval;
mod lexer;
mod parser;
pub mod protocol;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

pub use ast::{signs_to_string, Sign, Statement, StatementKind};
pub use error::{ErrorKind, RuntimeError, ScenarioError};
pub use protocol::{
    assign_claimed_value, assign_claimed_value_with, check_eta_candidate, claimed_value_table, dirac_audit,
    dirac_audit_with, run_claimed_protocol, run_protocol_with, ClaimedValue, EtaCheck, OverlapRow, ProtocolReport,
    Verdict,
};

use crate::config::Config;
use crate::linalg::StateVector;
use crate::measurement::{born_distribution, run_sequence, sample, sequence_distribution, sequence_probability};
use crate::measurement::{Distribution, FrequencyTable};
use crate::observables::SpectralObservable;
use eval::{Env, EvalError, Value};

/// A parsed and validated scenario.
///
/// Bindings hold the values as of parse time; [`Scenario::run`] re-evaluates
/// state definitions in program order so that later definitions see
/// post-measurement states.
#[derive(Debug, Clone)]
pub struct Scenario {
    statements: Vec<Statement>,
    n_qubits: Option<usize>,
    states: Vec<(String, StateVector)>,
    observables: Vec<(String, SpectralObservable)>,
}

/// Parses with the default [`Config`].
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    parse_scenario_with(text, &Config::default())
}

pub fn parse_scenario_with(text: &str, config: &Config) -> Result<Scenario, ScenarioError> {
    let tokens = lexer::tokenize(text)?;
    let statements = parser::Parser::new(tokens).parse_statements()?;
    Scenario::validate(statements, config)
}

fn semantic(e: EvalError) -> ScenarioError {
    ScenarioError::new(ErrorKind::Semantic, e.line, e.col, e.message)
}

impl Scenario {
    fn validate(statements: Vec<Statement>, config: &Config) -> Result<Self, ScenarioError> {
        let mut n_qubits = None;
        let mut bindings: HashMap<String, Value> = HashMap::new();
        let mut states = Vec::new();
        let mut observables = Vec::new();
        let err = |line, col, msg: String| ScenarioError::new(ErrorKind::Semantic, line, col, msg);
        for stmt in &statements {
            let env = |at| Env { n_qubits, bindings: &bindings, config, at };
            match &stmt.kind {
                StatementKind::Qubits(n) => {
                    if n_qubits.is_some() {
                        return Err(err(stmt.line, 1, "`qubits` declared twice".into()));
                    }
                    if *n == 0 || *n > config.max_qubits {
                        return Err(err(stmt.line, 8, format!("qubit count must be in 1..={}", config.max_qubits)));
                    }
                    n_qubits = Some(*n);
                }
                StatementKind::State { name, expr } => {
                    if bindings.contains_key(&name.name) {
                        return Err(err(name.line, name.col, format!("`{}` is already defined", name.name)));
                    }
                    let v = env((name.line, name.col)).state(expr).map_err(semantic)?;
                    if !v.is_normalized(config) {
                        return Err(err(
                            name.line,
                            name.col,
                            format!(
                                "state `{}` has squared norm {}, wrap it in normalize(...)",
                                name.name,
                                v.norm_sqr()
                            ),
                        ));
                    }
                    states.push((name.name.clone(), v.clone()));
                    bindings.insert(name.name.clone(), Value::State(v));
                }
                StatementKind::Obs { name, expr } => {
                    if bindings.contains_key(&name.name) {
                        return Err(err(name.line, name.col, format!("`{}` is already defined", name.name)));
                    }
                    let o = env((name.line, name.col)).obs(expr).map_err(semantic)?.with_label(name.name.clone());
                    observables.push((name.name.clone(), o.clone()));
                    bindings.insert(name.name.clone(), Value::Obs(o));
                }
                StatementKind::Measure { state, observables: obs, outcomes }
                | StatementKind::AssertProb { state, observables: obs, outcomes, .. } => {
                    let e = env((state.line, state.col));
                    e.lookup_state(state).map_err(semantic)?;
                    for o in obs {
                        e.lookup_obs(o).map_err(semantic)?;
                    }
                    if outcomes.len() != obs.len() {
                        let last = obs.last().expect("parser requires an observable");
                        return Err(err(
                            last.line,
                            last.col,
                            format!("{} outcome signs for {} observables", outcomes.len(), obs.len()),
                        ));
                    }
                }
                StatementKind::Report(name) => {
                    if !bindings.contains_key(&name.name) {
                        return Err(err(name.line, name.col, format!("unknown name `{}`", name.name)));
                    }
                }
            }
        }
        Ok(Scenario { statements, n_qubits, states, observables })
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn n_qubits(&self) -> Option<usize> {
        self.n_qubits
    }

    /// State bindings in definition order, with their parse-time values.
    pub fn states(&self) -> &[(String, StateVector)] {
        &self.states
    }

    pub fn observables(&self) -> &[(String, SpectralObservable)] {
        &self.observables
    }

    pub fn state(&self, name: &str) -> Option<&StateVector> {
        self.states.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn observable(&self, name: &str) -> Option<&SpectralObservable> {
        self.observables.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    pub fn has_measurements(&self) -> bool {
        self.statements.iter().any(|s| matches!(s.kind, StatementKind::Measure { .. }))
    }

    /// Same program and bindings whose amplitudes and matrix entries agree within `tol`.
    pub fn equivalent(&self, other: &Scenario, tol: f64) -> bool {
        let program = |s: &Scenario| -> Vec<String> {
            s.statements
                .iter()
                .filter(|st| !matches!(st.kind, StatementKind::State { .. } | StatementKind::Obs { .. }))
                .map(|st| st.kind.to_string())
                .collect()
        };
        let close_states = self.states.len() == other.states.len()
            && self
                .states
                .iter()
                .zip(&other.states)
                .all(|((na, a), (nb, b))| na == nb && a.max_abs_diff(b).is_ok_and(|d| d <= tol));
        let close_obs = self.observables.len() == other.observables.len()
            && self
                .observables
                .iter()
                .zip(&other.observables)
                .all(|((na, a), (nb, b))| na == nb && a.matrix().max_abs_diff(&b.matrix()).is_ok_and(|d| d <= tol));
        self.n_qubits == other.n_qubits && program(self) == program(other) && close_states && close_obs
    }

    /// Executes the program. Failed assertions do not stop the run; a runtime
    /// error does, and the events recorded so far are kept.
    ///
    /// With `sampling = Some((trials, seed))` the k-th `measure` line
    /// (0-based) is also sampled `trials` times with seed `seed + k`.
    pub fn run(&self, config: &Config, sampling: Option<(u64, u64)>) -> RunResult {
        let mut events = Vec::new();
        let error = self.execute(config, sampling, &mut events).err();
        RunResult { events, error }
    }

    fn execute(
        &self,
        config: &Config,
        sampling: Option<(u64, u64)>,
        events: &mut Vec<Event>,
    ) -> Result<(), RuntimeError> {
        let mut bindings: HashMap<String, Value> = HashMap::new();
        let mut measure_index = 0u64;
        for stmt in &self.statements {
            let line = stmt.line;
            let rt = |error: crate::Error| RuntimeError { line, error };
            let eval_rt = |e: EvalError| RuntimeError { line, error: crate::Error::InvalidArgument(e.message) };
            let env = Env { n_qubits: self.n_qubits, bindings: &bindings, config, at: (line, 1) };
            match &stmt.kind {
                StatementKind::Qubits(_) => {}
                StatementKind::State { name, expr } => {
                    let v = env.state(expr).map_err(eval_rt)?;
                    bindings.insert(name.name.clone(), Value::State(v));
                }
                StatementKind::Obs { name, expr } => {
                    let o = env.obs(expr).map_err(eval_rt)?.with_label(name.name.clone());
                    bindings.insert(name.name.clone(), Value::Obs(o));
                }
                StatementKind::Measure { state, observables, outcomes } => {
                    let psi = env.lookup_state(state).map_err(eval_rt)?.clone();
                    let program: Vec<&SpectralObservable> =
                        observables.iter().map(|o| env.lookup_obs(o)).collect::<Result<_, _>>().map_err(eval_rt)?;
                    let values: Vec<f64> = outcomes.iter().map(|s| s.value()).collect();
                    let exact = sequence_distribution(&psi, &program, config).map_err(rt)?;
                    let sampled = match sampling {
                        Some((trials, seed)) => {
                            Some(sample(&psi, &program, trials, seed.wrapping_add(measure_index), config).map_err(rt)?)
                        }
                        None => None,
                    };
                    measure_index += 1;
                    let mut steps = Vec::with_capacity(program.len());
                    let mut current = psi.clone();
                    for (k, obs) in program.iter().enumerate() {
                        let distribution = born_distribution(&current, obs, config)
                            .map_err(|e| rt(crate::Error::Step { step: k + 1, source: Box::new(e) }))?;
                        let record = run_sequence(&current, &[*obs], &[values[k]], config)
                            .map_err(|e| rt(renumber_step(e, k + 1)))?
                            .pop()
                            .expect("one step");
                        steps.push(MeasureStep {
                            observable: obs.label().to_string(),
                            outcome: record.outcome,
                            probability: record.probability,
                            distribution,
                        });
                        current = record.post_state;
                    }
                    let joint_probability = steps.iter().map(|s| s.probability).product();
                    events.push(Event::Measure(MeasureEvent {
                        line,
                        state: state.name.clone(),
                        outcomes: signs_to_string(outcomes),
                        steps,
                        joint_probability,
                        program_distribution: exact,
                        sampled,
                    }));
                    bindings.insert(state.name.clone(), Value::State(current));
                }
                StatementKind::AssertProb { state, observables, outcomes, num, den } => {
                    let psi = env.lookup_state(state).map_err(eval_rt)?;
                    let program: Vec<&SpectralObservable> =
                        observables.iter().map(|o| env.lookup_obs(o)).collect::<Result<_, _>>().map_err(eval_rt)?;
                    let values: Vec<f64> = outcomes.iter().map(|s| s.value()).collect();
                    let computed = sequence_probability(psi, &program, &values, config).map_err(rt)?;
                    let expected = *num as f64 / *den as f64;
                    events.push(Event::Assert(AssertEvent {
                        line,
                        state: state.name.clone(),
                        observables: observables.iter().map(|o| o.name.clone()).collect(),
                        outcomes: signs_to_string(outcomes),
                        expected_text: ast::rational(*num, *den),
                        expected,
                        computed,
                        passed: (computed - expected).abs() <= config.prob,
                    }));
                }
                StatementKind::Report(name) => {
                    let body = match bindings.get(&name.name) {
                        Some(Value::State(s)) => ReportBody::State {
                            n_qubits: s.n_qubits(),
                            norm: s.norm(),
                            amplitudes: s
                                .amplitudes()
                                .iter()
                                .enumerate()
                                .filter(|(_, a)| a.norm() > config.zero.sqrt())
                                .map(|(i, a)| Amplitude {
                                    ket: format!("{:0width$b}", i, width = s.n_qubits()),
                                    re: a.re,
                                    im: a.im,
                                })
                                .collect(),
                        },
                        Some(Value::Obs(o)) => ReportBody::Observable {
                            n_qubits: o.n_qubits(),
                            support: o.support().to_vec(),
                            spectrum: o.branches().iter().map(|b| (b.eigenvalue, b.rank())).collect(),
                        },
                        None => unreachable!("validated at parse time"),
                    };
                    events.push(Event::Report(ReportEvent { line, name: name.name.clone(), body }));
                }
            }
        }
        Ok(())
    }
}

/// `run_sequence` on a single step numbers it 1; report the real position.
fn renumber_step(e: crate::Error, step: usize) -> crate::Error {
    match e {
        crate::Error::Step { source, .. } => crate::Error::Step { step, source },
        other => other,
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureStep {
    pub observable: String,
    pub outcome: f64,
    /// Conditional on the earlier steps of the same line.
    pub probability: f64,
    /// Born distribution of this step's observable before it collapses.
    pub distribution: Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureEvent {
    pub line: usize,
    pub state: String,
    pub outcomes: String,
    pub steps: Vec<MeasureStep>,
    pub joint_probability: f64,
    /// Exact distribution over all outcome strings of the line's program.
    pub program_distribution: Distribution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<FrequencyTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertEvent {
    pub line: usize,
    pub state: String,
    pub observables: Vec<String>,
    pub outcomes: String,
    pub expected_text: String,
    pub expected: f64,
    pub computed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Amplitude {
    pub ket: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReportBody {
    State { n_qubits: usize, norm: f64, amplitudes: Vec<Amplitude> },
    Observable { n_qubits: usize, support: Vec<usize>, spectrum: Vec<(f64, usize)> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEvent {
    pub line: usize,
    pub name: String,
    pub body: ReportBody,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Measure(MeasureEvent),
    Assert(AssertEvent),
    Report(ReportEvent),
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub events: Vec<Event>,
    pub error: Option<RuntimeError>,
}

impl RunResult {
    pub fn all_passed(&self) -> bool {
        self.events.iter().all(|e| !matches!(e, Event::Assert(a) if !a.passed))
    }

    pub fn assertions(&self) -> impl Iterator<Item = &AssertEvent> {
        self.events.iter().filter_map(|e| match e {
            Event::Assert(a) => Some(a),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::eta_tilde;

    const REFUTATION: &str = "\
qubits 8
state et = 1/2 (|00++> * (psi0 + 1*sqrt(3) psi1))
obs f4 = embed(F; 1,2,3,4; 8)
assert_prob et, f4 + = 1/12
assert_prob et, f4 - = 0
assert_prob et, f4 0 = 11/12
";

    #[test]
    fn product_ket_amplitudes() {
        let s = parse_scenario("state x = |00++>").unwrap();
        let x = s.state("x").unwrap();
        for i in 0..16 {
            let want = if i < 4 { 0.5 } else { 0.0 };
            assert!((x.amplitude(i).re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn eta_tilde_from_coefficients() {
        let s = parse_scenario(REFUTATION).unwrap();
        assert!(s.state("et").unwrap().max_abs_diff(&eta_tilde()).unwrap() < 1e-15);
        assert_eq!(s.observable("f4").unwrap().dim(), 256);
        let run = s.run(&Config::default(), None);
        assert!(run.error.is_none());
        assert_eq!(run.assertions().count(), 3);
        assert!(run.all_passed());
    }

    #[test]
    fn failing_assertion_reports_computed_value() {
        let s =
            parse_scenario("state et = eta_tilde\nobs f4 = embed(F; 1,2,3,4; 8)\nassert_prob et, f4 + = 1\n").unwrap();
        let run = s.run(&Config::default(), None);
        let a = run.assertions().next().unwrap();
        assert!(!a.passed);
        assert!((a.computed - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn measure_rebinds_state() {
        let text = "qubits 2\nstate s = normalize(|00> + |11>)\nobs z1 = sigma z 1\nobs z2 = sigma z 2\n\
                    measure s, z1 outcomes -\nassert_prob s, z2 - = 1\nstate t = s\nreport t\n";
        let run = parse_scenario(text).unwrap().run(&Config::default(), None);
        assert!(run.error.is_none(), "{:?}", run.error);
        assert!(run.all_passed());
        let Event::Measure(m) = &run.events[0] else { panic!() };
        assert!((m.joint_probability - 0.5).abs() < 1e-15);
        let Event::Report(r) = &run.events[2] else { panic!() };
        let ReportBody::State { amplitudes, .. } = &r.body else { panic!() };
        assert_eq!(amplitudes.len(), 1);
        assert_eq!(amplitudes[0].ket, "11");
    }

    #[test]
    fn zero_probability_measure_is_runtime_error() {
        let text = "state et = eta_tilde\nobs f4 = embed(F; 1,2,3,4; 8)\nmeasure et, f4 outcomes -\n";
        let run = parse_scenario(text).unwrap().run(&Config::default(), None);
        let err = run.error.unwrap();
        assert_eq!(err.line, 3);
        assert!(matches!(err.error, crate::Error::Step { step: 1, .. }));
    }

    #[test]
    fn dimension_mismatch_is_runtime_error() {
        let run = parse_scenario("state p = phi0\nobs f4 = embed(F; 1,2,3,4; 8)\nassert_prob p, f4 + = 0\n")
            .unwrap()
            .run(&Config::default(), None);
        assert!(matches!(run.error.unwrap().error, crate::Error::DimensionMismatch { .. }));
    }

    #[test]
    fn semantic_errors() {
        let cases = [
            ("state a = b", 1, 11),
            ("state a = |0>\nstate a = |1>", 2, 7),
            ("state a = |0> + |00>", 1, 7),
            ("state a = |0> + |1>", 1, 7),
            ("obs z = sigma z 1", 1, 5),
            ("qubits 2\nobs z = sigma z 3", 2, 5),
            ("state a = |0>\nobs z = F\nmeasure a, z outcomes ++", 3, 12),
            ("state a = |0>\nmeasure a, a outcomes +", 2, 12),
            ("report nothing", 1, 8),
            ("state a = normalize(|0> - |0>)", 1, 7),
            ("state a = 1/0 |0>", 1, 7),
        ];
        for (text, line, col) in cases {
            let err = parse_scenario(text).unwrap_err();
            assert_eq!(err.kind, ErrorKind::Semantic, "{text}: {err}");
            assert_eq!((err.line, err.col), (line, col), "{text}: {err}");
        }
    }

    #[test]
    fn canonical_print_round_trips() {
        let text = "qubits 8\n# comment\nstate a = normalize(|0+> - i/2 (|1-> + sqrt(2)/3 |00>))\n\
                    state b = singlet(2, 1, a * |1>)\nstate c = a * b * |0>\nobs g = embed(G; 5,6,7,8; 8)\n\
                    obs x = sigma_x 3\nmeasure c, x, g outcomes +0\nreport g\n";
        let s1 = parse_scenario(text).unwrap();
        let printed = s1.to_string();
        let s2 = parse_scenario(&printed).unwrap();
        assert!(s1.equivalent(&s2, 1e-12), "{printed}");
        assert_eq!(printed, s2.to_string());
    }

    #[test]
    fn sampling_uses_distinct_seeds_per_line() {
        let text = "qubits 1\nstate a = normalize(|0> + |1>)\nstate b = a\nobs z = sigma z 1\n\
                    measure a, z outcomes +\nmeasure b, z outcomes +\n";
        let run = parse_scenario(text).unwrap().run(&Config::default(), Some((64, 3)));
        let seeds: Vec<u64> = run
            .events
            .iter()
            .filter_map(|e| match e {
                Event::Measure(m) => m.sampled.as_ref().map(|t| t.seed),
                _ => None,
            })
            .collect();
        assert_eq!(seeds, vec![3, 4]);
    }
}
