//! Command implementations behind the `luders` binary.
//!
//! Every command returns an [`Outcome`] holding the exit code and the
//! rendered report, so the commands can be exercised without a process.
//! Text and JSON renderings are produced from the same report structs.

pub mod format;
mod pipeline;
mod run;

use std::path::PathBuf;

use serde::Serialize;

pub use pipeline::{
    cmd_audit_function, cmd_audit_invariance, cmd_refutation, invariance_stage, InvarianceSummary, RefuteReport, Stage,
    StageDetails,
};
pub use run::{cmd_run, cmd_sample, ErrorInfo, RunReport, SampleBlock, SampleRow, Summary};

use crate::config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Refute,
    Sample,
    AuditFunction,
    AuditInvariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub seed: u64,
    pub trials: u64,
    /// `(name, value)` pairs applied to [`Config::default`] in order.
    pub tolerances: Vec<(String, f64)>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, input: None, seed: 0, trials: 100_000, tolerances: Vec::new(), format: Format::Text }
    }

    pub fn with_input(mut self, path: impl Into<PathBuf>) -> Self {
        self.input = Some(path.into());
        self
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.push((name.to_string(), value));
        self
    }

    /// Library configuration with the overrides applied.
    pub fn config(&self) -> Result<Config, String> {
        let mut c = Config::default();
        for (name, value) in &self.tolerances {
            c.set(name, *value)?;
        }
        Ok(c)
    }
}

/// Parses `name=value` as given to `--tol`.
pub fn parse_tolerance(arg: &str) -> Result<(String, f64), String> {
    let (name, value) = arg.split_once('=').ok_or_else(|| format!("expected name=value, got `{arg}`"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("`{value}` is not a number"))?;
    Config::default().set(name.trim(), value)?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    /// One-line diagnostics for failures, empty on success.
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Dispatches on `rc.command`.
pub fn execute(rc: &RunConfig) -> Outcome {
    match rc.command {
        Command::Run => cmd_run(rc),
        Command::Refute => cmd_refutation(rc),
        Command::Sample => cmd_sample(rc),
        Command::AuditFunction => cmd_audit_function(rc),
        Command::AuditInvariance => cmd_audit_invariance(rc),
    }
}

fn render<T: Serialize>(rc: &RunConfig, report: &T, text: impl FnOnce(&T) -> String) -> String {
    match rc.format {
        Format::Text => text(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

fn usage_error(message: String) -> Outcome {
    Outcome { code: EXIT_PARSE, stdout: String::new(), stderr: format!("error: {message}\n") }
}
