//! Numerical tolerances and capacity limits shared by every module.

use serde::Serialize;

/// Largest register the dense representation accepts by default.
pub const DEFAULT_MAX_QUBITS: usize = 10;

/// Tolerances and limits. Every threshold used by the library is read from
/// here, so a caller can tighten or loosen any of them in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Config {
    /// Unit-norm test for state vectors.
    pub norm: f64,
    /// Pairwise orthonormality of eigenvectors and basis sets.
    pub orth: f64,
    /// Hermiticity (and unitarity) of operators, max-entry norm.
    pub herm: f64,
    /// Off-diagonal residual at which the Jacobi sweeps stop.
    pub eig: f64,
    /// Reconstruction of a matrix from its spectral data.
    pub recon: f64,
    /// Eigenvalues closer than this are treated as one eigenspace.
    pub cluster: f64,
    /// Invariance verdicts under conjugation by rotations.
    pub inv: f64,
    /// Below this a Born probability is an impossible branch.
    pub zero: f64,
    /// Conditional probability slack for "perfect" correlation and certainty.
    pub corr: f64,
    /// Slack used when a scenario asserts a probability.
    pub prob: f64,
    pub max_qubits: usize,
    pub max_sweeps: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            norm: 1e-10,
            orth: 1e-10,
            herm: 1e-10,
            eig: 1e-12,
            recon: 1e-9,
            cluster: 1e-8,
            inv: 1e-9,
            zero: 1e-14,
            corr: 1e-9,
            prob: 1e-10,
            max_qubits: DEFAULT_MAX_QUBITS,
            max_sweeps: 100,
        }
    }
}

impl Config {
    /// Names accepted by [`Config::set`].
    pub const TOLERANCE_NAMES: [&'static str; 10] =
        ["norm", "orth", "herm", "eig", "recon", "cluster", "inv", "zero", "corr", "prob"];

    /// Overrides one tolerance by name. Values must be positive and finite.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("tolerance `{name}` must be positive, got {value}"));
        }
        let slot = match name {
            "norm" => &mut self.norm,
            "orth" => &mut self.orth,
            "herm" => &mut self.herm,
            "eig" => &mut self.eig,
            "recon" => &mut self.recon,
            "cluster" => &mut self.cluster,
            "inv" => &mut self.inv,
            "zero" => &mut self.zero,
            "corr" => &mut self.corr,
            "prob" => &mut self.prob,
            other => return Err(format!("unknown tolerance `{other}`")),
        };
        *slot = value;
        Ok(())
    }
}
