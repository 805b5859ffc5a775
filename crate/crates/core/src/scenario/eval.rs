//! Evaluation of state and observable expressions against a binding table.

use std::collections::HashMap;

use num_complex::Complex64;

use super::ast::{BuiltinState, NameRef, ObsExpr, StateExpr, TermSign};
use crate::config::Config;
use crate::linalg::{tensor_capped, StateVector};
use crate::observables::{embed, observable_f, observable_g, pauli, SpectralObservable};
use crate::states::{basis_ket, bob_basis, eta_tilde, singlet_on, spin_zero_basis};

#[derive(Debug, Clone)]
pub enum Value {
    State(StateVector),
    Obs(SpectralObservable),
}

/// A failed evaluation, positioned at a name or at the enclosing binding.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

pub struct Env<'a> {
    pub n_qubits: Option<usize>,
    pub bindings: &'a HashMap<String, Value>,
    pub config: &'a Config,
    /// Where errors without a more precise position are reported.
    pub at: (usize, usize),
}

impl Env<'_> {
    fn fail(&self, message: impl Into<String>) -> EvalError {
        EvalError { line: self.at.0, col: self.at.1, message: message.into() }
    }

    fn lift<T>(&self, r: crate::Result<T>) -> Result<T, EvalError> {
        r.map_err(|e| self.fail(e.to_string()))
    }

    pub fn lookup_state(&self, name: &NameRef) -> Result<&StateVector, EvalError> {
        match self.bindings.get(&name.name) {
            Some(Value::State(s)) => Ok(s),
            Some(Value::Obs(_)) => Err(at_name(name, format!("`{}` is an observable, expected a state", name.name))),
            None => Err(at_name(name, format!("unknown name `{}`", name.name))),
        }
    }

    pub fn lookup_obs(&self, name: &NameRef) -> Result<&SpectralObservable, EvalError> {
        match self.bindings.get(&name.name) {
            Some(Value::Obs(o)) => Ok(o),
            Some(Value::State(_)) => Err(at_name(name, format!("`{}` is a state, expected an observable", name.name))),
            None => Err(at_name(name, format!("unknown name `{}`", name.name))),
        }
    }

    pub fn state(&self, expr: &StateExpr) -> Result<StateVector, EvalError> {
        match expr {
            StateExpr::Ket(bits) => self.lift(basis_ket(bits)),
            StateExpr::Name(n) => self.lookup_state(n).cloned(),
            StateExpr::Builtin(b) => Ok(match b {
                BuiltinState::Phi0 => spin_zero_basis().phi0,
                BuiltinState::Phi1 => spin_zero_basis().phi1,
                BuiltinState::Psi0 => bob_basis().phi0,
                BuiltinState::Psi1 => bob_basis().phi1,
                BuiltinState::EtaTilde => eta_tilde(),
            }),
            StateExpr::Singlet { i, j, filler } => {
                let filler = filler.as_deref().map(|f| self.state(f)).transpose()?;
                let n = 2 + filler.as_ref().map_or(0, |f| f.n_qubits());
                self.lift(singlet_on(*i, *j, n, filler.as_ref()))
            }
            StateExpr::Normalize(inner) => {
                let v = self.state(inner)?;
                if v.norm_sqr() <= self.config.zero {
                    return Err(self.fail("cannot normalize a zero vector"));
                }
                self.lift(v.normalized())
            }
            StateExpr::Scaled(c, inner) => {
                let k = c.value().ok_or_else(|| self.fail("division by zero in coefficient"))?;
                Ok(self.state(inner)?.scale(k))
            }
            StateExpr::Tensor(factors) => {
                let mut acc = self.state(&factors[0])?;
                for f in &factors[1..] {
                    acc = self.lift(tensor_capped(&acc, &self.state(f)?, self.config.max_qubits))?;
                }
                Ok(acc)
            }
            StateExpr::Sum(terms) => {
                let mut acc: Option<StateVector> = None;
                for (sign, term) in terms {
                    let mut v = self.state(term)?;
                    if *sign == TermSign::Minus {
                        v = v.scale(Complex64::new(-1.0, 0.0));
                    }
                    acc = Some(match acc {
                        None => v,
                        Some(a) => self.lift(a.try_add(&v))?,
                    });
                }
                Ok(acc.expect("parser never builds an empty sum"))
            }
        }
    }

    pub fn obs(&self, expr: &ObsExpr) -> Result<SpectralObservable, EvalError> {
        match expr {
            ObsExpr::Sigma(axis, site) => {
                let n = self.n_qubits.ok_or_else(|| self.fail("`sigma` needs a preceding `qubits` line"))?;
                self.lift(pauli(*axis, *site, n))
            }
            ObsExpr::F => Ok(observable_f()),
            ObsExpr::G => Ok(observable_g()),
            ObsExpr::Name(n) => self.lookup_obs(n).cloned(),
            ObsExpr::Embed { inner, sites, n } => {
                let inner = self.obs(inner)?;
                if *n > self.config.max_qubits {
                    return Err(self.fail(format!("{n} qubits exceed the limit of {}", self.config.max_qubits)));
                }
                self.lift(embed(&inner, sites, *n))
            }
        }
    }
}

fn at_name(name: &NameRef, message: String) -> EvalError {
    EvalError { line: name.line, col: name.col, message }
}
