//! Syntax tree of a scenario and its canonical printed form.

use std::fmt;

use num_complex::Complex64;

use crate::observables::PauliAxis;
use crate::states::AxisBit;

/// One character of an outcome string: eigenvalue +1, -1 or 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
            Sign::Zero => 0.0,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            '0' => Some(Sign::Zero),
            _ => None,
        }
    }
}

/// Parses strings such as `++-0`.
pub fn parse_signs(text: &str) -> Option<Vec<Sign>> {
    text.chars().map(Sign::from_char).collect()
}

/// `num/den`, or just `num` when `den` is 1.
pub fn rational(num: u64, den: u64) -> String {
    if den == 1 {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

pub fn signs_to_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.to_char()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffAtom {
    Int(u64),
    Sqrt(u64),
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffOp {
    Mul,
    Div,
}

/// `atom ((*|/) atom)*`; the first operator is always `Mul`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeff(pub Vec<(CoeffOp, CoeffAtom)>);

impl Coeff {
    /// `None` on division by zero.
    pub fn value(&self) -> Option<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for &(op, atom) in &self.0 {
            let v = match atom {
                CoeffAtom::Int(n) => Complex64::new(n as f64, 0.0),
                CoeffAtom::Sqrt(n) => Complex64::new((n as f64).sqrt(), 0.0),
                CoeffAtom::I => Complex64::i(),
            };
            acc = match op {
                CoeffOp::Mul => acc * v,
                CoeffOp::Div if v.norm() == 0.0 => return None,
                CoeffOp::Div => acc / v,
            };
        }
        Some(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinState {
    Phi0,
    Phi1,
    Psi0,
    Psi1,
    EtaTilde,
}

impl BuiltinState {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "phi0" => Some(Self::Phi0),
            "phi1" => Some(Self::Phi1),
            "psi0" => Some(Self::Psi0),
            "psi1" => Some(Self::Psi1),
            "eta_tilde" => Some(Self::EtaTilde),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Phi0 => "phi0",
            Self::Phi1 => "phi1",
            Self::Psi0 => "psi0",
            Self::Psi1 => "psi1",
            Self::EtaTilde => "eta_tilde",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateExpr {
    Ket(Vec<AxisBit>),
    Name(NameRef),
    Builtin(BuiltinState),
    Singlet { i: usize, j: usize, filler: Option<Box<StateExpr>> },
    Normalize(Box<StateExpr>),
    Scaled(Coeff, Box<StateExpr>),
    Tensor(Vec<StateExpr>),
    Sum(Vec<(TermSign, StateExpr)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObsExpr {
    Sigma(PauliAxis, usize),
    F,
    G,
    Name(NameRef),
    Embed { inner: Box<ObsExpr>, sites: Vec<usize>, n: usize },
}

/// A name as written, with its position for error messages.
#[derive(Debug, Clone, PartialEq)]
pub struct NameRef {
    pub name: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    Qubits(usize),
    State { name: NameRef, expr: StateExpr },
    Obs { name: NameRef, expr: ObsExpr },
    Measure { state: NameRef, observables: Vec<NameRef>, outcomes: Vec<Sign> },
    AssertProb { state: NameRef, observables: Vec<NameRef>, outcomes: Vec<Sign>, num: u64, den: u64 },
    Report(NameRef),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub line: usize,
    pub kind: StatementKind,
}

impl fmt::Display for CoeffAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffAtom::Int(n) => write!(f, "{n}"),
            CoeffAtom::Sqrt(n) => write!(f, "sqrt({n})"),
            CoeffAtom::I => write!(f, "i"),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (op, atom)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(match op {
                    CoeffOp::Mul => "*",
                    CoeffOp::Div => "/",
                })?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl StateExpr {
    /// Atoms print without parentheses in every position.
    fn is_atom(&self) -> bool {
        !matches!(self, StateExpr::Scaled(..) | StateExpr::Tensor(_) | StateExpr::Sum(_))
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atom() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    /// A tensor factor: an atom or a scaled atom.
    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateExpr::Scaled(..) => write!(f, "{self}"),
            other => other.fmt_atom(f),
        }
    }
}

impl fmt::Display for StateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateExpr::Ket(bits) => {
                write!(f, "|")?;
                for b in bits {
                    write!(f, "{b}")?;
                }
                write!(f, ">")
            }
            StateExpr::Name(n) => write!(f, "{}", n.name),
            StateExpr::Builtin(b) => write!(f, "{}", b.name()),
            StateExpr::Singlet { i, j, filler: None } => write!(f, "singlet({i}, {j})"),
            StateExpr::Singlet { i, j, filler: Some(e) } => write!(f, "singlet({i}, {j}, {e})"),
            StateExpr::Normalize(e) => write!(f, "normalize({e})"),
            StateExpr::Scaled(c, e) => {
                write!(f, "{c} ")?;
                e.fmt_atom(f)
            }
            StateExpr::Tensor(factors) => {
                for (k, e) in factors.iter().enumerate() {
                    if k > 0 {
                        write!(f, " * ")?;
                    }
                    e.fmt_factor(f)?;
                }
                Ok(())
            }
            StateExpr::Sum(terms) => {
                for (k, (sign, e)) in terms.iter().enumerate() {
                    match (k, sign) {
                        (0, TermSign::Plus) => {}
                        (0, TermSign::Minus) => write!(f, "-")?,
                        (_, TermSign::Plus) => write!(f, " + ")?,
                        (_, TermSign::Minus) => write!(f, " - ")?,
                    }
                    match e {
                        StateExpr::Sum(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ObsExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObsExpr::Sigma(axis, site) => write!(f, "sigma {} {}", axis.to_char(), site),
            ObsExpr::F => write!(f, "F"),
            ObsExpr::G => write!(f, "G"),
            ObsExpr::Name(n) => write!(f, "{}", n.name),
            ObsExpr::Embed { inner, sites, n } => {
                let sites: Vec<String> = sites.iter().map(|s| s.to_string()).collect();
                write!(f, "embed({inner}; {}; {n})", sites.join(","))
            }
        }
    }
}

fn names(state: &NameRef, observables: &[NameRef]) -> String {
    std::iter::once(state).chain(observables).map(|n| n.name.as_str()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementKind::Qubits(n) => write!(f, "qubits {n}"),
            StatementKind::State { name, expr } => write!(f, "state {} = {expr}", name.name),
            StatementKind::Obs { name, expr } => write!(f, "obs {} = {expr}", name.name),
            StatementKind::Measure { state, observables, outcomes } => {
                write!(f, "measure {} outcomes {}", names(state, observables), signs_to_string(outcomes))
            }
            StatementKind::AssertProb { state, observables, outcomes, num, den } => {
                write!(
                    f,
                    "assert_prob {} {} = {}",
                    names(state, observables),
                    signs_to_string(outcomes),
                    rational(*num, *den)
                )
            }
            StatementKind::Report(n) => write!(f, "report {}", n.name),
        }
    }
}
