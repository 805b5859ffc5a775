//! Recursive-descent parser: tokens to [`Statement`]s.
//!
//! ```text
//! line     := "qubits" INT | "state" NAME "=" sum | "obs" NAME "=" oexpr
//!           | "measure" NAME ("," NAME)+ "outcomes" SIGNS
//!           | "assert_prob" NAME ("," NAME)+ SIGNS "=" INT ["/" INT]
//!           | "report" NAME
//! sum      := ["-"] product (("+" | "-") product)*
//! product  := factor ("*" factor)*
//! factor   := [coeff ["*"]] atom
//! atom     := KET | NAME | "(" sum ")" | "normalize" "(" sum ")"
//!           | "singlet" "(" INT "," INT ["," sum] ")"
//!           | "phi0" | "phi1" | "psi0" | "psi1" | "eta_tilde"
//! coeff    := catom (("*" | "/") catom)*
//! catom    := INT | "sqrt" "(" INT ")" | "i"
//! oexpr    := "sigma" AXIS INT | "F" | "G" | NAME
//!           | "embed" "(" oexpr ";" INT ("," INT)* ";" INT ")"
//! SIGNS    := ("+" | "-" | "0")+
//! ```

use super::ast::*;
use super::error::{ErrorKind, ScenarioError};
use super::lexer::{Token, TokenKind};
use crate::observables::PauliAxis;
use crate::states::parse_axis_bits;

const RESERVED: &[&str] = &[
    "qubits",
    "state",
    "obs",
    "measure",
    "outcomes",
    "assert_prob",
    "report",
    "normalize",
    "singlet",
    "sqrt",
    "i",
    "phi0",
    "phi1",
    "psi0",
    "psi1",
    "eta_tilde",
    "F",
    "G",
    "embed",
    "sigma",
];

fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word) || sigma_axis(word).is_some()
}

/// `sigmax`, `sigma_x` and friends.
fn sigma_axis(word: &str) -> Option<PauliAxis> {
    let rest = word.strip_prefix("sigma")?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    let mut chars = rest.chars();
    let axis = PauliAxis::from_char(chars.next()?)?;
    chars.next().is_none().then_some(axis)
}

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ScenarioError>;

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek_nth(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ScenarioError {
        let t = self.peek();
        ScenarioError::new(ErrorKind::Syntax, t.line, t.col, message)
    }

    fn describe(kind: &TokenKind) -> String {
        match kind {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Int(s) => format!("`{s}`"),
            TokenKind::Ket(s) => format!("`|{s}>`"),
            TokenKind::Newline => "end of line".into(),
            other => format!("`{}`", symbol(other)),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!("expected `{}`, found {}", symbol(&kind), Self::describe(&self.peek().kind))))
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == word)
    }

    fn expect_keyword(&mut self, word: &str) -> PResult<()> {
        if self.is_ident(word) {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{word}`, found {}", Self::describe(&self.peek().kind))))
        }
    }

    fn expect_int(&mut self) -> PResult<u64> {
        match &self.peek().kind {
            TokenKind::Int(digits) => {
                let v = digits.parse().map_err(|_| self.error_here("integer too large"))?;
                self.bump();
                Ok(v)
            }
            other => Err(self.error_here(format!("expected an integer, found {}", Self::describe(other)))),
        }
    }

    fn expect_usize(&mut self) -> PResult<usize> {
        let t = self.peek().clone();
        let v = self.expect_int()?;
        usize::try_from(v).map_err(|_| ScenarioError::new(ErrorKind::Syntax, t.line, t.col, "integer too large"))
    }

    fn expect_name(&mut self) -> PResult<NameRef> {
        let t = self.peek().clone();
        match &t.kind {
            TokenKind::Ident(s) if !is_reserved(s) => {
                self.bump();
                Ok(NameRef { name: s.clone(), line: t.line, col: t.col })
            }
            TokenKind::Ident(s) => Err(self.error_here(format!("`{s}` is a reserved word, expected a name"))),
            other => Err(self.error_here(format!("expected a name, found {}", Self::describe(other)))),
        }
    }

    fn expect_end_of_line(&mut self) -> PResult<()> {
        if self.peek().kind == TokenKind::Newline {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected end of line, found {}", Self::describe(&self.peek().kind))))
        }
    }

    pub fn parse_statements(&mut self) -> PResult<Vec<Statement>> {
        let mut out = Vec::new();
        while !self.at_end() {
            if self.peek().kind == TokenKind::Newline {
                self.bump();
                continue;
            }
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> PResult<Statement> {
        let head = self.peek().clone();
        let keyword = match &head.kind {
            TokenKind::Ident(s) => s.clone(),
            other => return Err(self.error_here(format!("expected a statement, found {}", Self::describe(other)))),
        };
        self.bump();
        let kind = match keyword.as_str() {
            "qubits" => StatementKind::Qubits(self.expect_usize()?),
            "state" => {
                let name = self.expect_name()?;
                self.expect(TokenKind::Eq)?;
                StatementKind::State { name, expr: self.sum()? }
            }
            "obs" => {
                let name = self.expect_name()?;
                self.expect(TokenKind::Eq)?;
                StatementKind::Obs { name, expr: self.oexpr()? }
            }
            "measure" => {
                let (state, observables) = self.name_list()?;
                self.expect_keyword("outcomes")?;
                let outcomes = self.signs()?;
                StatementKind::Measure { state, observables, outcomes }
            }
            "assert_prob" => {
                let (state, observables) = self.name_list()?;
                let outcomes = self.signs()?;
                self.expect(TokenKind::Eq)?;
                let num = self.expect_int()?;
                let den = if self.peek().kind == TokenKind::Slash {
                    self.bump();
                    let t = self.peek().clone();
                    let d = self.expect_int()?;
                    if d == 0 {
                        return Err(ScenarioError::new(ErrorKind::Syntax, t.line, t.col, "zero denominator"));
                    }
                    d
                } else {
                    1
                };
                StatementKind::AssertProb { state, observables, outcomes, num, den }
            }
            "report" => StatementKind::Report(self.expect_name()?),
            other => {
                return Err(ScenarioError::new(
                    ErrorKind::Syntax,
                    head.line,
                    head.col,
                    format!("unknown statement `{other}`"),
                ))
            }
        };
        self.expect_end_of_line()?;
        Ok(Statement { line: head.line, kind })
    }

    /// `NAME ("," NAME)+`: a state followed by at least one observable.
    fn name_list(&mut self) -> PResult<(NameRef, Vec<NameRef>)> {
        let state = self.expect_name()?;
        let mut observables = Vec::new();
        while self.peek().kind == TokenKind::Comma {
            self.bump();
            observables.push(self.expect_name()?);
        }
        if observables.is_empty() {
            return Err(self.error_here("expected `,` and at least one observable name"));
        }
        Ok((state, observables))
    }

    fn signs(&mut self) -> PResult<Vec<Sign>> {
        let mut out = Vec::new();
        loop {
            match &self.peek().kind {
                TokenKind::Plus => out.push(Sign::Plus),
                TokenKind::Minus => out.push(Sign::Minus),
                TokenKind::Int(d) if d.chars().all(|c| c == '0') => out.extend(d.chars().map(|_| Sign::Zero)),
                _ => break,
            }
            self.bump();
        }
        if out.is_empty() {
            return Err(self.error_here(format!(
                "expected an outcome string of `+`, `-` or `0`, found {}",
                Self::describe(&self.peek().kind)
            )));
        }
        Ok(out)
    }

    fn sum(&mut self) -> PResult<StateExpr> {
        let mut terms = Vec::new();
        let mut sign = TermSign::Plus;
        if self.peek().kind == TokenKind::Minus {
            self.bump();
            sign = TermSign::Minus;
        }
        loop {
            terms.push((sign, self.product()?));
            sign = match self.peek().kind {
                TokenKind::Plus => TermSign::Plus,
                TokenKind::Minus => TermSign::Minus,
                _ => break,
            };
            self.bump();
        }
        if terms.len() == 1 && terms[0].0 == TermSign::Plus {
            Ok(terms.pop().unwrap().1)
        } else {
            Ok(StateExpr::Sum(terms))
        }
    }

    fn product(&mut self) -> PResult<StateExpr> {
        let mut factors = vec![self.factor()?];
        while self.peek().kind == TokenKind::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(StateExpr::Tensor(factors))
        }
    }

    fn starts_coeff(&self) -> bool {
        match &self.peek().kind {
            TokenKind::Int(_) => true,
            TokenKind::Ident(s) => s == "sqrt" || s == "i",
            _ => false,
        }
    }

    fn factor(&mut self) -> PResult<StateExpr> {
        if !self.starts_coeff() {
            return self.atom();
        }
        let coeff = self.coeff()?;
        if self.peek().kind == TokenKind::Star {
            self.bump();
        }
        Ok(StateExpr::Scaled(coeff, Box::new(self.atom()?)))
    }

    fn coeff(&mut self) -> PResult<Coeff> {
        let mut parts = vec![(CoeffOp::Mul, self.coeff_atom()?)];
        loop {
            let op = match self.peek().kind {
                TokenKind::Slash => CoeffOp::Div,
                TokenKind::Star => CoeffOp::Mul,
                _ => break,
            };
            // `*` continues the coefficient only when another coefficient atom follows.
            let next_is_atom = match self.peek_nth(1).map(|t| &t.kind) {
                Some(TokenKind::Int(_)) => true,
                Some(TokenKind::Ident(s)) => s == "sqrt" || s == "i",
                _ => false,
            };
            if op == CoeffOp::Mul && !next_is_atom {
                break;
            }
            self.bump();
            parts.push((op, self.coeff_atom()?));
        }
        Ok(Coeff(parts))
    }

    fn coeff_atom(&mut self) -> PResult<CoeffAtom> {
        if self.is_ident("i") {
            self.bump();
            return Ok(CoeffAtom::I);
        }
        if self.is_ident("sqrt") {
            self.bump();
            self.expect(TokenKind::LParen)?;
            let n = self.expect_int()?;
            self.expect(TokenKind::RParen)?;
            return Ok(CoeffAtom::Sqrt(n));
        }
        match &self.peek().kind {
            TokenKind::Int(_) => Ok(CoeffAtom::Int(self.expect_int()?)),
            other => Err(self.error_here(format!("expected a coefficient, found {}", Self::describe(other)))),
        }
    }

    fn atom(&mut self) -> PResult<StateExpr> {
        let t = self.peek().clone();
        match &t.kind {
            TokenKind::Ket(body) => {
                self.bump();
                Ok(StateExpr::Ket(parse_axis_bits(body).expect("lexer validated ket")))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.sum()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(word) => {
                if let Some(b) = BuiltinState::from_name(word) {
                    self.bump();
                    return Ok(StateExpr::Builtin(b));
                }
                match word.as_str() {
                    "normalize" => {
                        self.bump();
                        self.expect(TokenKind::LParen)?;
                        let e = self.sum()?;
                        self.expect(TokenKind::RParen)?;
                        Ok(StateExpr::Normalize(Box::new(e)))
                    }
                    "singlet" => {
                        self.bump();
                        self.expect(TokenKind::LParen)?;
                        let i = self.expect_usize()?;
                        self.expect(TokenKind::Comma)?;
                        let j = self.expect_usize()?;
                        let filler = if self.peek().kind == TokenKind::Comma {
                            self.bump();
                            Some(Box::new(self.sum()?))
                        } else {
                            None
                        };
                        self.expect(TokenKind::RParen)?;
                        Ok(StateExpr::Singlet { i, j, filler })
                    }
                    _ => Ok(StateExpr::Name(self.expect_name()?)),
                }
            }
            other => Err(self.error_here(format!("expected a state expression, found {}", Self::describe(other)))),
        }
    }

    fn oexpr(&mut self) -> PResult<ObsExpr> {
        let t = self.peek().clone();
        let word = match &t.kind {
            TokenKind::Ident(w) => w.clone(),
            other => {
                return Err(
                    self.error_here(format!("expected an observable expression, found {}", Self::describe(other)))
                )
            }
        };
        if let Some(axis) = sigma_axis(&word) {
            self.bump();
            return Ok(ObsExpr::Sigma(axis, self.expect_usize()?));
        }
        match word.as_str() {
            "sigma" => {
                self.bump();
                let axis = match &self.peek().kind {
                    TokenKind::Ident(a) if a.len() == 1 => PauliAxis::from_char(a.chars().next().unwrap()),
                    _ => None,
                }
                .ok_or_else(|| self.error_here("expected an axis `x`, `y` or `z`"))?;
                self.bump();
                Ok(ObsExpr::Sigma(axis, self.expect_usize()?))
            }
            "F" => {
                self.bump();
                Ok(ObsExpr::F)
            }
            "G" => {
                self.bump();
                Ok(ObsExpr::G)
            }
            "embed" => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let inner = self.oexpr()?;
                self.expect(TokenKind::Semi)?;
                let mut sites = vec![self.expect_usize()?];
                while self.peek().kind == TokenKind::Comma {
                    self.bump();
                    sites.push(self.expect_usize()?);
                }
                self.expect(TokenKind::Semi)?;
                let n = self.expect_usize()?;
                self.expect(TokenKind::RParen)?;
                Ok(ObsExpr::Embed { inner: Box::new(inner), sites, n })
            }
            _ => Ok(ObsExpr::Name(self.expect_name()?)),
        }
    }
}

fn symbol(kind: &TokenKind) -> &'static str {
    match kind {
        TokenKind::Eq => "=",
        TokenKind::Comma => ",",
        TokenKind::Semi => ";",
        TokenKind::LParen => "(",
        TokenKind::RParen => ")",
        TokenKind::Star => "*",
        TokenKind::Plus => "+",
        TokenKind::Minus => "-",
        TokenKind::Slash => "/",
        TokenKind::Newline => "end of line",
        TokenKind::Ident(_) => "name",
        TokenKind::Int(_) => "integer",
        TokenKind::Ket(_) => "ket",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::lexer::tokenize;

    fn parse(text: &str) -> PResult<Vec<Statement>> {
        Parser::new(tokenize(text)?).parse_statements()
    }

    fn state_expr(text: &str) -> StateExpr {
        match parse(&format!("state s = {text}")).unwrap().remove(0).kind {
            StatementKind::State { expr, .. } => expr,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coefficient_forms() {
        let e = state_expr("1*sqrt(3) psi1");
        let StateExpr::Scaled(c, inner) = e else { panic!() };
        assert_eq!(c.0, vec![(CoeffOp::Mul, CoeffAtom::Int(1)), (CoeffOp::Mul, CoeffAtom::Sqrt(3))]);
        assert_eq!(*inner, StateExpr::Builtin(BuiltinState::Psi1));
        let StateExpr::Scaled(c, _) = state_expr("sqrt(2)/2 * |0>") else { panic!() };
        assert!((c.value().unwrap().re - 0.5f64.sqrt()).abs() < 1e-15);
        let StateExpr::Scaled(c, _) = state_expr("i/2 |1>") else { panic!() };
        assert_eq!(c.value().unwrap(), num_complex::Complex64::new(0.0, 0.5));
    }

    #[test]
    fn tensor_versus_coefficient_star() {
        // `2 * |0>` scales; `|0> * |1>` tensors.
        assert!(matches!(state_expr("2 * |0>"), StateExpr::Scaled(..)));
        assert!(matches!(state_expr("|0> * |1>"), StateExpr::Tensor(ref f) if f.len() == 2));
        assert!(
            matches!(state_expr("|0> * 1/2 |1>"), StateExpr::Tensor(ref f) if matches!(f[1], StateExpr::Scaled(..)))
        );
    }

    #[test]
    fn eta_tilde_line() {
        let e = state_expr("1/2 (|00++> * (psi0 + 1*sqrt(3) psi1))");
        let StateExpr::Scaled(_, inner) = e else { panic!() };
        let StateExpr::Tensor(factors) = *inner else { panic!() };
        assert!(matches!(factors[1], StateExpr::Sum(ref t) if t.len() == 2));
    }

    #[test]
    fn statements() {
        let stmts = parse(
            "qubits 8\nobs f4 = embed(F; 1,2,3,4; 8)\nobs z = sigma z 1\nobs x = sigma_x 3\n\
             measure et, z, x outcomes +-\nassert_prob et, f4 0 = 11/12\nreport et\n",
        )
        .unwrap();
        assert_eq!(stmts.len(), 7);
        assert!(
            matches!(&stmts[1].kind, StatementKind::Obs { expr: ObsExpr::Embed { sites, n: 8, .. }, .. } if sites == &[1, 2, 3, 4])
        );
        assert!(matches!(&stmts[2].kind, StatementKind::Obs { expr: ObsExpr::Sigma(PauliAxis::Z, 1), .. }));
        assert!(matches!(&stmts[3].kind, StatementKind::Obs { expr: ObsExpr::Sigma(PauliAxis::X, 3), .. }));
        assert!(
            matches!(&stmts[4].kind, StatementKind::Measure { outcomes, .. } if outcomes == &[Sign::Plus, Sign::Minus])
        );
        assert!(
            matches!(&stmts[5].kind, StatementKind::AssertProb { num: 11, den: 12, outcomes, .. } if outcomes == &[Sign::Zero])
        );
        assert_eq!(stmts[6].line, 7);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("state = |0>", 1, 7),
            ("state a |0>", 1, 9),
            ("state a = (|0>", 1, 15),
            ("measure a outcomes +", 1, 11),
            ("measure a, b outcomes", 1, 22),
            ("obs o = sigma q 1", 1, 15),
            ("frobnicate 3", 1, 1),
            ("qubits 4 4", 1, 10),
            ("state a = sqrt 2 |0>", 1, 16),
            ("assert_prob a, b + = 1/0", 1, 24),
            ("state i = |0>", 1, 7),
        ];
        for (text, line, col) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.kind, ErrorKind::Syntax, "{text}: {err}");
            assert_eq!((err.line, err.col), (line, col), "{text}: {err}");
        }
    }
}
