//! Line-aware tokenizer for `.qsc` scenario files.

use super::error::{ErrorKind, ScenarioError};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    /// Digits as written, so sign strings such as `00` keep their length.
    Int(String),
    /// Body of `|...>`.
    Ket(String),
    Eq,
    Comma,
    Semi,
    LParen,
    RParen,
    Star,
    Plus,
    Minus,
    Slash,
    Newline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub col: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ScenarioError> {
    let mut tokens = Vec::new();
    for (line_idx, raw) in text.split('\n').enumerate() {
        let line_no = line_idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let simple = match c {
                '=' => Some(TokenKind::Eq),
                ',' => Some(TokenKind::Comma),
                ';' => Some(TokenKind::Semi),
                '(' => Some(TokenKind::LParen),
                ')' => Some(TokenKind::RParen),
                '*' => Some(TokenKind::Star),
                '+' => Some(TokenKind::Plus),
                '-' => Some(TokenKind::Minus),
                '/' => Some(TokenKind::Slash),
                _ => None,
            };
            if let Some(kind) = simple {
                tokens.push(Token { kind, line: line_no, col });
                i += 1;
                continue;
            }
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '|' => {
                    let start = i;
                    i += 1;
                    let mut body = String::new();
                    loop {
                        match chars.get(i) {
                            Some('>') => break,
                            Some(&b @ ('0' | '1' | '+' | '-')) => body.push(b),
                            Some(&other) => {
                                return Err(ScenarioError::new(
                                    ErrorKind::Lexical,
                                    line_no,
                                    i + 1,
                                    format!("invalid ket symbol `{other}` (expected 0, 1, + or -)"),
                                ))
                            }
                            None => {
                                return Err(ScenarioError::new(
                                    ErrorKind::Lexical,
                                    line_no,
                                    start + 1,
                                    "unterminated ket, expected `>`",
                                ))
                            }
                        }
                        i += 1;
                    }
                    if body.is_empty() {
                        return Err(ScenarioError::new(ErrorKind::Lexical, line_no, start + 1, "empty ket"));
                    }
                    tokens.push(Token { kind: TokenKind::Ket(body), line: line_no, col: start + 1 });
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().collect();
                    tokens.push(Token { kind: TokenKind::Int(digits), line: line_no, col: start + 1 });
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    tokens.push(Token { kind: TokenKind::Ident(word), line: line_no, col: start + 1 });
                }
                other => {
                    return Err(ScenarioError::new(
                        ErrorKind::Lexical,
                        line_no,
                        col,
                        format!("unexpected character `{other}`"),
                    ))
                }
            }
        }
        tokens.push(Token { kind: TokenKind::Newline, line: line_no, col: chars.len() + 1 });
    }
    Ok(tokens)
}
