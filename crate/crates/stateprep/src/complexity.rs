//! Asymptotic cost formulas: a tiny expression language over the qubit
//! count `n`, the statevector size `N = 2^n`, and the sparse nonzero
//! count `r`.
//!
//! Grammar (whitespace-insensitive; juxtaposition multiplies, so `nr`
//! and `n r` both mean `n * r`):
//!
//! ```text
//! formula := ("O" | "Theta") "(" sum ")"
//! sum     := prod { "+" prod }
//! prod    := pow { ("*" | juxtaposition) pow }
//! pow     := atom [ "^" number ]
//! atom    := number | "n" | "N" | "r" | "log" "(" sum ")" | "(" sum ")"
//! ```
//!
//! `log` is the binary logarithm throughout. Evaluation treats the
//! wrapper (`O`/`Theta`) as a tag only: the body is evaluated with an
//! implicit leading constant of 1, which is what makes formulas from
//! one table comparable against each other.

use std::fmt;
use thiserror::Error;

/// Which asymptotic wrapper a formula was written with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wrapper {
    BigO,
    BigTheta,
}

impl Wrapper {
    fn symbol(self) -> &'static str {
        match self {
            Wrapper::BigO => "O",
            Wrapper::BigTheta => "Theta",
        }
    }
}

/// A variable of the cost language. Surface syntax: `n`, `N`, `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    /// `n`: number of data qubits.
    QubitCount,
    /// `N`: statevector size, always evaluated as `2^n`.
    StateSize,
    /// `r`: number of nonzero amplitudes of a sparse state.
    NonzeroCount,
}

impl Var {
    pub fn symbol(self) -> &'static str {
        match self {
            Var::QubitCount => "n",
            Var::StateSize => "N",
            Var::NonzeroCount => "r",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Base raised to a real literal exponent (the grammar only admits
    /// number exponents, e.g. `N^1.52`).
    Pow(Box<Expr>, f64),
    Log(Box<Expr>),
}

/// A parsed cost formula: wrapper plus expression body.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityExpr {
    pub wrapper: Wrapper,
    pub body: Expr,
}

/// Concrete values for the formula variables. `N` is never bound
/// directly; it is derived as `2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Bindings {
    qubit_count: u32,
    nonzero_count: Option<u64>,
}

impl Bindings {
    pub fn dense(qubit_count: u32) -> Result<Self, EvalError> {
        if qubit_count == 0 {
            return Err(EvalError::InvalidBinding);
        }
        Ok(Bindings { qubit_count, nonzero_count: None })
    }

    pub fn sparse(qubit_count: u32, nonzero_count: u64) -> Result<Self, EvalError> {
        if qubit_count == 0 || nonzero_count == 0 {
            return Err(EvalError::InvalidBinding);
        }
        Ok(Bindings { qubit_count, nonzero_count: Some(nonzero_count) })
    }

    pub fn qubit_count(&self) -> u32 {
        self.qubit_count
    }

    pub fn nonzero_count(&self) -> Option<u64> {
        self.nonzero_count
    }
}

/// Which bindings a formula needs. `N` counts as needing `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FreeVars {
    pub needs_n: bool,
    pub needs_r: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at byte {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: &'static str,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("variable `{}` has no binding", .0.symbol())]
    Unbound(Var),
    #[error("log argument must be positive, got {0}")]
    LogDomain(f64),
    #[error("bindings require n >= 1 and r >= 1")]
    InvalidBinding,
}

impl ComplexityExpr {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).formula()
    }

    pub fn evaluate(&self, bindings: &Bindings) -> Result<f64, EvalError> {
        eval(&self.body, bindings)
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut vars = FreeVars::default();
        collect_vars(&self.body, &mut vars);
        vars
    }
}

impl std::str::FromStr for ComplexityExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        ComplexityExpr::parse(s)
    }
}

fn eval(expr: &Expr, bindings: &Bindings) -> Result<f64, EvalError> {
    Ok(match expr {
        Expr::Const(c) => *c,
        Expr::Var(Var::QubitCount) => f64::from(bindings.qubit_count),
        Expr::Var(Var::StateSize) => f64::from(bindings.qubit_count).exp2(),
        Expr::Var(Var::NonzeroCount) => match bindings.nonzero_count {
            Some(r) => r as f64,
            None => return Err(EvalError::Unbound(Var::NonzeroCount)),
        },
        Expr::Add(a, b) => eval(a, bindings)? + eval(b, bindings)?,
        Expr::Mul(a, b) => eval(a, bindings)? * eval(b, bindings)?,
        Expr::Pow(base, exponent) => eval(base, bindings)?.powf(*exponent),
        Expr::Log(arg) => {
            let value = eval(arg, bindings)?;
            if value <= 0.0 {
                return Err(EvalError::LogDomain(value));
            }
            value.log2()
        }
    })
}

fn collect_vars(expr: &Expr, vars: &mut FreeVars) {
    match expr {
        Expr::Const(_) => {}
        Expr::Var(Var::QubitCount) | Expr::Var(Var::StateSize) => vars.needs_n = true,
        Expr::Var(Var::NonzeroCount) => vars.needs_r = true,
        Expr::Add(a, b) | Expr::Mul(a, b) => {
            collect_vars(a, vars);
            collect_vars(b, vars);
        }
        Expr::Pow(base, _) => collect_vars(base, vars),
        Expr::Log(arg) => collect_vars(arg, vars),
    }
}

// ---------------------------------------------------------------------------
// Printing. The printer and parser round-trip: parsing the output of
// `to_string` reproduces the tree exactly.

/// Binding strength used to decide parenthesization.
fn level(expr: &Expr) -> u8 {
    match expr {
        Expr::Add(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Pow(..) => 3,
        Expr::Const(_) | Expr::Var(_) | Expr::Log(_) => 4,
    }
}

fn fmt_expr(expr: &Expr, min_level: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parens = level(expr) < min_level;
    if parens {
        out.write_str("(")?;
    }
    match expr {
        Expr::Const(c) => write!(out, "{c}")?,
        Expr::Var(v) => out.write_str(v.symbol())?,
        Expr::Add(a, b) => {
            fmt_expr(a, 1, out)?;
            out.write_str(" + ")?;
            fmt_expr(b, 2, out)?;
        }
        Expr::Mul(a, b) => {
            fmt_expr(a, 2, out)?;
            out.write_str(" ")?;
            fmt_expr(b, 3, out)?;
        }
        Expr::Pow(base, exponent) => {
            fmt_expr(base, 4, out)?;
            write!(out, "^{exponent}")?;
        }
        Expr::Log(arg) => {
            out.write_str("log(")?;
            fmt_expr(arg, 1, out)?;
            out.write_str(")")?;
        }
    }
    if parens {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for ComplexityExpr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}(", self.wrapper.symbol())?;
        fmt_expr(&self.body, 1, out)?;
        out.write_str(")")
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing.

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Variable(Var),
    Log,
    WrapO,
    WrapTheta,
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, Copy)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    /// Set when the lexer hit an unknown character; surfaced the first
    /// time the parser reaches that position.
    lex_error: Option<ParseError>,
    pos: usize,
}

const EXPECTED_ATOM: &str = "a number, `n`, `N`, `r`, `log`, or `(`";

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut lex_error = None;
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            let start = i;
            let tok = match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    i += 1;
                    continue;
                }
                b'+' => Some(Tok::Plus),
                b'*' => Some(Tok::Star),
                b'^' => Some(Tok::Caret),
                b'(' => Some(Tok::LParen),
                b')' => Some(Tok::RParen),
                b'0'..=b'9' => {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                        i += 1;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                    let value: f64 = src[start..i]
                        .parse()
                        .expect("lexed digits always parse as f64");
                    tokens.push(Token { tok: Tok::Num(value), start, end: i });
                    continue;
                }
                b'n' => Some(Tok::Variable(Var::QubitCount)),
                b'N' => Some(Tok::Variable(Var::StateSize)),
                b'r' => Some(Tok::Variable(Var::NonzeroCount)),
                b'O' => Some(Tok::WrapO),
                _ if src[i..].starts_with("log") => {
                    tokens.push(Token { tok: Tok::Log, start, end: i + 3 });
                    i += 3;
                    continue;
                }
                _ if src[i..].starts_with("Theta") => {
                    tokens.push(Token { tok: Tok::WrapTheta, start, end: i + 5 });
                    i += 5;
                    continue;
                }
                _ => {
                    lex_error = Some(ParseError {
                        offset: i,
                        expected: "a formula token",
                        found: format!("`{}`", &src[i..][..char_len(&src[i..])]),
                    });
                    break;
                }
            };
            if let Some(tok) = tok {
                tokens.push(Token { tok, start, end: i + 1 });
                i += 1;
            }
        }
        Parser { src, tokens, lex_error, pos: 0 }
    }

    fn peek(&self) -> Option<Tok> {
        self.tokens.get(self.pos).map(|t| t.tok)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).copied();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Error at the current position, describing what was found there.
    fn err(&self, expected: &'static str) -> ParseError {
        match self.tokens.get(self.pos) {
            Some(t) => ParseError {
                offset: t.start,
                expected,
                found: format!("`{}`", &self.src[t.start..t.end]),
            },
            // Past the last token: either a lexer error or end of input.
            None => match &self.lex_error {
                Some(e) => ParseError { expected, ..e.clone() },
                None => ParseError {
                    offset: self.src.len(),
                    expected,
                    found: "end of input".to_string(),
                },
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn formula(&mut self) -> Result<ComplexityExpr, ParseError> {
        let wrapper = match self.peek() {
            Some(Tok::WrapO) => Wrapper::BigO,
            Some(Tok::WrapTheta) => Wrapper::BigTheta,
            _ => return Err(self.err("`O` or `Theta`")),
        };
        self.bump();
        self.expect(Tok::LParen, "`(`")?;
        let body = self.sum()?;
        self.expect(Tok::RParen, "`)`")?;
        if self.pos != self.tokens.len() || self.lex_error.is_some() {
            return Err(self.err("end of input"));
        }
        Ok(ComplexityExpr { wrapper, body })
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.prod()?;
        while self.peek() == Some(Tok::Plus) {
            self.bump();
            let rhs = self.prod()?;
            acc = Expr::Add(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.pow()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                }
                // Juxtaposition: the next token opens an atom.
                Some(Tok::Num(_) | Tok::Variable(_) | Tok::Log | Tok::LParen) => {}
                _ => break,
            }
            let rhs = self.pow()?;
            acc = Expr::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn pow(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.bump();
            match self.peek() {
                Some(Tok::Num(value)) => {
                    self.bump();
                    return Ok(Expr::Pow(Box::new(base), value));
                }
                _ => return Err(self.err("a number")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Num(value)) => {
                self.bump();
                Ok(Expr::Const(value))
            }
            Some(Tok::Variable(v)) => {
                self.bump();
                Ok(Expr::Var(v))
            }
            Some(Tok::Log) => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let arg = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Log(Box::new(arg)))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.err(EXPECTED_ATOM)),
        }
    }
}

fn char_len(s: &str) -> usize {
    s.chars().next().map_or(0, char::len_utf8)
}
