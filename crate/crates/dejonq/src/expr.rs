//! Expression parsing, canonical rendering, and JSON document schemas.
//!
//! The text grammar covers exactly what [`RatFunc`] can represent:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' exponent)?
//! base   := integer | variable | '(' expr ')'
//! ```
//!
//! Variables are `x1, x2, ...` (coordinates, 1-based), `u` (flow parameter)
//! and `a1`, `a2` (formal coefficients). Integers are unsigned digit runs;
//! rational constants are spelled as quotients (`1/2`). Exponents may be
//! negative (`x1^-2`, parentheses optional).
//!
//! Hard limits keep adversarial inputs cheap: exponent magnitude and
//! per-variable degree at most [`MAX_EXPONENT`], nesting depth at most
//! [`MAX_DEPTH`], integer literals at most [`MAX_DIGITS`] digits, and every
//! intermediate result at most [`MAX_TERMS`] terms with coefficients of at
//! most [`MAX_COEFF_BITS`] bits (expanding products and powers can
//! otherwise blow up exponentially from tiny inputs). The budgets are also
//! chosen so that everything within them renders back into text the parser
//! accepts. Parsing builds the rational function directly, so a division
//! whose right side is identically zero is reported as an error with the
//! operator's position.
//!
//! [`render`] is the inverse direction: its output always reparses to an
//! equal function.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Integer, Rational};
use crate::poly::{Polynomial, Var};
use crate::ratfunc::RatFunc;

/// Largest exponent magnitude the parser accepts.
pub const MAX_EXPONENT: i64 = 512;

/// Deepest nesting (parentheses and unary minus) the parser accepts.
pub const MAX_DEPTH: usize = 128;

/// Longest integer literal (in digits) the tokenizer accepts.
pub const MAX_DIGITS: usize = 64;

/// Most terms (numerator plus denominator) any intermediate result of the
/// parser may have. Each arithmetic step is checked against this budget, so
/// compact inputs such as repeated products of sums cannot expand into
/// astronomically large polynomials.
pub const MAX_TERMS: usize = 512;

/// Largest coefficient (numerator or denominator, in bits) any intermediate
/// result of the parser may have. A 212-bit integer always fits in
/// [`MAX_DIGITS`] decimal digits, so every coefficient within this budget
/// can be rendered and parsed back.
pub const MAX_COEFF_BITS: u64 = 212;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected {0}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable {0:?} (expected x<index>, u, a1 or a2)")]
    UnknownVariable(String),
    #[error("coordinate index must be a positive integer")]
    InvalidVariableIndex,
    #[error("exponent magnitude exceeds {MAX_EXPONENT}")]
    ExponentOutOfRange,
    #[error("expression nesting exceeds depth {MAX_DEPTH}")]
    TooDeep,
    #[error("integer literal exceeds {MAX_DIGITS} digits")]
    NumberTooLong,
    #[error(
        "intermediate result exceeds {MAX_TERMS} terms, degree {MAX_EXPONENT} in a variable, \
         or {MAX_COEFF_BITS}-bit coefficients"
    )]
    TooLarge,
    #[error("division by zero")]
    DivisionByZero,
}

/// A parse failure with its 1-based source position.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Int(Integer),
    Variable(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::Variable(v) => write!(f, "variable {v}"),
            TokenKind::Plus => write!(f, "'+'"),
            TokenKind::Minus => write!(f, "'-'"),
            TokenKind::Star => write!(f, "'*'"),
            TokenKind::Slash => write!(f, "'/'"),
            TokenKind::Caret => write!(f, "'^'"),
            TokenKind::LParen => write!(f, "'('"),
            TokenKind::RParen => write!(f, "')'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

/// Largest exponent of any single variable in any term.
fn max_var_degree(p: &Polynomial) -> u64 {
    p.vars()
        .into_iter()
        .filter_map(|v| p.degree_in(v))
        .max()
        .map_or(0, u64::from)
}

/// Largest numerator or denominator (in bits) among the coefficients.
fn max_coeff_bits(p: &Polynomial) -> u64 {
    p.terms()
        .map(|(_, c)| c.numer().bits().max(c.denom().bits()))
        .max()
        .unwrap_or(0)
}

/// Upper bound for the term count of a polynomial with `terms` terms raised
/// to the `e`-th power: the number of degree-`e` multisets of its terms,
/// `C(e + terms - 1, terms - 1)`. Saturates at `usize::MAX` once the bound
/// passes [`MAX_TERMS`], which is all the callers need to know.
fn power_term_bound(terms: usize, e: u64) -> usize {
    if e == 0 {
        return 1;
    }
    if terms <= 1 {
        return terms;
    }
    let mut bound: u128 = 1;
    for k in 1..terms as u128 {
        bound = bound * (u128::from(e) + k) / k;
        if bound > MAX_TERMS as u128 {
            return usize::MAX;
        }
    }
    bound as usize
}

fn tokenize(input: &str) -> Result<(Vec<Token>, (usize, usize)), ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                advance(&mut chars);
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                advance(&mut chars);
                let kind = match c {
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '/' => TokenKind::Slash,
                    '^' => TokenKind::Caret,
                    '(' => TokenKind::LParen,
                    _ => TokenKind::RParen,
                };
                tokens.push(Token {
                    kind,
                    line: tline,
                    col: tcol,
                });
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    advance(&mut chars);
                }
                if digits.len() > MAX_DIGITS {
                    return Err(err(tline, tcol, ParseErrorKind::NumberTooLong));
                }
                let value: Integer = digits.parse().expect("digit run parses");
                tokens.push(Token {
                    kind: TokenKind::Int(value),
                    line: tline,
                    col: tcol,
                });
            }
            'a'..='z' | 'A'..='Z' => {
                let mut word = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_alphanumeric()) {
                    word.push(*d);
                    advance(&mut chars);
                }
                let var = match word.as_str() {
                    "u" => Var::U,
                    "a1" => Var::A1,
                    "a2" => Var::A2,
                    w if w.starts_with('x')
                        && w.len() > 1
                        && w[1..].bytes().all(|b| b.is_ascii_digit()) =>
                    {
                        let index: u32 = w[1..]
                            .parse()
                            .map_err(|_| err(tline, tcol, ParseErrorKind::InvalidVariableIndex))?;
                        if index == 0 {
                            return Err(err(tline, tcol, ParseErrorKind::InvalidVariableIndex));
                        }
                        Var::X(index)
                    }
                    _ => return Err(err(tline, tcol, ParseErrorKind::UnknownVariable(word))),
                };
                tokens.push(Token {
                    kind: TokenKind::Variable(var),
                    line: tline,
                    col: tcol,
                });
            }
            other => return Err(err(tline, tcol, ParseErrorKind::UnexpectedChar(other))),
        }
    }
    Ok((tokens, (line, col)))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn fail(&self, kind: ParseErrorKind) -> ParseError {
        let (line, col) = self.here();
        err(line, col, kind)
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => err(
                t.line,
                t.col,
                ParseErrorKind::UnexpectedToken(t.kind.to_string()),
            ),
            None => self.fail(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.fail(ParseErrorKind::TooDeep));
        }
        Ok(())
    }

    /// Rejects an intermediate result that has outgrown the parser's size
    /// budget. Checking after every operation keeps each individual step
    /// cheap: both operands are already within budget, so no single
    /// addition, multiplication or division can do more than quadratic work
    /// in [`MAX_TERMS`].
    fn budget(&self, f: RatFunc, line: usize, col: usize) -> Result<RatFunc, ParseError> {
        let oversized = f.num().term_count() + f.den().term_count() > MAX_TERMS
            || max_var_degree(f.num()).max(max_var_degree(f.den())) > MAX_EXPONENT as u64
            || max_coeff_bits(f.num()).max(max_coeff_bits(f.den())) > MAX_COEFF_BITS;
        if oversized {
            return Err(err(line, col, ParseErrorKind::TooLarge));
        }
        Ok(f)
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            let (line, col) = (tok.line, tok.col);
            match tok.kind {
                TokenKind::Plus => {
                    self.advance();
                    let sum = acc.add(&self.term()?);
                    acc = self.budget(sum, line, col)?;
                }
                TokenKind::Minus => {
                    self.advance();
                    let diff = acc.sub(&self.term()?);
                    acc = self.budget(diff, line, col)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.factor()?;
        while let Some(tok) = self.peek() {
            let (line, col) = (tok.line, tok.col);
            match tok.kind {
                TokenKind::Star => {
                    self.advance();
                    let product = acc.mul(&self.factor()?);
                    acc = self.budget(product, line, col)?;
                }
                TokenKind::Slash => {
                    self.advance();
                    let rhs = self.factor()?;
                    let quotient = acc
                        .div(&rhs)
                        .map_err(|_| err(line, col, ParseErrorKind::DivisionByZero))?;
                    acc = self.budget(quotient, line, col)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc, ParseError> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.advance();
            self.descend()?;
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(inner.neg());
        }
        let base = self.base()?;
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            let (line, col) = self.here();
            self.advance();
            let e = self.exponent()?;
            let magnitude = e.unsigned_abs();
            // Powers are the one operation whose intermediates can dwarf
            // both operands, so they are bounded up front: first the
            // resulting per-variable degree, then the worst-case term
            // count.
            let degree = max_var_degree(base.num()).max(max_var_degree(base.den()));
            if degree * magnitude > MAX_EXPONENT as u64 {
                return Err(err(line, col, ParseErrorKind::TooLarge));
            }
            let terms = power_term_bound(base.num().term_count(), magnitude)
                .saturating_add(power_term_bound(base.den().term_count(), magnitude));
            if terms > MAX_TERMS {
                return Err(err(line, col, ParseErrorKind::TooLarge));
            }
            let power = base
                .pow(e)
                .map_err(|_| err(line, col, ParseErrorKind::DivisionByZero))?;
            return self.budget(power, line, col);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Int(n)) => {
                self.advance();
                Ok(RatFunc::constant(Rational::from_integer(n)))
            }
            Some(TokenKind::Variable(v)) => {
                self.advance();
                Ok(RatFunc::var(v))
            }
            Some(TokenKind::LParen) => {
                self.advance();
                self.descend()?;
                let inner = self.expr()?;
                self.depth -= 1;
                match self.advance().map(|t| t.kind) {
                    Some(TokenKind::RParen) => Ok(inner),
                    Some(_) => {
                        self.pos -= 1;
                        Err(self.unexpected())
                    }
                    None => Err(self.fail(ParseErrorKind::UnexpectedEnd)),
                }
            }
            _ => Err(self.unexpected()),
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::LParen)) {
            self.advance();
            let e = self.signed_exponent()?;
            match self.advance().map(|t| t.kind) {
                Some(TokenKind::RParen) => Ok(e),
                Some(_) => {
                    self.pos -= 1;
                    Err(self.unexpected())
                }
                None => Err(self.fail(ParseErrorKind::UnexpectedEnd)),
            }
        } else {
            self.signed_exponent()
        }
    }

    fn signed_exponent(&mut self) -> Result<i64, ParseError> {
        let negative = if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.advance();
            true
        } else {
            false
        };
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Int(n)) => {
                let (line, col) = self.here();
                self.advance();
                let magnitude: i64 = n
                    .try_into()
                    .map_err(|_| err(line, col, ParseErrorKind::ExponentOutOfRange))?;
                if magnitude > MAX_EXPONENT {
                    return Err(err(line, col, ParseErrorKind::ExponentOutOfRange));
                }
                Ok(if negative { -magnitude } else { magnitude })
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses an expression into a canonical rational function.
pub fn parse_ratfunc(input: &str) -> Result<RatFunc, ParseError> {
    let (tokens, end) = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        depth: 0,
        end,
    };
    let result = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected());
    }
    Ok(result)
}

/// Renders a rational function in canonical text form. The output reparses
/// to an equal function: `parse_ratfunc(&render(f)) == Ok(f)`.
pub fn render(f: &RatFunc) -> String {
    f.to_string()
}

/// Which composition law a map document describes.
///
/// `J` restricts every multiplier to a nonzero scalar; `Jhat` allows any
/// nonzero rational function of the later coordinates; `flow` is a
/// one-parameter family `x_i + F_i(u, later coordinates)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapVariant {
    J,
    Jhat,
    #[serde(rename = "flow")]
    Flow,
}

/// One coordinate rule: `x_i` is sent to `mu * x_i + f`. A missing `mu`
/// means `1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    pub f: String,
}

/// JSON schema for a triangular map or flow in `n` coordinates; `maps[i]`
/// is the rule for `x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub variant: MapVariant,
    pub n: usize,
    pub maps: Vec<MapEntry>,
}

impl MapDocument {
    pub fn from_json(input: &str) -> Result<MapDocument, serde_json::Error> {
        serde_json::from_str(input)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// JSON schema for a nilpotent Lie algebra given by structure constants:
/// `brackets` lists `[i, j, k, c]` for `[e_i, e_j] = sum_k c * e_k` with
/// 1-based indices; omitted brackets are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub brackets: Vec<(usize, usize, usize, String)>,
}

impl AlgebraDocument {
    pub fn from_json(input: &str) -> Result<AlgebraDocument, serde_json::Error> {
        serde_json::from_str(input)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}
