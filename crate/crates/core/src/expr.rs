//! Text expressions over words: parsing, evaluation to [`LinComb`] and
//! rendering back to text.
//!
//! ```text
//! expr   := ['-'] prod (('+' | '-') prod)*
//! prod   := term (op term)*           op: boxast boxdot sh st (or ⊛ ⊡ ш ∗)
//! term   := rational ['*'] chain | rational | chain
//! chain  := factor (['*'] factor | '*' rational)*
//! factor := word | 'P(' expr ')' | 'D(' expr ')' | 'ds(' expr ',' expr ')'
//!         | 'gsh(' int (',' int)* ')' | '(' expr ')'
//! word   := ('e(' int [',' int] ')')+
//! ```
//!
//! Adjacent letters, with or without `*`, form a single word.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::involution::{boxdot, involution};
use crate::products::{boxast, ds, harmonic, shuffle};
use crate::qseries::{derivative, gsh_in_g, GshIndex};
use crate::rational::Rational;
use crate::word::{Letter, LinComb, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Boxast,
    Boxdot,
    Shuffle,
    Stuffle,
}

impl BinOp {
    pub fn name(self) -> &'static str {
        match self {
            BinOp::Boxast => "boxast",
            BinOp::Boxdot => "boxdot",
            BinOp::Shuffle => "sh",
            BinOp::Stuffle => "st",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "boxast" | "⊛" => Some(BinOp::Boxast),
            "boxdot" | "⊡" => Some(BinOp::Boxdot),
            "sh" | "ш" => Some(BinOp::Shuffle),
            "st" | "∗" => Some(BinOp::Stuffle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Word(Word),
    Scalar(Rational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Scale(Rational, Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    P(Box<Expr>),
    D(Box<Expr>),
    Ds(Box<Expr>, Box<Expr>),
    Gsh(Vec<u32>),
}

pub fn eval_expression(expr: &Expr) -> Result<LinComb> {
    Ok(match expr {
        Expr::Word(w) => LinComb::from(w.clone()),
        Expr::Scalar(r) => LinComb::one().scale(r),
        Expr::Neg(x) => -eval_expression(x)?,
        Expr::Add(a, b) => eval_expression(a)? + eval_expression(b)?,
        Expr::Sub(a, b) => eval_expression(a)? - eval_expression(b)?,
        Expr::Scale(r, x) => eval_expression(x)?.scale(r),
        Expr::Concat(a, b) => eval_expression(a)?.concat(&eval_expression(b)?),
        Expr::Binary(op, a, b) => {
            let (u, v) = (eval_expression(a)?, eval_expression(b)?);
            match op {
                BinOp::Boxast => boxast(&u, &v),
                BinOp::Boxdot => boxdot(&u, &v),
                BinOp::Shuffle => shuffle(&u, &v)?,
                BinOp::Stuffle => harmonic(&u, &v)?,
            }
        }
        Expr::P(x) => involution(&eval_expression(x)?),
        Expr::D(x) => derivative(&eval_expression(x)?),
        Expr::Ds(a, b) => ds(&eval_expression(a)?, &eval_expression(b)?)?,
        Expr::Gsh(ks) => gsh_in_g(&GshIndex::new(ks.clone())?)?,
    })
}

/// Parses and evaluates in one step.
pub fn evaluate(input: &str) -> Result<LinComb> {
    eval_expression(&parse(input)?)
}

fn rational_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Expr {
    fn is_atom(&self) -> bool {
        matches!(
            self,
            Expr::Word(_) | Expr::P(_) | Expr::D(_) | Expr::Ds(..) | Expr::Gsh(_)
        ) || matches!(self, Expr::Scalar(r) if !r.is_negative())
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atom() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Word(w) if w.is_empty() => write!(f, "1"),
            Expr::Word(w) => write!(f, "{w}"),
            Expr::Scalar(r) => write!(f, "{}", rational_text(r)),
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.fmt_atom(f)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                match a.as_ref() {
                    Expr::Add(..) | Expr::Sub(..) | Expr::Neg(_) => write!(f, "{a}")?,
                    _ => a.fmt_atom(f)?,
                }
                write!(
                    f,
                    " {} ",
                    if matches!(self, Expr::Add(..)) {
                        '+'
                    } else {
                        '-'
                    }
                )?;
                b.fmt_atom(f)
            }
            Expr::Scale(r, x) => {
                if r.is_negative() {
                    write!(f, "({}) * ", rational_text(r))?;
                } else {
                    write!(f, "{} * ", rational_text(r))?;
                }
                x.fmt_atom(f)
            }
            Expr::Concat(a, b) => {
                a.fmt_atom(f)?;
                write!(f, " * ")?;
                b.fmt_atom(f)
            }
            Expr::Binary(op, a, b) => {
                a.fmt_atom(f)?;
                write!(f, " {} ", op.name())?;
                b.fmt_atom(f)
            }
            Expr::P(x) => write!(f, "P({x})"),
            Expr::D(x) => write!(f, "D({x})"),
            Expr::Ds(a, b) => write!(f, "ds({a}, {b})"),
            Expr::Gsh(ks) => {
                let parts: Vec<String> = ks.iter().map(u32::to_string).collect();
                write!(f, "gsh({})", parts.join(","))
            }
        }
    }
}

/// Text form of a linear combination that [`evaluate`] reads back unchanged.
pub fn render(x: &LinComb) -> String {
    x.to_string()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    bump(&mut chars);
                }
                Tok::Int(digits.parse().expect("ascii digits"))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                if matches!(c, '⊛' | '⊡' | 'ш' | '∗') {
                    name.push(c);
                    bump(&mut chars);
                } else {
                    while let Some(&d) = chars
                        .peek()
                        .filter(|d| d.is_ascii_alphanumeric() || **d == '_')
                    {
                        name.push(d);
                        bump(&mut chars);
                    }
                }
                Tok::Ident(name)
            }
            '⊛' | '⊡' | '∗' => {
                bump(&mut chars);
                Tok::Ident(c.to_string())
            }
            _ => {
                bump(&mut chars);
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    other => {
                        return Err(parse_error(
                            l,
                            col,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                }
            }
        };
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.tokens[self.pos];
        parse_error(t.line, t.column, message)
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                Self::describe(&want),
                Self::describe(self.peek())
            )))
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let v =
                    u32::try_from(&n).map_err(|_| self.error(format!("integer {n} too large")))?;
                self.next();
                Ok(v)
            }
            other => Err(self.error(format!(
                "expected an integer, found {}",
                Self::describe(&other)
            ))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.next();
            Expr::Neg(Box::new(self.prod()?))
        } else {
            self.prod()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc = Expr::Add(Box::new(acc), Box::new(self.prod()?));
                }
                Tok::Minus => {
                    self.next();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.prod()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn binop(&self) -> Option<BinOp> {
        match self.peek() {
            Tok::Ident(name) => BinOp::from_name(name),
            _ => None,
        }
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        while let Some(op) = self.binop() {
            self.next();
            acc = Expr::Binary(op, Box::new(acc), Box::new(self.term()?));
        }
        Ok(acc)
    }

    fn rational(&mut self) -> Result<Rational> {
        let Tok::Int(n) = self.next() else {
            unreachable!("caller checked for an integer")
        };
        if *self.peek() == Tok::Slash {
            self.next();
            match self.peek().clone() {
                Tok::Int(d) if !d.is_zero() => {
                    self.next();
                    Ok(Rational::new(n, d))
                }
                Tok::Int(_) => Err(self.error("zero denominator")),
                other => Err(self.error(format!(
                    "expected a denominator, found {}",
                    Self::describe(&other)
                ))),
            }
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(name) => BinOp::from_name(name).is_none(),
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Tok::Int(_)) {
            let r = self.rational()?;
            let starred = *self.peek() == Tok::Star;
            if starred {
                self.next();
            }
            if starred || self.starts_factor() {
                let chain = self.chain()?;
                return Ok(Expr::Scale(r, Box::new(chain)));
            }
            return Ok(Expr::Scalar(r));
        }
        self.chain()
    }

    fn chain(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            let starred = *self.peek() == Tok::Star;
            if starred {
                self.next();
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let rhs = self.factor()?;
            acc = match (acc, rhs) {
                (Expr::Word(a), Expr::Word(b)) => Expr::Word(a.concat(&b)),
                (a, b) => Expr::Concat(Box::new(a), Box::new(b)),
            };
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let (line, column) = (self.tokens[self.pos].line, self.tokens[self.pos].column);
        if matches!(self.peek(), Tok::Int(_)) {
            return Ok(Expr::Scalar(self.rational()?));
        }
        match self.next() {
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if *self.peek() != Tok::LParen {
                    return Err(parse_error(
                        line,
                        column,
                        format!("expected `(` after `{name}`"),
                    ));
                }
                self.next();
                let node = match name.as_str() {
                    "e" => {
                        let k = self.small_int()?;
                        let d = if *self.peek() == Tok::Comma {
                            self.next();
                            self.small_int()?
                        } else {
                            0
                        };
                        let letter = Letter::new(k, d)
                            .map_err(|e| parse_error(line, column, e.to_string()))?;
                        Expr::Word(Word::new(vec![letter]))
                    }
                    "P" => Expr::P(Box::new(self.expr()?)),
                    "D" => Expr::D(Box::new(self.expr()?)),
                    "ds" => {
                        let a = self.expr()?;
                        self.expect(Tok::Comma)?;
                        Expr::Ds(Box::new(a), Box::new(self.expr()?))
                    }
                    "gsh" => {
                        let mut ks = vec![self.small_int()?];
                        while *self.peek() == Tok::Comma {
                            self.next();
                            ks.push(self.small_int()?);
                        }
                        if ks.contains(&0) {
                            return Err(parse_error(
                                line,
                                column,
                                "gsh indices must be at least 1",
                            ));
                        }
                        Expr::Gsh(ks)
                    }
                    other => {
                        return Err(parse_error(
                            line,
                            column,
                            format!("unknown operator `{other}`"),
                        ))
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(node)
            }
            other => Err(parse_error(
                line,
                column,
                format!(
                    "expected a word, operator or `(`, found {}",
                    Self::describe(&other)
                ),
            )),
        }
    }
}

pub fn parse(input: &str) -> Result<Expr> {
    let mut parser = Parser {
        tokens: tokenize(input)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(format!(
            "unexpected {} after expression",
            Parser::describe(parser.peek())
        )));
    }
    Ok(expr)
}
