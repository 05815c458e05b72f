//! Polynomial expressions in `x_1, ..., x_n`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?          right associative
//! atom    := integer | x<i> | '(' sum ')' | name '(' raw ')'
//! ```
//!
//! The builtins take raw arguments: `qtilde(2,1)`, `schubA(2 1 3)`, `e(2)`,
//! `e2(1)`, `cw(-2 1)` or `cw(s1 s0)`, and `cpair(1,1; 2 1)`. The last two
//! are what the expansion printer emits, so printed output parses back.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use sp_schubert::polyring::MultiPoly;
use sp_schubert::qbasis::{qtilde, schubert_a};
use sp_schubert::symplectic::{c_pair, schubert_c};
use sp_schubert::weyl::{Partition, SignedPermutation, Word};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub message: String,
    /// Byte offset into the input.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    QTilde(Partition),
    SchubA(SignedPermutation),
    Elementary(usize),
    ElementarySquares(usize),
    Cw(SignedPermutation),
    CPair(Partition, SignedPermutation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Builtin),
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::QTilde(l) => write!(f, "qtilde({l})"),
            Self::SchubA(p) => write!(f, "schubA({p})"),
            Self::Elementary(k) => write!(f, "e({k})"),
            Self::ElementarySquares(k) => write!(f, "e2({k})"),
            Self::Cw(w) => write!(f, "cw({w})"),
            Self::CPair(l, p) => write!(f, "cpair({l}; {p})"),
        }
    }
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Self::Add(..) | Self::Sub(..) => 1,
            Self::Mul(..) => 2,
            Self::Neg(..) => 3,
            Self::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Self::Int(c) => write!(f, "{c}")?,
            Self::Var(i) => write!(f, "x{i}")?,
            Self::Call(b) => write!(f, "{b}")?,
            Self::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 3)?;
            }
            Self::Add(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" + ")?;
                b.write_at(f, 2)?;
            }
            Self::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" - ")?;
                b.write_at(f, 2)?;
            }
            Self::Mul(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("*")?;
                b.write_at(f, 3)?;
            }
            Self::Pow(a, b) => {
                a.write_at(f, 5)?;
                f.write_str("^")?;
                b.write_at(f, 3)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable x{var} is outside x1..x{rank}")]
    VariableOutOfRange { var: usize, rank: usize },
    #[error("exponent must be a non-negative integer constant, got {0}")]
    BadExponent(String),
    #[error("{what} has rank {got}, larger than {rank}")]
    RankTooLarge { what: String, got: usize, rank: usize },
    #[error("{0}")]
    Invalid(String),
}

impl Expr {
    pub fn eval(&self, n: usize) -> Result<MultiPoly, EvalError> {
        Ok(match self {
            Self::Int(c) => MultiPoly::constant(n, c.clone()),
            Self::Var(i) => {
                if *i == 0 || *i > n {
                    return Err(EvalError::VariableOutOfRange { var: *i, rank: n });
                }
                MultiPoly::var(n, *i)
            }
            Self::Neg(a) => -a.eval(n)?,
            Self::Add(a, b) => &a.eval(n)? + &b.eval(n)?,
            Self::Sub(a, b) => &a.eval(n)? - &b.eval(n)?,
            Self::Mul(a, b) => &a.eval(n)? * &b.eval(n)?,
            Self::Pow(a, b) => {
                let e = b.eval(n)?;
                let k = if e.is_zero() { Some(0) } else if e.degree() == Some(0) { e.constant_term().to_u32() } else { None };
                match k {
                    Some(k) => a.eval(n)?.pow(k),
                    None => return Err(EvalError::BadExponent(e.to_string())),
                }
            }
            Self::Call(b) => eval_builtin(b, n)?,
        })
    }
}

/// Brings an element of `W_m`, `m ≤ n`, into `W_n`.
fn lift(w: &SignedPermutation, n: usize, what: &str) -> Result<SignedPermutation, EvalError> {
    if w.rank() > n {
        return Err(EvalError::RankTooLarge { what: what.to_string(), got: w.rank(), rank: n });
    }
    Ok(w.embed(n))
}

fn eval_builtin(b: &Builtin, n: usize) -> Result<MultiPoly, EvalError> {
    Ok(match b {
        Builtin::QTilde(l) => qtilde(l, n),
        Builtin::SchubA(p) => schubert_a(&lift(p, n, &format!("schubA({p})"))?, n),
        Builtin::Elementary(k) => MultiPoly::elementary(*k, n),
        Builtin::ElementarySquares(k) => MultiPoly::elementary_squares(*k, n),
        Builtin::Cw(w) => schubert_c(&lift(w, n, &format!("cw({w})"))?),
        Builtin::CPair(l, p) => {
            let p = lift(p, n, &format!("cpair({l}; {p})"))?;
            c_pair(l, &p, n).map_err(|e| EvalError::Invalid(e.to_string()))?
        }
    })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, position: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { message: message.into(), position })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => self.err(start, "unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return self.err(self.pos, "expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                Ok(Expr::Int(digits.parse().expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric());
                if let Some(idx) = name.strip_prefix('x').filter(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())) {
                    return match idx.parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(Expr::Var(i)),
                        _ => self.err(start, format!("bad variable {name:?}")),
                    };
                }
                self.call(name, start)
            }
            Some(c) => self.err(start, format!("unexpected character {c:?}")),
        }
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Expr, ParseError> {
        if !matches!(name, "qtilde" | "schubA" | "e" | "e2" | "cw" | "cpair") {
            return self.err(start, format!("unknown name {name:?}"));
        }
        if !self.eat('(') {
            return self.err(self.pos, format!("expected '(' after {name}"));
        }
        let arg_start = self.pos;
        let raw = self.take_while(|c| c != ')');
        if !self.eat(')') {
            return self.err(self.pos, "unterminated argument list");
        }
        let bad = |m: String| ParseError { message: m, position: arg_start };
        let perm = |s: &str| s.parse::<SignedPermutation>().map_err(|e| bad(e.to_string()));
        let part = |s: &str| s.parse::<Partition>().map_err(|e| bad(e.to_string()));
        let index = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("expected an index, got {:?}", s.trim())));
        let b = match name {
            "qtilde" => Builtin::QTilde(part(raw)?),
            "schubA" => {
                let p = perm(raw)?;
                if !p.is_unsigned() {
                    return Err(bad(format!("schubA needs an unsigned permutation, got {p}")));
                }
                Builtin::SchubA(p)
            }
            "e" => Builtin::Elementary(index(raw)?),
            "e2" => Builtin::ElementarySquares(index(raw)?),
            "cw" => Builtin::Cw(parse_element(raw, None).map_err(bad)?),
            _ => {
                let Some((l, p)) = raw.split_once(';') else {
                    return Err(bad("cpair expects 'partition; permutation'".into()));
                };
                let p = perm(p)?;
                if !p.is_unsigned() {
                    return Err(bad(format!("cpair needs an unsigned permutation, got {p}")));
                }
                Builtin::CPair(part(l)?, p)
            }
        };
        Ok(Expr::Call(b))
    }
}

/// Reads a signed permutation `"-2 1 3"` or a word `"s1 s0"` / `"e"`.
///
/// A word has no intrinsic rank; it is read in `W_rank` when a rank is given
/// and otherwise in the smallest group containing its letters.
pub fn parse_element(s: &str, rank: Option<usize>) -> Result<SignedPermutation, String> {
    let t = s.trim();
    if t == "e" || t.starts_with('s') {
        let word: Word = t.parse().map_err(|e: sp_schubert::weyl::WeylError| e.to_string())?;
        // letters run over s_0, ..., s_{n-1}
        let n = rank.unwrap_or_else(|| word.letters().iter().max().map_or(1, |&a| a + 1));
        SignedPermutation::from_word(n, &word).map_err(|e| e.to_string())
    } else {
        t.parse::<SignedPermutation>().map_err(|e| e.to_string())
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.sum()?;
    if let Some(c) = p.peek() {
        return p.err(p.pos, format!("unexpected {c:?}"));
    }
    Ok(e)
}

/// Parses and evaluates in `Z[x_1, ..., x_n]`.
pub fn parse_poly(src: &str, n: usize) -> Result<MultiPoly, ExprError> {
    Ok(parse(src)?.eval(n)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
