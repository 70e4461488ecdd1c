//! Polynomial expressions over the rationals.
//!
//! Grammar: rational or decimal literals, variables `x1 .. xN` with aliases
//! `x, y, z, w` for the first four, `+ - * ^`, division by constant
//! subexpressions, parentheses, and implicit multiplication (`2x^2`).
//! Exponents are non-negative integer literals.

use std::fmt;
use std::str::FromStr;

use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Const(Rational),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn eval(&self, point: &[Rational]) -> Rational {
        match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(i) => point[*i].clone(),
            Expr::Neg(a) => -a.eval(point),
            Expr::Add(a, b) => a.eval(point) + b.eval(point),
            Expr::Sub(a, b) => a.eval(point) - b.eval(point),
            Expr::Mul(a, b) => a.eval(point) * b.eval(point),
            Expr::Pow(a, n) => Pow::pow(a.eval(point), *n),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    source: String,
    expr: Expr,
}

impl Polynomial {
    pub fn parse(source: &str) -> Result<Self> {
        let tokens = lex(source)?;
        let mut p = Parser { tokens, pos: 0, source };
        let expr = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Polynomial { source: source.trim().to_string(), expr })
    }

    /// Number of variables the expression refers to (highest index + 1).
    pub fn arity(&self) -> usize {
        self.expr.max_var().map_or(0, |i| i + 1)
    }

    /// Exact value; `point` must have at least `arity()` coordinates.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert!(point.len() >= self.arity(), "point has too few coordinates");
        self.expr.eval(point)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn lex(s: &str) -> Result<Vec<Token>> {
    let bad = |msg: String| Error::UnparsablePolynomial(format!("{s}: {msg}"));
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let punct = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            _ => None,
        };
        if let Some(t) = punct {
            out.push(t);
            i += 1;
            continue;
        }
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let q = rational::parse(&text).map_err(|_| bad(format!("bad number '{text}'")))?;
                out.push(Token::Num(q));
            }
            'x' | 'y' | 'z' | 'w' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let index = match (c, digits.as_str()) {
                    ('x', "") => 0,
                    ('y', "") => 1,
                    ('z', "") => 2,
                    ('w', "") => 3,
                    ('x', d) => match d.parse::<usize>() {
                        Ok(n) if n >= 1 => n - 1,
                        _ => return Err(bad(format!("bad variable 'x{d}'"))),
                    },
                    (v, d) => return Err(bad(format!("bad variable '{v}{d}'"))),
                };
                out.push(Token::Var(index));
            }
            other => return Err(bad(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::UnparsablePolynomial(format!("{}: {msg} at token {}", self.source, self.pos))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Token::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Token::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Token::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Token::Slash) {
                let divisor = self.unary()?;
                if divisor.max_var().is_some() {
                    return Err(self.error("division by a non-constant expression"));
                }
                let d = divisor.eval(&[]);
                if d.is_zero() {
                    return Err(self.error("division by zero"));
                }
                lhs = Expr::Mul(Box::new(lhs), Box::new(Expr::Const(d.recip())));
            } else if matches!(self.peek(), Some(Token::Num(_) | Token::Var(_) | Token::Open)) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Token::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(&Token::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.eat(&Token::Caret) {
            return Ok(base);
        }
        match self.tokens.get(self.pos) {
            Some(Token::Num(n)) if n.is_integer() && *n >= Rational::zero() => {
                let e = u32::try_from(n.to_integer()).map_err(|_| self.error("exponent too large"))?;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(self.error("exponent must be a non-negative integer")),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(q)) => {
                self.pos += 1;
                Ok(Expr::Const(q))
            }
            Some(Token::Var(i)) => {
                self.pos += 1;
                Ok(Expr::Var(i))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Token::Close) {
                    return Err(self.error("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}
