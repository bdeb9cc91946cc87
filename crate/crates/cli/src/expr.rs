//! Entry expressions: rational literals, parameter names, `+`, `-`, `*`
//! and parentheses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use dstab_core::linalg::parse_rational;
use dstab_core::Rational;
use num_traits::{One, Signed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("cannot parse `{text}`: {reason}")]
    Syntax { text: String, reason: String },
    #[error("unbound parameter `{0}`")]
    Unbound(String),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        let normalized = text.replace('\u{2212}', "-");
        let tokens = lex(&normalized).map_err(|reason| ExprError::Syntax {
            text: text.into(),
            reason,
        })?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr();
        match e {
            Ok(e) if p.pos == p.tokens.len() => Ok(e),
            Ok(_) => Err(ExprError::Syntax {
                text: text.into(),
                reason: format!("unexpected {}", p.tokens[p.pos]),
            }),
            Err(reason) => Err(ExprError::Syntax {
                text: text.into(),
                reason,
            }),
        }
    }

    pub fn constant(&self) -> Option<&Rational> {
        match self {
            Expr::Const(r) => Some(r),
            _ => None,
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) => a.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn eval(&self, env: &BTreeMap<String, Rational>) -> Result<Rational, ExprError> {
        Ok(match self {
            Expr::Const(r) => r.clone(),
            Expr::Var(v) => env.get(v).cloned().ok_or_else(|| ExprError::Unbound(v.clone()))?,
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(r) if r.is_negative() => 3,
            _ => 4,
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(r) => write_rational(f, r),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, a.precedence() < 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                wrap(f, a, false)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                wrap(f, b, b.precedence() <= 1)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, a.precedence() < 2)?;
                f.write_str("*")?;
                wrap(f, b, b.precedence() <= 2)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(s) | Token::Ident(s) => write!(f, "`{s}`"),
            Token::Op(c) => write!(f, "`{c}`"),
        }
    }
}

fn take_number(chars: &[char], mut i: usize) -> usize {
    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
        i += 1;
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            i = j;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
        }
    }
    i
}

fn lex(text: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let mut end = take_number(&chars, i);
            // a `/` between two literals is part of a rational literal
            if end < chars.len() && chars[end] == '/' {
                let denom_start = end + 1;
                let denom_end = take_number(&chars, denom_start);
                if denom_end == denom_start {
                    return Err("`/` must be followed by a number".into());
                }
                end = denom_end;
            }
            out.push(Token::Num(chars[i..end].iter().collect()));
            i = end;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    if out.is_empty() {
        return Err("empty expression".into());
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        while self.peek_op() == Some('*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, String> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(match self.unary()? {
                    Expr::Const(r) => Expr::Const(-r),
                    e => Expr::Neg(Box::new(e)),
                })
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, String> {
        let tok = self.tokens.get(self.pos).cloned().ok_or("unexpected end of input")?;
        self.pos += 1;
        match tok {
            Token::Num(s) => parse_rational(&s).map(Expr::Const).map_err(|e| e.to_string()),
            Token::Ident(s) => Ok(Expr::Var(s)),
            Token::Op('(') => {
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(e)
            }
            t => Err(format!("unexpected {t}")),
        }
    }
}
