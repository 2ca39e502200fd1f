//! Guard and condition expressions used by the table data.
//!
//! Integers, variables, `+ - * %`, comparisons, `&& || !` and parentheses.
//! Variables `c1, c2, …` denote characters; arithmetic on them yields integer
//! vectors, which is how linear forms such as `2*c1 + (n-1)*c2` are written.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("expression `{src}`: {msg}")]
    Parse { src: String, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("type error in `{0}`")]
    Type(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Rem,
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Vec(Vec<i64>),
}

/// Variable environment: integers for parameters, vectors for characters.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub ints: BTreeMap<String, i64>,
    pub chars: Vec<Vec<i64>>,
}

impl Env {
    fn lookup(&self, name: &str) -> Result<Value, ExprError> {
        if let Some(&v) = self.ints.get(name) {
            return Ok(Value::Int(v));
        }
        if let Some(idx) = name.strip_prefix('c').and_then(|x| x.parse::<usize>().ok()) {
            if idx >= 1 && idx <= self.chars.len() {
                return Ok(Value::Vec(self.chars[idx - 1].clone()));
            }
        }
        Err(ExprError::Unbound(name.to_string()))
    }
}

struct P<'a> {
    src: &'a str,
    toks: Vec<String>,
    i: usize,
}

fn tokenize(src: &str) -> Result<Vec<String>, ExprError> {
    let mut out = Vec::new();
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(cs[start..i].iter().collect());
        } else {
            let two: String = cs[i..(i + 2).min(cs.len())].iter().collect();
            if ["==", "!=", "<=", ">=", "&&", "||"].contains(&two.as_str()) {
                out.push(two);
                i += 2;
            } else if "+-*%()<>!".contains(c) {
                out.push(c.to_string());
                i += 1;
            } else {
                return Err(ExprError::Parse { src: src.into(), msg: format!("bad character `{c}`") });
            }
        }
    }
    Ok(out)
}

impl<'a> P<'a> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError::Parse { src: self.src.to_string(), msg: msg.to_string() }
    }
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.i).map(|s| s.as_str())
    }
    fn bump(&mut self) -> Option<String> {
        let t = self.toks.get(self.i).cloned();
        self.i += 1;
        t
    }
    fn binary(
        &mut self,
        ops: &[(&str, Op)],
        next: fn(&mut Self) -> Result<Expr, ExprError>,
    ) -> Result<Expr, ExprError> {
        let mut lhs = next(self)?;
        loop {
            let Some(op) = self.peek().and_then(|t| ops.iter().find(|(s, _)| *s == t)).map(|x| x.1)
            else {
                return Ok(lhs);
            };
            self.i += 1;
            let rhs = next(self)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }
    fn or(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[("||", Op::Or)], Self::and)
    }
    fn and(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[("&&", Op::And)], Self::cmp)
    }
    fn cmp(&mut self) -> Result<Expr, ExprError> {
        self.binary(
            &[("==", Op::Eq), ("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("<", Op::Lt), (">", Op::Gt)],
            Self::add,
        )
    }
    fn add(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[("+", Op::Add), ("-", Op::Sub)], Self::mul)
    }
    fn mul(&mut self) -> Result<Expr, ExprError> {
        self.binary(&[("*", Op::Mul), ("%", Op::Rem)], Self::unary)
    }
    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some("-") => {
                self.i += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some("!") => {
                self.i += 1;
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            _ => self.atom(),
        }
    }
    fn atom(&mut self) -> Result<Expr, ExprError> {
        let Some(t) = self.bump() else {
            return Err(self.err("unexpected end"));
        };
        if t == "(" {
            let e = self.or()?;
            if self.bump().as_deref() != Some(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(e);
        }
        if let Ok(v) = t.parse::<i64>() {
            return Ok(Expr::Int(v));
        }
        if t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            if t == "true" {
                return Ok(Expr::Bin(Op::Eq, Box::new(Expr::Int(0)), Box::new(Expr::Int(0))));
            }
            return Ok(Expr::Var(t));
        }
        Err(self.err(&format!("unexpected `{t}`")))
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let toks = tokenize(src)?;
        let mut p = P { src, toks, i: 0 };
        let e = p.or()?;
        if p.i != p.toks.len() {
            return Err(p.err("trailing tokens"));
        }
        Ok(e)
    }

    pub fn eval(&self, env: &Env) -> Result<Value, ExprError> {
        let ty = || ExprError::Type(self.to_string());
        Ok(match self {
            Expr::Int(v) => Value::Int(*v),
            Expr::Var(name) => env.lookup(name)?,
            Expr::Neg(e) => match e.eval(env)? {
                Value::Int(v) => Value::Int(-v),
                Value::Vec(v) => Value::Vec(v.iter().map(|x| -x).collect()),
                Value::Bool(_) => return Err(ty()),
            },
            Expr::Not(e) => match e.eval(env)? {
                Value::Bool(b) => Value::Bool(!b),
                _ => return Err(ty()),
            },
            Expr::Bin(op, l, r) => {
                let (l, r) = (l.eval(env)?, r.eval(env)?);
                use Value::*;
                match (op, l, r) {
                    (Op::And, Bool(a), Bool(b)) => Bool(a && b),
                    (Op::Or, Bool(a), Bool(b)) => Bool(a || b),
                    (Op::Add, Int(a), Int(b)) => Int(a + b),
                    (Op::Sub, Int(a), Int(b)) => Int(a - b),
                    (Op::Mul, Int(a), Int(b)) => Int(a * b),
                    (Op::Rem, Int(a), Int(b)) if b != 0 => Int(a.rem_euclid(b)),
                    (Op::Add, Vec(a), Vec(b)) if a.len() == b.len() => {
                        Vec(a.iter().zip(&b).map(|(x, y)| x + y).collect())
                    }
                    (Op::Sub, Vec(a), Vec(b)) if a.len() == b.len() => {
                        Vec(a.iter().zip(&b).map(|(x, y)| x - y).collect())
                    }
                    (Op::Mul, Int(a), Vec(b)) | (Op::Mul, Vec(b), Int(a)) => {
                        Vec(b.iter().map(|x| a * x).collect())
                    }
                    (Op::Eq, a, b) => Bool(a == b),
                    (Op::Ne, a, b) => Bool(a != b),
                    (Op::Le, Int(a), Int(b)) => Bool(a <= b),
                    (Op::Ge, Int(a), Int(b)) => Bool(a >= b),
                    (Op::Lt, Int(a), Int(b)) => Bool(a < b),
                    (Op::Gt, Int(a), Int(b)) => Bool(a > b),
                    _ => return Err(ty()),
                }
            }
        })
    }

    pub fn eval_bool(&self, env: &Env) -> Result<bool, ExprError> {
        match self.eval(env)? {
            Value::Bool(b) => Ok(b),
            _ => Err(ExprError::Type(self.to_string())),
        }
    }

    pub fn eval_vec(&self, env: &Env) -> Result<Vec<i64>, ExprError> {
        match self.eval(env)? {
            Value::Vec(v) => Ok(v),
            _ => Err(ExprError::Type(self.to_string())),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(e) => write!(f, "-{e}"),
            Expr::Not(e) => write!(f, "!{e}"),
            Expr::Bin(op, l, r) => {
                let s = match op {
                    Op::Add => "+",
                    Op::Sub => "-",
                    Op::Mul => "*",
                    Op::Rem => "%",
                    Op::Eq => "==",
                    Op::Ne => "!=",
                    Op::Le => "<=",
                    Op::Ge => ">=",
                    Op::Lt => "<",
                    Op::Gt => ">",
                    Op::And => "&&",
                    Op::Or => "||",
                };
                write!(f, "({l} {s} {r})")
            }
        }
    }
}
