//! Modal term ASTs over named variables.
//!
//! Two interchangeable serializations: a prefix text form, e.g.
//! `And(Dia(Var x))(Not(Var x))`, and the serde JSON encoding of the enum.
//! Both round-trip exactly.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::{Frame, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Dia(Box<Term>),
    Box(Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }

    pub fn dia(t: Term) -> Term {
        Term::Dia(Box::new(t))
    }

    pub fn boxed(t: Term) -> Term {
        Term::Box(Box::new(t))
    }

    /// `dia` iterated `k` times.
    pub fn dia_n(t: Term, k: usize) -> Term {
        (0..k).fold(t, |acc, _| Term::dia(acc))
    }

    /// The natural closure operator `box dia`.
    pub fn gamma(t: Term) -> Term {
        Term::boxed(Term::dia(t))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 1,
            Term::Not(t) | Term::Dia(t) | Term::Box(t) => 1 + t.size(),
            Term::And(a, b) | Term::Or(a, b) => 1 + a.size() + b.size(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("variable {0:?} is not bound in the environment")]
    UnboundVariable(String),
    #[error("environment binds {name:?} to width {got}, frame has {expected} vertices")]
    EnvWidthMismatch { name: String, expected: usize, got: usize },
}

/// Evaluate a term over the complex algebra of `frame`, with free variables
/// bound to subsets by `env`.
pub fn eval_term(
    frame: &Frame,
    term: &Term,
    env: &HashMap<String, Subset>,
) -> Result<Subset, TermError> {
    match term {
        Term::Zero => Ok(Subset::empty(frame.n())),
        Term::One => Ok(Subset::full(frame.n())),
        Term::Var(name) => {
            let s = env
                .get(name)
                .ok_or_else(|| TermError::UnboundVariable(name.clone()))?;
            if s.width() != frame.n() {
                return Err(TermError::EnvWidthMismatch {
                    name: name.clone(),
                    expected: frame.n(),
                    got: s.width(),
                });
            }
            Ok(*s)
        }
        Term::Not(t) => Ok(!eval_term(frame, t, env)?),
        Term::And(a, b) => Ok(eval_term(frame, a, env)? & eval_term(frame, b, env)?),
        Term::Or(a, b) => Ok(eval_term(frame, a, env)? | eval_term(frame, b, env)?),
        Term::Dia(t) => Ok(super::diamond(frame, &eval_term(frame, t, env)?)),
        Term::Box(t) => Ok(super::box_(frame, &eval_term(frame, t, env)?)),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "Zero"),
            Term::One => write!(f, "One"),
            Term::Var(name) => write!(f, "Var {name}"),
            Term::Not(t) => write!(f, "Not({t})"),
            Term::And(a, b) => write!(f, "And({a})({b})"),
            Term::Or(a, b) => write!(f, "Or({a})({b})"),
            Term::Dia(t) => write!(f, "Dia({t})"),
            Term::Box(t) => write!(f, "Box({t})"),
        }
    }
}

impl FromStr for Term {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Term, TermError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input after term"));
        }
        Ok(t)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> TermError {
        TermError::Parse { pos: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, TermError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an identifier"));
        }
        if self.src[start].is_ascii_digit() {
            return Err(TermError::Parse {
                pos: start,
                message: "identifier cannot start with a digit".into(),
            });
        }
        Ok(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap())
    }

    fn expect(&mut self, b: u8) -> Result<(), TermError> {
        self.skip_ws();
        if self.pos < self.src.len() && self.src[self.pos] == b {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", b as char)))
        }
    }

    fn arg(&mut self) -> Result<Term, TermError> {
        self.expect(b'(')?;
        let t = self.term()?;
        self.expect(b')')?;
        Ok(t)
    }

    fn term(&mut self) -> Result<Term, TermError> {
        let head = self.ident()?;
        match head.as_str() {
            "Zero" => Ok(Term::Zero),
            "One" => Ok(Term::One),
            "Var" => Ok(Term::Var(self.ident()?)),
            "Not" => Ok(Term::not(self.arg()?)),
            "Dia" => Ok(Term::dia(self.arg()?)),
            "Box" => Ok(Term::boxed(self.arg()?)),
            "And" => Ok(Term::and(self.arg()?, self.arg()?)),
            "Or" => Ok(Term::or(self.arg()?, self.arg()?)),
            other => Err(self.err(format!("unknown term head {other:?}"))),
        }
    }
}
