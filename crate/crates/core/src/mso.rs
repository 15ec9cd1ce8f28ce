//! Restricted weighted MSO over finite words.
//!
//! Disjunction and existential quantifiers sum, conjunction and universal
//! quantifiers multiply. A formula is restricted when every first-order
//! universal body is almost boolean and every second-order universal body
//! is boolean; restricted formulas define exactly the recognizable series.
//!
//! Concrete syntax:
//!
//! ```text
//! exists x. 2 & P_a(x)          forall X. ~(x in X) | 1/2
//! ```
//!
//! `~` binds tightest, then `&` (alias `*`), then `|` (alias `+`).
//! Quantifiers are weakest and extend as far right as possible.
//! First-order variables are lowercase, set variables uppercase.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, FinAlgebra};
use crate::exactla::{format_rational, parse_rational, Rational};
use crate::wfa::{LinearRepresentation, WfaError};

/// Default cap on `2^(N·s)` set assignments for a word of length `N` under
/// `s` nested set quantifiers.
pub const DEFAULT_EVAL_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsoError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("variable {0} is not assigned")]
    UnassignedVariable(String),
    #[error("variable {var} is assigned position {position} outside 1..={len}")]
    PositionOutOfRange {
        var: String,
        position: usize,
        len: usize,
    },
    #[error("formula is not restricted")]
    NotRestricted,
    #[error("evaluation needs {needed} set assignments, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Wfa(#[from] WfaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(Rational),
    LetterAt { var: String, symbol: String },
    Leq(String, String),
    InSet { var: String, set: String },
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    ExistsPos(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallPos(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

impl Formula {
    pub fn constant(c: Rational) -> Self {
        Formula::Const(c)
    }

    pub fn letter(var: &str, symbol: &str) -> Self {
        Formula::LetterAt {
            var: var.into(),
            symbol: symbol.into(),
        }
    }

    pub fn leq(a: &str, b: &str) -> Self {
        Formula::Leq(a.into(), b.into())
    }

    pub fn in_set(var: &str, set: &str) -> Self {
        Formula::InSet {
            var: var.into(),
            set: set.into(),
        }
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn exists_pos(v: &str, f: Formula) -> Self {
        Formula::ExistsPos(v.into(), Box::new(f))
    }

    pub fn exists_set(v: &str, f: Formula) -> Self {
        Formula::ExistsSet(v.into(), Box::new(f))
    }

    pub fn forall_pos(v: &str, f: Formula) -> Self {
        Formula::ForallPos(v.into(), Box::new(f))
    }

    pub fn forall_set(v: &str, f: Formula) -> Self {
        Formula::ForallSet(v.into(), Box::new(f))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::LetterAt { .. } | Formula::Leq(..) | Formula::InSet { .. } => 1,
            Formula::Not(a)
            | Formula::ExistsPos(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallPos(_, a)
            | Formula::ForallSet(_, a) => 1 + a.size(),
            Formula::Or(a, b) | Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Atoms, the constants 0 and 1, and their closure under `~`, `&` and
    /// universal quantification. These always evaluate to 0 or 1.
    pub fn is_boolean(&self) -> bool {
        match self {
            Formula::Const(c) => c.is_zero() || c.is_one(),
            Formula::LetterAt { .. } | Formula::Leq(..) | Formula::InSet { .. } => true,
            Formula::Not(a) | Formula::ForallPos(_, a) | Formula::ForallSet(_, a) => a.is_boolean(),
            Formula::And(a, b) => a.is_boolean() && b.is_boolean(),
            Formula::Or(..) | Formula::ExistsPos(..) | Formula::ExistsSet(..) => false,
        }
    }

    /// Sums and products of constants and boolean formulas.
    pub fn is_almost_boolean(&self) -> bool {
        match self {
            Formula::Const(_) => true,
            Formula::Or(a, b) | Formula::And(a, b) => a.is_almost_boolean() && b.is_almost_boolean(),
            f => f.is_boolean(),
        }
    }

    pub fn is_restricted(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::LetterAt { .. } | Formula::Leq(..) | Formula::InSet { .. } => true,
            Formula::Not(a) => a.is_boolean(),
            Formula::Or(a, b) | Formula::And(a, b) => a.is_restricted() && b.is_restricted(),
            Formula::ExistsPos(_, a) | Formula::ExistsSet(_, a) => a.is_restricted(),
            Formula::ForallPos(_, a) => a.is_almost_boolean() && a.is_restricted(),
            Formula::ForallSet(_, a) => a.is_boolean(),
        }
    }

    /// Free first-order and set variables.
    pub fn free_variables(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        fn walk(
            f: &Formula,
            bound: &mut Vec<String>,
            pos: &mut BTreeSet<String>,
            sets: &mut BTreeSet<String>,
        ) {
            let mut note = |v: &String, set: bool, bound: &Vec<String>| {
                if !bound.contains(v) {
                    if set {
                        sets.insert(v.clone());
                    } else {
                        pos.insert(v.clone());
                    }
                }
            };
            match f {
                Formula::Const(_) => {}
                Formula::LetterAt { var, .. } => note(var, false, bound),
                Formula::Leq(a, b) => {
                    note(a, false, bound);
                    note(b, false, bound);
                }
                Formula::InSet { var, set } => {
                    note(var, false, bound);
                    note(set, true, bound);
                }
                Formula::Not(a) => walk(a, bound, pos, sets),
                Formula::Or(a, b) | Formula::And(a, b) => {
                    walk(a, bound, pos, sets);
                    walk(b, bound, pos, sets);
                }
                Formula::ExistsPos(v, a)
                | Formula::ExistsSet(v, a)
                | Formula::ForallPos(v, a)
                | Formula::ForallSet(v, a) => {
                    bound.push(v.clone());
                    walk(a, bound, pos, sets);
                    bound.pop();
                }
            }
        }
        let (mut pos, mut sets) = (BTreeSet::new(), BTreeSet::new());
        walk(self, &mut Vec::new(), &mut pos, &mut sets);
        (pos, sets)
    }

    fn set_depth(&self) -> u32 {
        match self {
            Formula::Const(_) | Formula::LetterAt { .. } | Formula::Leq(..) | Formula::InSet { .. } => 0,
            Formula::Not(a) | Formula::ExistsPos(_, a) | Formula::ForallPos(_, a) => a.set_depth(),
            Formula::ExistsSet(_, a) | Formula::ForallSet(_, a) => 1 + a.set_depth(),
            Formula::Or(a, b) | Formula::And(a, b) => a.set_depth().max(b.set_depth()),
        }
    }

    fn mentions_sets(&self) -> bool {
        match self {
            Formula::InSet { .. } | Formula::ExistsSet(..) | Formula::ForallSet(..) => true,
            Formula::Const(_) | Formula::LetterAt { .. } | Formula::Leq(..) => false,
            Formula::Not(a) | Formula::ExistsPos(_, a) | Formula::ForallPos(_, a) => a.mentions_sets(),
            Formula::Or(a, b) | Formula::And(a, b) => a.mentions_sets() || b.mentions_sets(),
        }
    }

    fn write(&self, out: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        let quantifier = |out: &mut fmt::Formatter<'_>, kw: &str, v: &str, body: &Formula| {
            if level > 0 {
                write!(out, "(")?;
            }
            write!(out, "{kw} {v}. ")?;
            body.write(out, 0)?;
            if level > 0 {
                write!(out, ")")?;
            }
            Ok(())
        };
        match self {
            Formula::Const(c) => write!(out, "{}", format_rational(c)),
            Formula::LetterAt { var, symbol } => write!(out, "P_{symbol}({var})"),
            Formula::Leq(a, b) => write!(out, "{a} <= {b}"),
            Formula::InSet { var, set } => write!(out, "{var} in {set}"),
            Formula::Not(a) => {
                write!(out, "~")?;
                a.write(out, 3)
            }
            Formula::Or(a, b) | Formula::And(a, b) => {
                let (op, mine) = if matches!(self, Formula::Or(..)) {
                    ("|", 1)
                } else {
                    ("&", 2)
                };
                if level > mine {
                    write!(out, "(")?;
                }
                a.write(out, mine)?;
                write!(out, " {op} ")?;
                b.write(out, mine + 1)?;
                if level > mine {
                    write!(out, ")")?;
                }
                Ok(())
            }
            Formula::ExistsPos(v, a) | Formula::ExistsSet(v, a) => quantifier(out, "exists", v, a),
            Formula::ForallPos(v, a) | Formula::ForallSet(v, a) => quantifier(out, "forall", v, a),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Pos(String),
    Set(String),
    Letter(String),
    Num(Rational),
    Exists,
    Forall,
    In,
    Leq,
    Not,
    And,
    Or,
    Dot,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| SyntaxError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let simple = match c {
            '~' => Some(Tok::Not),
            '&' | '*' => Some(Tok::And),
            '|' | '+' => Some(Tok::Or),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            advance(1, &mut i);
            continue;
        }
        if c == '<' {
            if chars.get(i + 1) != Some(&'=') {
                return Err(err(l0, c0, "expected '<='".into()));
            }
            out.push(Spanned {
                tok: Tok::Leq,
                line: l0,
                column: c0,
            });
            advance(2, &mut i);
            continue;
        }
        if c.is_ascii_digit() || c == '-' {
            let start = i;
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '/') {
                j += 1;
            }
            let s: String = chars[start..j].iter().collect();
            let value = parse_rational(&s)
                .map_err(|e| err(l0, c0, format!("bad constant '{s}': {e}")))?;
            out.push(Spanned {
                tok: Tok::Num(value),
                line: l0,
                column: c0,
            });
            advance(j - i, &mut i);
            continue;
        }
        if c == 'P' && chars.get(i + 1) == Some(&'_') {
            let mut j = i + 2;
            while j < chars.len() && chars[j] != '(' && !chars[j].is_whitespace() {
                j += 1;
            }
            let sym: String = chars[i + 2..j].iter().collect();
            if sym.is_empty() || chars.get(j) != Some(&'(') {
                return Err(err(l0, c0, "expected P_<symbol>(<var>)".into()));
            }
            out.push(Spanned {
                tok: Tok::Letter(sym),
                line: l0,
                column: c0,
            });
            advance(j - i, &mut i);
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                "in" => Tok::In,
                _ if c.is_ascii_uppercase() => Tok::Set(word),
                _ => Tok::Pos(word),
            };
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            advance(j - i, &mut i);
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character '{c}'")));
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    bound: Vec<String>,
    free: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error_at(t: &Spanned, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        let t = self.next();
        if t.tok == tok {
            Ok(())
        } else {
            Err(Self::error_at(&t, format!("expected {what}")))
        }
    }

    fn check_bound(&self, t: &Spanned, name: &str) -> Result<(), SyntaxError> {
        if self.bound.iter().any(|b| b == name) || self.free.iter().any(|b| b == name) {
            Ok(())
        } else {
            Err(Self::error_at(t, format!("unbound variable {name}")))
        }
    }

    fn pos_var(&mut self) -> Result<String, SyntaxError> {
        let t = self.next();
        match &t.tok {
            Tok::Pos(name) => {
                self.check_bound(&t, name)?;
                Ok(name.clone())
            }
            _ => Err(Self::error_at(&t, "expected a first-order (lowercase) variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.conjunction()?;
        while self.peek().tok == Tok::Or {
            self.next();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while self.peek().tok == Tok::And {
            self.next();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Not => {
                let inner = self.unary()?;
                if !inner.is_boolean() {
                    return Err(Self::error_at(&t, "'~' applies only to boolean formulas"));
                }
                Ok(Formula::not(inner))
            }
            Tok::Exists | Tok::Forall => {
                let v = self.next();
                let (name, set) = match &v.tok {
                    Tok::Pos(n) => (n.clone(), false),
                    Tok::Set(n) => (n.clone(), true),
                    _ => return Err(Self::error_at(&v, "expected a variable after quantifier")),
                };
                if self.bound.contains(&name) || self.free.contains(&name) {
                    return Err(Self::error_at(&v, format!("variable {name} is already bound")));
                }
                self.expect(Tok::Dot, "'.' after quantified variable")?;
                self.bound.push(name.clone());
                let body = self.formula()?;
                self.bound.pop();
                Ok(match (t.tok, set) {
                    (Tok::Exists, false) => Formula::exists_pos(&name, body),
                    (Tok::Exists, true) => Formula::exists_set(&name, body),
                    (_, false) => Formula::forall_pos(&name, body),
                    (_, true) => Formula::forall_set(&name, body),
                })
            }
            Tok::LParen => {
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Num(c) => Ok(Formula::Const(c)),
            Tok::Letter(sym) => {
                self.expect(Tok::LParen, "'('")?;
                let v = self.pos_var()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Formula::letter(&v, &sym))
            }
            Tok::Pos(name) => {
                self.check_bound(&t, &name)?;
                let op = self.next();
                match op.tok {
                    Tok::Leq => {
                        let b = self.pos_var()?;
                        Ok(Formula::leq(&name, &b))
                    }
                    Tok::In => {
                        let s = self.next();
                        match &s.tok {
                            Tok::Set(set) => {
                                self.check_bound(&s, set)?;
                                Ok(Formula::in_set(&name, set))
                            }
                            _ => Err(Self::error_at(&s, "expected a set (uppercase) variable")),
                        }
                    }
                    _ => Err(Self::error_at(&op, "expected '<=' or 'in'")),
                }
            }
            Tok::Set(name) => Err(Self::error_at(
                &t,
                format!("set variable {name} cannot start an atom"),
            )),
            Tok::End => Err(Self::error_at(&t, "unexpected end of input")),
            _ => Err(Self::error_at(&t, "expected a formula")),
        }
    }
}

/// Parses a closed formula.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    parse_open(text, &[])
}

/// Parses a formula whose free variables must be among `free`.
pub fn parse_open(text: &str, free: &[&str]) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        bound: Vec::new(),
        free: free.iter().map(|s| s.to_string()).collect(),
    };
    let f = p.formula()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(Parser::error_at(t, "unexpected trailing input"));
    }
    Ok(f)
}

// ------------------------------------------------------------- evaluation

/// Values of free variables. Positions are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub positions: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, BTreeSet<usize>>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_position(mut self, var: &str, position: usize) -> Self {
        self.positions.insert(var.into(), position);
        self
    }

    pub fn with_set(mut self, var: &str, members: impl IntoIterator<Item = usize>) -> Self {
        self.sets.insert(var.into(), members.into_iter().collect());
        self
    }
}

enum Node {
    Const(Rational),
    Letter(usize, Option<usize>),
    Leq(usize, usize),
    In(usize, usize),
    Not(Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    ExistsPos(Box<Compiled>),
    ExistsSet(Box<Compiled>),
    ForallPos(Box<Compiled>),
    ForallSet(Box<Compiled>),
}

struct Compiled {
    node: Node,
    boolean: bool,
}

/// Variables are resolved to stack slots; letters to indices of the
/// distinct symbols occurring in the word.
fn compile(f: &Formula, pos: &mut Vec<String>, sets: &mut Vec<String>, symbols: &[&str]) -> Compiled {
    let slot = |stack: &Vec<String>, v: &str| stack.iter().rposition(|x| x == v).expect("checked free");
    let boolean = f.is_boolean();
    let rec = |g: &Formula, pos: &mut Vec<String>, sets: &mut Vec<String>| {
        Box::new(compile(g, pos, sets, symbols))
    };
    let node = match f {
        Formula::Const(c) => Node::Const(c.clone()),
        Formula::LetterAt { var, symbol } => {
            Node::Letter(slot(pos, var), symbols.iter().position(|s| s == symbol))
        }
        Formula::Leq(a, b) => Node::Leq(slot(pos, a), slot(pos, b)),
        Formula::InSet { var, set } => Node::In(slot(pos, var), slot(sets, set)),
        Formula::Not(a) => Node::Not(rec(a, pos, sets)),
        Formula::Or(a, b) => Node::Or(rec(a, pos, sets), rec(b, pos, sets)),
        Formula::And(a, b) => Node::And(rec(a, pos, sets), rec(b, pos, sets)),
        Formula::ExistsPos(v, a) | Formula::ForallPos(v, a) => {
            pos.push(v.clone());
            let body = rec(a, pos, sets);
            pos.pop();
            if matches!(f, Formula::ExistsPos(..)) {
                Node::ExistsPos(body)
            } else {
                Node::ForallPos(body)
            }
        }
        Formula::ExistsSet(v, a) | Formula::ForallSet(v, a) => {
            sets.push(v.clone());
            let body = rec(a, pos, sets);
            sets.pop();
            if matches!(f, Formula::ExistsSet(..)) {
                Node::ExistsSet(body)
            } else {
                Node::ForallSet(body)
            }
        }
    };
    Compiled { node, boolean }
}

struct Env<'a> {
    word: &'a [usize],
    pos: Vec<usize>,
    sets: Vec<u64>,
}

impl Env<'_> {
    fn subsets(&self) -> u64 {
        if self.word.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.word.len()) - 1
        }
    }

    fn truth(&mut self, c: &Compiled) -> bool {
        match &c.node {
            Node::Const(v) => v.is_one(),
            Node::Letter(p, s) => Some(self.word[self.pos[*p]]) == *s,
            Node::Leq(a, b) => self.pos[*a] <= self.pos[*b],
            Node::In(p, s) => self.sets[*s] >> self.pos[*p] & 1 == 1,
            Node::Not(a) => !self.truth(a),
            Node::And(a, b) => self.truth(a) && self.truth(b),
            Node::ForallPos(a) => (0..self.word.len()).all(|p| {
                self.pos.push(p);
                let ok = self.truth(a);
                self.pos.pop();
                ok
            }),
            Node::ForallSet(a) => {
                let last = self.subsets();
                let mut m = 0u64;
                loop {
                    self.sets.push(m);
                    let ok = self.truth(a);
                    self.sets.pop();
                    if !ok {
                        return false;
                    }
                    if m == last {
                        return true;
                    }
                    m += 1;
                }
            }
            Node::Or(..) | Node::ExistsPos(_) | Node::ExistsSet(_) => {
                unreachable!("sums are never boolean")
            }
        }
    }

    fn value(&mut self, c: &Compiled) -> Rational {
        if c.boolean {
            return if self.truth(c) {
                Rational::one()
            } else {
                Rational::zero()
            };
        }
        match &c.node {
            Node::Const(v) => v.clone(),
            Node::Or(a, b) => self.value(a) + self.value(b),
            Node::And(a, b) => {
                let x = self.value(a);
                if x.is_zero() {
                    x
                } else {
                    x * self.value(b)
                }
            }
            Node::ExistsPos(a) => {
                let mut total = Rational::zero();
                for p in 0..self.word.len() {
                    self.pos.push(p);
                    total += self.value(a);
                    self.pos.pop();
                }
                total
            }
            Node::ForallPos(a) => {
                let mut total = Rational::one();
                for p in 0..self.word.len() {
                    self.pos.push(p);
                    total *= self.value(a);
                    self.pos.pop();
                    if total.is_zero() {
                        break;
                    }
                }
                total
            }
            Node::ExistsSet(a) | Node::ForallSet(a) => {
                let sum = matches!(c.node, Node::ExistsSet(_));
                let mut total = if sum { Rational::zero() } else { Rational::one() };
                let last = self.subsets();
                let mut m = 0u64;
                loop {
                    self.sets.push(m);
                    let v = self.value(a);
                    self.sets.pop();
                    if sum {
                        total += v;
                    } else {
                        total *= v;
                        if total.is_zero() {
                            break;
                        }
                    }
                    if m == last {
                        break;
                    }
                    m += 1;
                }
                total
            }
            Node::Not(a) => Rational::one() - self.value(a),
            Node::Letter(..) | Node::Leq(..) | Node::In(..) => unreachable!("atoms are boolean"),
        }
    }
}

/// Direct semantics of a restricted formula on `word`.
pub fn evaluate_formula<S: AsRef<str>>(
    f: &Formula,
    word: &[S],
    assignment: &Assignment,
    budget: u128,
) -> Result<Rational, MsoError> {
    if !f.is_restricted() {
        return Err(MsoError::NotRestricted);
    }
    let n = word.len();
    let (free_pos, free_sets) = f.free_variables();
    let mut pos_names = Vec::new();
    let mut pos_vals = Vec::new();
    for v in &free_pos {
        let p = *assignment
            .positions
            .get(v)
            .ok_or_else(|| MsoError::UnassignedVariable(v.clone()))?;
        if p == 0 || p > n {
            return Err(MsoError::PositionOutOfRange {
                var: v.clone(),
                position: p,
                len: n,
            });
        }
        pos_names.push(v.clone());
        pos_vals.push(p - 1);
    }
    let depth = f.set_depth();
    let needed = if f.mentions_sets() && n > 64 {
        u128::MAX
    } else {
        (n as u128)
            .checked_mul(depth as u128)
            .filter(|&e| e < 128)
            .map_or(u128::MAX, |e| 1u128 << e)
    };
    if needed > budget {
        return Err(MsoError::BudgetExceeded { needed, budget });
    }
    let mut set_names = Vec::new();
    let mut set_vals = Vec::new();
    for v in &free_sets {
        let members = assignment
            .sets
            .get(v)
            .ok_or_else(|| MsoError::UnassignedVariable(v.clone()))?;
        let mut mask = 0u64;
        for &p in members {
            if p == 0 || p > n {
                return Err(MsoError::PositionOutOfRange {
                    var: v.clone(),
                    position: p,
                    len: n,
                });
            }
            mask |= 1 << (p - 1);
        }
        set_names.push(v.clone());
        set_vals.push(mask);
    }
    let mut symbols: Vec<&str> = Vec::new();
    let ids: Vec<usize> = word
        .iter()
        .map(|s| {
            let s = s.as_ref();
            symbols.iter().position(|x| *x == s).unwrap_or_else(|| {
                symbols.push(s);
                symbols.len() - 1
            })
        })
        .collect();
    let compiled = compile(f, &mut pos_names, &mut set_names, &symbols);
    let mut env = Env {
        word: &ids,
        pos: pos_vals,
        sets: set_vals,
    };
    Ok(env.value(&compiled))
}

// ----------------------------------------------------------- translation

fn bool_or(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
}

fn bool_exists_pos(v: &str, body: Formula) -> Formula {
    Formula::not(Formula::forall_pos(v, Formula::not(body)))
}

fn any_of(items: impl IntoIterator<Item = Formula>) -> Formula {
    items
        .into_iter()
        .reduce(bool_or)
        .unwrap_or(Formula::Const(Rational::zero()))
}

fn all_of(items: impl IntoIterator<Item = Formula>) -> Formula {
    items
        .into_iter()
        .reduce(Formula::and)
        .unwrap_or(Formula::Const(Rational::one()))
}

fn set_name(q: usize) -> String {
    format!("X{}", q + 1)
}

/// A restricted formula defining the same series as `rep`.
///
/// For each start state `i` and end state `j` with nonzero
/// `initial[i]·final[j]`, set variables `X1…Xn` guess a run (position `p`
/// lies in `Xq` when the run is in state `q` after reading `p`), and a
/// first-order universal multiplies the transition weight at each position.
pub fn wfa_to_formula(rep: &LinearRepresentation) -> Formula {
    let n = rep.dim();
    let alphabet = rep.alphabet();
    let x = "x";
    let first = |v: &str| Formula::forall_pos("z", Formula::leq(v, "z"));
    let last = |v: &str| Formula::forall_pos("y", Formula::leq("y", v));
    // y is the position just before x
    let succ = Formula::and(
        Formula::and(Formula::leq("y", x), Formula::not(Formula::leq(x, "y"))),
        Formula::forall_pos("z", bool_or(Formula::leq("z", "y"), Formula::leq(x, "z"))),
    );
    let nonempty = Formula::not(Formula::forall_pos(x, Formula::Const(Rational::zero())));

    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let weight = &rep.initial()[i] * &rep.final_weights()[j];
            if weight.is_zero() {
                continue;
            }
            let mut steps = Vec::new();
            for (a, m) in rep.transitions().iter().enumerate() {
                for q in 0..n {
                    for r in 0..n {
                        let c = &m[(q, r)];
                        if c.is_zero() {
                            continue;
                        }
                        let from_q = bool_exists_pos(
                            "y",
                            Formula::and(succ.clone(), Formula::in_set("y", &set_name(q))),
                        );
                        let prev = if q == i { bool_or(first(x), from_q) } else { from_q };
                        let guard = all_of([
                            Formula::letter(x, alphabet.symbol(a)),
                            Formula::in_set(x, &set_name(r)),
                            prev,
                        ]);
                        steps.push(Formula::and(guard, Formula::Const(c.clone())));
                    }
                }
            }
            let step = steps
                .into_iter()
                .reduce(Formula::or)
                .unwrap_or(Formula::Const(Rational::zero()));
            let cover = Formula::forall_pos(x, any_of((0..n).map(|q| Formula::in_set(x, &set_name(q)))));
            let mut end = Formula::forall_pos(
                x,
                bool_or(Formula::not(last(x)), Formula::in_set(x, &set_name(j))),
            );
            if i != j {
                end = Formula::and(end, nonempty.clone());
            }
            let mut body = all_of([cover, end, Formula::forall_pos(x, step)]);
            // disjointness of X_k from earlier sets is checked as soon as X_k is chosen
            for k in (0..n).rev() {
                if k > 0 {
                    let overlap = Formula::and(
                        Formula::in_set(x, &set_name(k)),
                        any_of((0..k).map(|q| Formula::in_set(x, &set_name(q)))),
                    );
                    body = Formula::and(Formula::forall_pos(x, Formula::not(overlap)), body);
                }
                body = Formula::exists_set(&set_name(k), body);
            }
            terms.push(Formula::and(Formula::Const(weight), body));
        }
    }
    terms
        .into_iter()
        .reduce(Formula::or)
        .unwrap_or(Formula::Const(Rational::zero()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LtftReport {
    pub algebra_dim: usize,
    pub states: usize,
    pub formula_size: usize,
    pub restricted: bool,
    pub max_len: usize,
    pub words_checked: usize,
    pub mismatches: usize,
}

impl LtftReport {
    pub fn passed(&self) -> bool {
        self.restricted && self.mismatches == 0
    }
}

/// Turns a semisimple algebra with its trace form into a formula and checks
/// that the formula agrees with the series on all words up to `max_len`.
pub fn ltft_definability_report(alg: &FinAlgebra, max_len: usize) -> Result<LtftReport, MsoError> {
    if !alg.is_semisimple() {
        return Err(AlgebraError::NotSemisimple.into());
    }
    let series = LinearRepresentation::series_from_algebra(alg, &alg.canonical_form())?;
    let minimal = series.minimize();
    let formula = wfa_to_formula(&minimal);
    let restricted = formula.is_restricted();
    let words = series.alphabet().words_up_to(max_len);
    let mut mismatches = 0;
    if restricted {
        for w in &words {
            let symbols: Vec<&str> = w.iter().map(|&a| series.alphabet().symbol(a)).collect();
            let v = evaluate_formula(&formula, &symbols, &Assignment::new(), DEFAULT_EVAL_BUDGET)?;
            if v != series.evaluate(w)? {
                mismatches += 1;
            }
        }
    }
    Ok(LtftReport {
        algebra_dim: alg.dim(),
        states: minimal.dim(),
        formula_size: formula.size(),
        restricted,
        max_len,
        words_checked: if restricted { words.len() } else { 0 },
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::corpus;
    use crate::exactla::{rat, Matrix};
    use crate::word::Alphabet;

    fn eval(f: &Formula, w: &str) -> Rational {
        let symbols: Vec<String> = w.chars().map(String::from).collect();
        evaluate_formula(f, &symbols, &Assignment::new(), DEFAULT_EVAL_BUDGET).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("forall x. P_a(x)").unwrap(),
            Formula::forall_pos("x", Formula::letter("x", "a"))
        );
        assert_eq!(
            parse("exists x. 2 * P_a(x)").unwrap(),
            Formula::exists_pos("x", Formula::and(Formula::Const(rat(2)), Formula::letter("x", "a")))
        );
        let e = parse("exists X. x in X").unwrap_err();
        assert!(e.message.contains("unbound"), "{e}");
        assert_eq!((e.line, e.column), (1, 11));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse("forall x.\n  exists x. P_a(x)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        assert!(e.message.contains("already bound"));
        let e = parse("exists x. ~2").unwrap_err();
        assert_eq!(e.column, 11);
        assert!(parse("exists x. P_a(x) )").is_err());
        assert!(parse("exists x. x in y").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn precedence_and_scope() {
        let f = parse("1 | 2 & 3").unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::Const(rat(1)),
                Formula::and(Formula::Const(rat(2)), Formula::Const(rat(3)))
            )
        );
        // the quantifier swallows everything to its right
        let f = parse("2 & exists x. P_a(x) | 1").unwrap();
        assert!(matches!(&f, Formula::And(_, b) if matches!(**b, Formula::ExistsPos(..))));
        assert_eq!(eval(&f, "aa"), rat(2 * (2 + 2)));
        let f = parse("# comment\n(exists x. P_a(x)) + 1 # trailing").unwrap();
        assert_eq!(eval(&f, "aba"), rat(3));
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "forall x. P_a(x)",
            "exists x. 2 & P_a(x)",
            "(exists x. P_a(x)) | -1/2 & ~(forall X. forall y. y in X)",
            "forall x. ~(P_a(x) & ~P_b(x)) | 3",
            "1 | (2 | 3)",
            "(1 & 2) & 3 & ~~P_a(x) | x <= x",
        ] {
            let free: &[&str] = if text.contains("P_a(x) | x") { &["x"] } else { &[] };
            let f = parse_open(text, free).unwrap();
            assert_eq!(parse_open(&f.to_string(), free).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn restriction_examples() {
        let f = parse("forall x. P_a(x)").unwrap();
        assert!(f.is_boolean() && f.is_restricted());
        let f = parse("forall x. 2").unwrap();
        assert!(!f.is_boolean() && f.is_restricted());
        let f = parse("forall X. exists x. 2 * (x in X)").unwrap();
        assert!(!f.is_restricted());
        let f = parse("forall x. exists y. P_a(y)").unwrap();
        assert!(!f.is_restricted());
        assert_eq!(
            evaluate_formula(&f, &["a"], &Assignment::new(), DEFAULT_EVAL_BUDGET),
            Err(MsoError::NotRestricted)
        );
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(eval(&parse("exists x. P_a(x)").unwrap(), "aba"), rat(2));
        assert_eq!(eval(&parse("forall x. 2").unwrap(), "abc"), rat(8));
        assert_eq!(eval(&parse("exists X. 1").unwrap(), "abc"), rat(8));
        assert_eq!(eval(&parse("exists X. forall x. x in X").unwrap(), "abc"), rat(1));
        assert_eq!(eval(&parse("forall x. 2").unwrap(), ""), rat(1));
        assert_eq!(eval(&parse("exists x. 5").unwrap(), ""), rat(0));
        assert_eq!(eval(&parse("~(forall x. P_b(x))").unwrap(), "bb"), rat(0));
    }

    #[test]
    fn free_variables_need_assignments() {
        let f = parse_open("P_a(x) & x in X", &["x", "X"]).unwrap();
        let w = ["a", "b"];
        assert_eq!(
            evaluate_formula(&f, &w, &Assignment::new(), DEFAULT_EVAL_BUDGET),
            Err(MsoError::UnassignedVariable("x".into()))
        );
        let a = Assignment::new().with_position("x", 1).with_set("X", [1, 2]);
        assert_eq!(evaluate_formula(&f, &w, &a, DEFAULT_EVAL_BUDGET).unwrap(), rat(1));
        let a = Assignment::new().with_position("x", 2).with_set("X", [1, 2]);
        assert_eq!(evaluate_formula(&f, &w, &a, DEFAULT_EVAL_BUDGET).unwrap(), rat(0));
        let a = Assignment::new().with_position("x", 3).with_set("X", [1]);
        assert!(matches!(
            evaluate_formula(&f, &w, &a, DEFAULT_EVAL_BUDGET),
            Err(MsoError::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn budget_guard() {
        let f = parse("exists X. exists Y. 1").unwrap();
        let w = vec!["a"; 20];
        assert_eq!(
            evaluate_formula(&f, &w, &Assignment::new(), 1 << 20),
            Err(MsoError::BudgetExceeded {
                needed: 1 << 40,
                budget: 1 << 20
            })
        );
        assert_eq!(
            evaluate_formula(&f, &w[..5], &Assignment::new(), 1 << 20).unwrap(),
            rat(1 << 10)
        );
    }

    /// Every closed boolean sentence over {a, b} up to a small size
    /// evaluates into {0, 1}.
    #[test]
    fn boolean_sentences_are_zero_one() {
        let atoms = ["P_a(x)", "x <= y", "x in X", "P_b(y)", "0", "1"];
        let mut bodies: Vec<String> = atoms.iter().map(|s| s.to_string()).collect();
        for a in atoms {
            for b in atoms {
                bodies.push(format!("~({a}) & {b}"));
            }
        }
        let words = Alphabet::new(["a", "b"]).unwrap().words_up_to(3);
        for body in bodies {
            let text = format!("forall X. forall x. ~(forall y. ~({body}))");
            let f = parse(&text).unwrap();
            assert!(f.is_boolean());
            for w in &words {
                let s: Vec<&str> = w.iter().map(|&i| ["a", "b"][i]).collect();
                let v = evaluate_formula(&f, &s, &Assignment::new(), DEFAULT_EVAL_BUDGET).unwrap();
                assert!(v.is_zero() || v.is_one(), "{text} on {s:?}");
            }
        }
    }

    fn counting() -> LinearRepresentation {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        LinearRepresentation::new(
            ab,
            vec![rat(1), rat(0)],
            vec![Matrix::from_i64(&[&[1, 1], &[0, 1]]), Matrix::identity(2)],
            vec![rat(0), rat(1)],
        )
        .unwrap()
    }

    fn round_trip(rep: &LinearRepresentation, max_len: usize) {
        let f = wfa_to_formula(rep);
        assert!(f.is_restricted());
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        for w in rep.alphabet().words_up_to(max_len) {
            let s: Vec<&str> = w.iter().map(|&a| rep.alphabet().symbol(a)).collect();
            let v = evaluate_formula(&f, &s, &Assignment::new(), DEFAULT_EVAL_BUDGET).unwrap();
            assert_eq!(v, rep.evaluate(&w).unwrap(), "{s:?}");
        }
    }

    #[test]
    fn translation_examples() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let one = LinearRepresentation::constant_one(ab.clone());
        round_trip(&one, 5);
        let f = wfa_to_formula(&counting());
        assert_eq!(eval(&f, "aab"), rat(2));
        round_trip(&counting(), 5);
        let zero = LinearRepresentation::zero(ab, 2);
        assert_eq!(wfa_to_formula(&zero), Formula::Const(rat(0)));
        round_trip(&zero, 3);
    }

    #[test]
    fn translation_of_weighted_three_state_automaton() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let rep = LinearRepresentation::new(
            ab,
            vec![rat(1), rat(-1), crate::exactla::ratio(1, 2)],
            vec![
                Matrix::from_i64(&[&[0, 1, 0], &[2, 0, 1], &[0, 0, -1]]),
                Matrix::from_i64(&[&[1, 0, 0], &[0, 3, 0], &[1, 1, 0]]),
            ],
            vec![rat(2), rat(0), rat(1)],
        )
        .unwrap();
        round_trip(&rep, 4);
    }

    #[test]
    fn ltft_reports() {
        for (alg, len) in [(corpus::rationals(), 4), (corpus::split_product(2), 4)] {
            let r = ltft_definability_report(&alg, len).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = ltft_definability_report(&corpus::rationals(), 4).unwrap();
        assert_eq!(r.states, 1);
        assert!(matches!(
            ltft_definability_report(&corpus::dual_numbers(), 2),
            Err(MsoError::Algebra(AlgebraError::NotSemisimple))
        ));
    }
}
