//! First-order sentences over the language of left S-posets and their
//! evaluation on finite structures.
//!
//! Text syntax:
//!
//! ```text
//! formula := 'forall' var+ '.' formula | 'exists' var+ '.' formula
//!          | '!' formula | 'true' | 'false'
//!          | '(' term ('<=' | '=') term ')'
//!          | '(' formula (('&' | '|') formula)+ ')'
//!          | '(' formula '->' formula ')'
//!          | '(' formula ')'
//! term    := var | elem '*' term | elem '*' '(' term ')'
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{Pomonoid, RawSPoset, SPoset};

/// `s_1*(s_2*(…*(s_k*x)))`, coefficients listed outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub coeffs: Vec<usize>,
    pub var: String,
}

impl Term {
    pub fn var(v: &str) -> Self {
        Term { coeffs: Vec::new(), var: v.to_string() }
    }

    pub fn act(s: usize, v: &str) -> Self {
        Term { coeffs: vec![s], var: v.to_string() }
    }

    pub fn acts(coeffs: Vec<usize>, v: &str) -> Self {
        Term { coeffs, var: v.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Leq(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    /// Empty conjunction is `true`.
    And(Vec<Formula>),
    /// Empty disjunction is `false`.
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn leq(a: Term, b: Term) -> Self {
        Formula::Leq(a, b)
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Self {
        Formula::Forall(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn exists(vars: &[&str], body: Formula) -> Self {
        Formula::Exists(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    /// A single disjunct stays bare.
    pub fn or(mut parts: Vec<Formula>) -> Self {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        }
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut term = |t: &Term, bound: &Vec<String>| {
            if !bound.contains(&t.var) && !out.contains(&t.var) {
                out.push(t.var.clone());
            }
        };
        match self {
            Formula::Leq(a, b) | Formula::Eq(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let depth = bound.len();
                bound.extend(vs.iter().cloned());
                f.collect_free(bound, out);
                bound.truncate(depth);
            }
        }
    }

    pub fn render(&self, monoid: &Pomonoid) -> String {
        let mut s = String::new();
        self.write(monoid, &mut s);
        s
    }

    fn write(&self, m: &Pomonoid, out: &mut String) {
        match self {
            Formula::Leq(a, b) => {
                let _ = write!(out, "({} <= {})", render_term(a, m), render_term(b, m));
            }
            Formula::Eq(a, b) => {
                let _ = write!(out, "({} = {})", render_term(a, m), render_term(b, m));
            }
            Formula::Not(f) => {
                out.push('!');
                f.write(m, out);
            }
            Formula::And(fs) | Formula::Or(fs) if fs.is_empty() => {
                out.push_str(if matches!(self, Formula::And(_)) { "true" } else { "false" });
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let op = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                out.push('(');
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(op);
                    }
                    f.write(m, out);
                }
                out.push(')');
            }
            Formula::Implies(a, b) => {
                out.push('(');
                a.write(m, out);
                out.push_str(" -> ");
                b.write(m, out);
                out.push(')');
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                out.push_str(if matches!(self, Formula::Forall(..)) { "forall " } else { "exists " });
                out.push_str(&vs.join(" "));
                out.push_str(". ");
                f.write(m, out);
            }
        }
    }
}

fn render_term(t: &Term, m: &Pomonoid) -> String {
    let mut s = t.var.clone();
    for (i, &c) in t.coeffs.iter().rev().enumerate() {
        s = if i == 0 { format!("{}*{s}", m.name(c)) } else { format!("{}*({s})", m.name(c)) };
    }
    s
}

/// A named axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub label: String,
    pub formula: Formula,
    /// Set when the choice of branch rests on a bounded search.
    pub bound_relative: bool,
}

impl Sentence {
    pub fn new(label: impl Into<String>, formula: Formula) -> Self {
        Sentence { label: label.into(), formula, bound_relative: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Star,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Le,
    EqSign,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    end: (usize, usize),
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str, line0: usize) -> Result<Lexer> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (line0, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, k) = (line, col);
        let mut advance = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '*' => Some(Tok::Star),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Bang),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Pipe),
            '=' => Some(Tok::EqSign),
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance = 2;
                Some(Tok::Arrow)
            }
            '<' if chars.get(i + 1) == Some(&'=') => {
                advance = 2;
                Some(Tok::Le)
            }
            c if is_ident_char(c) => {
                let start = i;
                while i + advance < chars.len() && is_ident_char(chars[i + advance]) {
                    advance += 1;
                }
                Some(Tok::Ident(chars[start..start + advance].iter().collect()))
            }
            other => return Err(Error::Syntax { line: l, column: k, message: format!("unexpected character {other:?}") }),
        };
        if let Some(t) = tok {
            toks.push((t, l, k));
        }
        i += advance;
        col += advance;
    }
    Ok(Lexer { toks, end: (line, col) })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
    monoid: &'a Pomonoid,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.toks.get(self.pos).map_or(self.end, |t| (t.1, t.2));
        Err(Error::Syntax { line, column, message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Ident(k)) if k == "forall" || k == "exists" => {
                let universal = k == "forall";
                self.pos += 1;
                let mut vars = vec![self.ident()?];
                while let Some(Tok::Ident(_)) = self.peek() {
                    vars.push(self.ident()?);
                }
                self.expect(Tok::Dot, "'.'")?;
                let body = Box::new(self.formula()?);
                Ok(if universal { Formula::Forall(vars, body) } else { Formula::Exists(vars, body) })
            }
            Some(Tok::Ident(k)) if k == "true" || k == "false" => {
                let f = if k == "true" { Formula::And(vec![]) } else { Formula::Or(vec![]) };
                self.pos += 1;
                Ok(f)
            }
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let starts_term = matches!(self.peek(), Some(Tok::Ident(k)) if !matches!(k.as_str(), "forall" | "exists" | "true" | "false"));
                if starts_term {
                    let a = self.term()?;
                    let strict = match self.peek() {
                        Some(Tok::Le) => true,
                        Some(Tok::EqSign) => false,
                        _ => return self.err("expected '<=' or '='"),
                    };
                    self.pos += 1;
                    let b = self.term()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(if strict { Formula::Leq(a, b) } else { Formula::Eq(a, b) });
                }
                let first = self.formula()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(first)
                    }
                    Some(Tok::Arrow) => {
                        self.pos += 1;
                        let second = self.formula()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Formula::implies(first, second))
                    }
                    Some(op @ (Tok::Amp | Tok::Pipe)) => {
                        let op = op.clone();
                        let mut parts = vec![first];
                        while self.peek() == Some(&op) {
                            self.pos += 1;
                            parts.push(self.formula()?);
                        }
                        self.expect(Tok::RParen, "')' (mixing '&' and '|' needs parentheses)")?;
                        Ok(if op == Tok::Amp { Formula::And(parts) } else { Formula::Or(parts) })
                    }
                    _ => self.err("expected ')', '->', '&' or '|'"),
                }
            }
            _ => self.err("expected a formula"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        if self.peek() != Some(&Tok::Star) {
            return Ok(Term::var(&name));
        }
        let Some(s) = self.monoid.index_of(&name) else {
            return self.err(format!("unknown monoid element {name:?}")).map_err(|e| self.shift_back(e));
        };
        self.pos += 1;
        let inner = if self.peek() == Some(&Tok::LParen) && matches!(self.peek_at(1), Some(Tok::Ident(_))) {
            self.pos += 1;
            let t = self.term()?;
            self.expect(Tok::RParen, "')'")?;
            t
        } else {
            self.term()?
        };
        let mut coeffs = vec![s];
        coeffs.extend(inner.coeffs);
        Ok(Term { coeffs, var: inner.var })
    }

    /// Points an error at the previous token.
    fn shift_back(&self, e: Error) -> Error {
        match (e, self.toks.get(self.pos.wrapping_sub(1))) {
            (Error::Syntax { message, .. }, Some(t)) => Error::Syntax { line: t.1, column: t.2, message },
            (e, _) => e,
        }
    }
}

/// Parses a formula written in the text syntax. `line` numbers errors.
pub fn parse_formula_at(text: &str, monoid: &Pomonoid, line: usize) -> Result<Formula> {
    let lexer = lex(text, line)?;
    let mut p = Parser { toks: lexer.toks, pos: 0, end: lexer.end, monoid };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

pub fn parse_formula(text: &str, monoid: &Pomonoid) -> Result<Formula> {
    parse_formula_at(text, monoid, 1)
}

/// Renders sentences one per line as `label: formula`, flagging
/// bound-relative ones with a trailing `  # bound-relative`.
pub fn render_sentences(sentences: &[Sentence], monoid: &Pomonoid) -> String {
    let mut out = String::new();
    for s in sentences {
        let _ = write!(out, "{}: {}", s.label, s.formula.render(monoid));
        if s.bound_relative {
            out.push_str("  # bound-relative");
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`render_sentences`]. Blank lines are skipped.
pub fn parse_sentences(text: &str, monoid: &Pomonoid) -> Result<Vec<Sentence>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (body, bound_relative) = match raw.strip_suffix("  # bound-relative") {
            Some(b) => (b, true),
            None => (raw, false),
        };
        let Some(colon) = body.find(": ") else {
            return Err(Error::Syntax { line, column: 1, message: "expected 'label: formula'".into() });
        };
        let label = body[..colon].to_string();
        let offset = body[..colon + 2].chars().count();
        let formula = parse_formula_at(&body[colon + 2..], monoid, line).map_err(|e| match e {
            Error::Syntax { line, column, message } => Error::Syntax { line, column: column + offset, message },
            e => e,
        })?;
        out.push(Sentence { label, formula, bound_relative });
    }
    Ok(out)
}

/// A finite interpretation: carrier `0..n`, `act[s][x]`, and `leq[x][y]`.
struct Model<'a> {
    act: &'a [Vec<usize>],
    leq: &'a [Vec<bool>],
    n: usize,
}

impl Model<'_> {
    fn term(&self, t: &Term, env: &[(String, usize)]) -> Result<usize> {
        let mut x = env
            .iter()
            .rev()
            .find(|(v, _)| *v == t.var)
            .map(|&(_, x)| x)
            .ok_or_else(|| Error::UnboundVariable(t.var.clone()))?;
        for &s in t.coeffs.iter().rev() {
            x = *self.act.get(s).and_then(|row| row.get(x)).ok_or(Error::OutOfRange { what: "coefficient", index: s, size: self.act.len() })?;
        }
        Ok(x)
    }

    fn eval(&self, f: &Formula, env: &mut Vec<(String, usize)>) -> Result<bool> {
        Ok(match f {
            Formula::Leq(a, b) => self.leq[self.term(a, env)?][self.term(b, env)?],
            Formula::Eq(a, b) => self.term(a, env)? == self.term(b, env)?,
            Formula::Not(g) => !self.eval(g, env)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.eval(g, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.eval(g, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Formula::Forall(vs, g) => self.quantify(vs, g, env, true)?,
            Formula::Exists(vs, g) => self.quantify(vs, g, env, false)?,
        })
    }

    fn quantify(&self, vs: &[String], g: &Formula, env: &mut Vec<(String, usize)>, universal: bool) -> Result<bool> {
        let Some((v, rest)) = vs.split_first() else {
            return self.eval(g, env);
        };
        for x in 0..self.n {
            env.push((v.clone(), x));
            let r = self.quantify(rest, g, env, universal);
            env.pop();
            if r? != universal {
                return Ok(!universal);
            }
        }
        Ok(universal)
    }
}

/// Evaluates a closed formula on raw tables (which need not satisfy the
/// S-poset axioms).
pub fn fo_eval_tables(raw: &RawSPoset, f: &Formula) -> Result<bool> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v));
    }
    let n = raw.leq.len();
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    Model { act: &raw.act, leq: &raw.leq, n }.eval(f, &mut Vec::new())
}

/// Evaluates a closed formula on a left S-poset.
pub fn fo_eval(a: &SPoset, f: &Formula) -> Result<bool> {
    if a.side() != crate::structures::Side::Left {
        return Err(Error::WrongSide { expected: crate::structures::Side::Left, found: a.side() });
    }
    fo_eval_tables(&a.raw(), f)
}
