//! Recursive-descent parser for ordinal, set and model expressions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use spectra_core::{ComplexRational, Direction, ModelError, OperatorModel, Ordinal, Rational, SpecSet, SpectralProfile, Tower};

use crate::lexer::{lex, Pos, Tok, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Validation,
}

impl ErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Syntax => "syntax",
            ErrorKind::Validation => "validation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error at {}: {}", self.kind.name(), self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Ordinal(Ordinal),
    Set(SpecSet),
    Model(OperatorModel),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Ordinal(_) => Sort::Ordinal,
            Value::Set(_) => Sort::Set,
            Value::Model(_) => Sort::Model,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Ordinal(o) => write!(f, "{o}"),
            Value::Set(s) => write!(f, "{s}"),
            Value::Model(m) => write!(f, "{m}"),
        }
    }
}

/// The kind of value an expression denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Ordinal,
    Set,
    Model,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Ordinal => "an ordinal",
            Sort::Set => "a set",
            Sort::Model => "a model",
        })
    }
}

/// Names bound by `let`.
pub type Env = BTreeMap<String, Value>;

const SET_WORDS: [&str; 10] = ["finite", "tower", "seg", "circle", "disk", "union", "shift", "scale", "empty", "acc"];
const MODEL_WORDS: [&str; 7] = ["diag", "explicit", "invertible", "qnil", "dsum", "mshift", "dual"];

/// Result of parsing a program: its bindings and the trailing expression.
#[derive(Debug, Clone, Default)]
pub struct Program {
    pub env: Env,
    pub value: Option<Value>,
}

struct Parser<'e> {
    toks: Vec<Token>,
    i: usize,
    env: &'e Env,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ErrorKind::Syntax,
        pos,
        message: message.into(),
    }
}

fn validation(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ErrorKind::Validation,
        pos,
        message: message.into(),
    }
}

fn model_error(pos: Pos, e: ModelError) -> ParseError {
    let ModelError::Invalid(vs) = e;
    let parts: Vec<String> = vs.iter().map(|v| format!("{v:?}: {v}")).collect();
    validation(pos, parts.join("; "))
}

fn tokens(src: &str) -> Result<Vec<Token>, ParseError> {
    lex(src).map_err(|(pos, c)| syntax(pos, format!("unexpected character '{c}'")))
}

impl<'e> Parser<'e> {
    fn new(src: &str, env: &'e Env) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokens(src)?, i: 0, env })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        syntax(self.pos(), format!("expected {expected}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.pos();
                self.bump();
                Ok((s, p))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn natural(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn small_natural(&mut self) -> Result<u64, ParseError> {
        let p = self.pos();
        let n = self.natural()?;
        n.to_u64().ok_or_else(|| validation(p, "number too large"))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = self.eat(&Tok::Minus);
        let p = self.pos();
        let n = self.natural()?;
        let mut q = Rational::from_integer(n);
        if self.eat(&Tok::Slash) {
            let d = self.natural()?;
            if d.is_zero() {
                return Err(validation(p, "zero denominator"));
            }
            q /= Rational::from_integer(d);
        }
        Ok(if negative { -q } else { q })
    }

    fn is_i(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "i")
    }

    /// `a`, `bi`, `i`, `a+bi`, `a-bi` with optional leading minus.
    fn complex(&mut self) -> Result<ComplexRational, ParseError> {
        let negative = self.eat(&Tok::Minus);
        let sign = |q: Rational| if negative { -q } else { q };
        if self.is_i() {
            self.bump();
            return Ok(ComplexRational::new(Rational::zero(), sign(Rational::one())));
        }
        if !matches!(self.peek(), Tok::Num(_)) {
            return Err(self.unexpected("a complex number"));
        }
        let first = sign(self.rational()?);
        if self.is_i() {
            self.bump();
            return Ok(ComplexRational::new(Rational::zero(), first));
        }
        let im_sign = match (self.peek(), self.peek_at(1)) {
            (Tok::Plus, Tok::Num(_)) | (Tok::Plus, Tok::Ident(_)) => Rational::one(),
            (Tok::Minus, Tok::Num(_)) | (Tok::Minus, Tok::Ident(_)) => -Rational::one(),
            _ => return Ok(ComplexRational::real(first)),
        };
        self.bump();
        let im = if self.is_i() {
            Rational::one()
        } else {
            let q = self.rational()?;
            if !self.is_i() {
                return Err(self.unexpected("'i'"));
            }
            q
        };
        self.bump();
        Ok(ComplexRational::new(first, im_sign * im))
    }

    fn lookup(&self, name: &str, pos: Pos, want: Sort) -> Result<Value, ParseError> {
        let v = self
            .env
            .get(name)
            .ok_or_else(|| syntax(pos, format!("unknown name '{name}'")))?;
        if v.sort() != want {
            return Err(syntax(pos, format!("'{name}' is {}, expected {want}", v.sort())));
        }
        Ok(v.clone())
    }

    fn ordinal_term(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek().clone() {
            Tok::Num(_) => Ok(Ordinal::finite(self.small_natural()?)),
            Tok::Ident(w) if w == "w" => {
                self.bump();
                let exp = if self.eat(&Tok::Caret) {
                    match self.peek() {
                        Tok::LParen => {
                            self.bump();
                            let e = self.ordinal()?;
                            self.expect(Tok::RParen)?;
                            e
                        }
                        Tok::Num(_) => Ordinal::finite(self.small_natural()?),
                        Tok::Ident(s) if s == "w" => {
                            self.bump();
                            Ordinal::omega()
                        }
                        _ => return Err(self.unexpected("an exponent")),
                    }
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat(&Tok::Star) {
                    let p = self.pos();
                    let c = self.small_natural()?;
                    if c == 0 {
                        return Err(validation(p, "coefficient must be positive"));
                    }
                    c
                } else {
                    1
                };
                Ok(Ordinal::monomial(exp, coeff))
            }
            Tok::Ident(name) => {
                let p = self.pos();
                self.bump();
                match self.lookup(&name, p, Sort::Ordinal)? {
                    Value::Ordinal(o) => Ok(o),
                    _ => unreachable!("sort checked"),
                }
            }
            _ => Err(self.unexpected("an ordinal")),
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseError> {
        let mut acc = self.ordinal_term()?;
        while self.eat(&Tok::Plus) {
            acc = acc.add(&self.ordinal_term()?);
        }
        Ok(acc)
    }

    fn set_list(&mut self) -> Result<Vec<SpecSet>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = vec![self.set()?];
        while self.eat(&Tok::Comma) {
            out.push(self.set()?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn set(&mut self) -> Result<SpecSet, ParseError> {
        let (word, p) = self.ident()?;
        match word.as_str() {
            "empty" => Ok(SpecSet::empty()),
            "finite" => {
                self.expect(Tok::LBrace)?;
                let mut pts = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    pts.push(self.complex()?);
                    while self.eat(&Tok::Comma) {
                        pts.push(self.complex()?);
                    }
                    self.expect(Tok::RBrace)?;
                }
                Ok(SpecSet::finite(pts))
            }
            "tower" => self.tower(p),
            "seg" => {
                self.expect(Tok::LParen)?;
                let a = self.complex()?;
                self.expect(Tok::Comma)?;
                let b = self.complex()?;
                self.expect(Tok::RParen)?;
                Ok(SpecSet::segment(a, b))
            }
            "circle" | "disk" => {
                self.expect(Tok::LParen)?;
                let c = self.complex()?;
                self.expect(Tok::Comma)?;
                let r = self.rational()?;
                self.expect(Tok::RParen)?;
                let s = if word == "circle" { SpecSet::circle(c, r) } else { SpecSet::disk(c, r) };
                s.map_err(|e| validation(p, e.to_string()))
            }
            "union" => Ok(SpecSet::union_all(&self.set_list()?)),
            "shift" | "scale" => {
                self.expect(Tok::LParen)?;
                let s = self.set()?;
                self.expect(Tok::Comma)?;
                let out = if word == "shift" {
                    s.translate(&self.complex()?)
                } else {
                    s.scale(&self.rational()?)
                };
                self.expect(Tok::RParen)?;
                Ok(out)
            }
            "acc" => {
                self.expect(Tok::LParen)?;
                let s = self.set()?;
                let alpha = if self.eat(&Tok::Comma) { self.ordinal()? } else { Ordinal::one() };
                self.expect(Tok::RParen)?;
                Ok(s.acc_alpha(&alpha))
            }
            _ if MODEL_WORDS.contains(&word.as_str()) => Err(syntax(p, format!("expected a set, found model '{word}'"))),
            _ => match self.lookup(&word, p, Sort::Set)? {
                Value::Set(s) => Ok(s),
                _ => unreachable!("sort checked"),
            },
        }
    }

    fn tower(&mut self, p: Pos) -> Result<SpecSet, ParseError> {
        self.expect(Tok::LParen)?;
        let mut rank = None;
        let mut anchor = ComplexRational::zero();
        let mut scale = Rational::one();
        let mut dir = Direction::east();
        let mut first = 1u64;
        let mut stage = Ordinal::zero();
        loop {
            let (key, kp) = self.ident()?;
            self.expect(Tok::Eq)?;
            match key.as_str() {
                "rank" => rank = Some(self.ordinal()?),
                "anchor" => anchor = self.complex()?,
                "scale" => scale = self.rational()?,
                "dir" => dir = Direction::from_degrees(&self.rational()?),
                "dirv" => {
                    let vp = self.pos();
                    dir = Direction::from_unit(self.complex()?).ok_or_else(|| validation(vp, "direction vector must have modulus 1"))?;
                }
                "from" => {
                    let fp = self.pos();
                    first = self.small_natural()?;
                    if first == 0 {
                        return Err(validation(fp, "slots are numbered from 1"));
                    }
                }
                "stage" => stage = self.ordinal()?,
                _ => return Err(syntax(kp, format!("unknown tower field '{key}'"))),
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        let rank = rank.ok_or_else(|| syntax(p, "tower needs a rank"))?;
        let t = Tower::new(anchor, dir, scale, rank).from_slot(first).at_stage(stage);
        SpecSet::from_tower(t).map_err(|e| validation(p, e.to_string()))
    }

    fn model(&mut self) -> Result<OperatorModel, ParseError> {
        let (word, p) = self.ident()?;
        match word.as_str() {
            "qnil" => Ok(OperatorModel::Quasinilpotent),
            "diag" | "invertible" => {
                self.expect(Tok::LParen)?;
                let s = self.set()?;
                self.expect(Tok::RParen)?;
                let m = if word == "diag" {
                    OperatorModel::diagonal(s)
                } else {
                    OperatorModel::invertible(s)
                };
                m.map_err(|e| model_error(p, e))
            }
            "explicit" => {
                self.expect(Tok::LParen)?;
                let mut fields: BTreeMap<String, SpecSet> = BTreeMap::new();
                loop {
                    let (key, kp) = self.ident()?;
                    if !["sigma", "e", "b", "d"].contains(&key.as_str()) {
                        return Err(syntax(kp, format!("unknown profile field '{key}'")));
                    }
                    self.expect(Tok::Eq)?;
                    let s = self.set()?;
                    if fields.insert(key.clone(), s).is_some() {
                        return Err(syntax(kp, format!("field '{key}' given twice")));
                    }
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
                let sigma = fields.remove("sigma").ok_or_else(|| syntax(p, "explicit needs sigma"))?;
                let profile = SpectralProfile::explicit(sigma, fields.remove("e"), fields.remove("b"), fields.remove("d"));
                OperatorModel::explicit(profile).map_err(|e| model_error(p, e))
            }
            "dsum" => {
                self.expect(Tok::LParen)?;
                let mut cs = vec![self.model()?];
                while self.eat(&Tok::Comma) {
                    cs.push(self.model()?);
                }
                self.expect(Tok::RParen)?;
                OperatorModel::direct_sum(cs).map_err(|e| model_error(p, e))
            }
            "mshift" => {
                self.expect(Tok::LParen)?;
                let m = self.model()?;
                self.expect(Tok::Comma)?;
                let z = self.complex()?;
                self.expect(Tok::RParen)?;
                Ok(m.shifted(z))
            }
            "dual" => {
                self.expect(Tok::LParen)?;
                let m = self.model()?;
                self.expect(Tok::RParen)?;
                Ok(m.dual())
            }
            _ if SET_WORDS.contains(&word.as_str()) => Err(syntax(p, format!("expected a model, found set '{word}'"))),
            _ => match self.lookup(&word, p, Sort::Model)? {
                Value::Model(m) => Ok(m),
                _ => unreachable!("sort checked"),
            },
        }
    }

    /// The sort an expression starting here denotes.
    fn sort_ahead(&self) -> Result<Sort, ParseError> {
        match self.peek() {
            Tok::Num(_) => Ok(Sort::Ordinal),
            Tok::Ident(w) if w == "w" => Ok(Sort::Ordinal),
            Tok::Ident(w) if SET_WORDS.contains(&w.as_str()) => Ok(Sort::Set),
            Tok::Ident(w) if MODEL_WORDS.contains(&w.as_str()) => Ok(Sort::Model),
            Tok::Ident(w) => self
                .env
                .get(w)
                .map(Value::sort)
                .ok_or_else(|| syntax(self.pos(), format!("unknown name '{w}'"))),
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn value(&mut self, want: Option<Sort>) -> Result<Value, ParseError> {
        let sort = match want {
            Some(s) => s,
            None => self.sort_ahead()?,
        };
        Ok(match sort {
            Sort::Ordinal => Value::Ordinal(self.ordinal()?),
            Sort::Set => Value::Set(self.set()?),
            Sort::Model => Value::Model(self.model()?),
        })
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a single expression of the given sort, or of any sort.
pub fn parse_expression(src: &str, env: &Env, want: Option<Sort>) -> Result<Value, ParseError> {
    let mut p = Parser::new(src, env)?;
    let v = p.value(want)?;
    p.eat(&Tok::Semi);
    p.end()?;
    Ok(v)
}

/// Parses `let NAME = EXPR;` statements optionally followed by one final
/// expression.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut env = Env::new();
    let toks = tokens(src)?;
    let mut i = 0;
    loop {
        let mut p = Parser { toks: toks.clone(), i, env: &env };
        if *p.peek() == Tok::Eof {
            return Ok(Program { env, value: None });
        }
        if matches!(p.peek(), Tok::Ident(s) if s == "let") {
            p.bump();
            let (name, np) = p.ident()?;
            if name == "w" || name == "i" || SET_WORDS.contains(&name.as_str()) || MODEL_WORDS.contains(&name.as_str()) {
                return Err(syntax(np, format!("'{name}' is reserved")));
            }
            p.expect(Tok::Eq)?;
            let v = p.value(None)?;
            p.expect(Tok::Semi)?;
            i = p.i;
            env.insert(name, v);
            continue;
        }
        let v = p.value(None)?;
        p.eat(&Tok::Semi);
        p.end()?;
        return Ok(Program { env, value: Some(v) });
    }
}

pub fn parse_ordinal(src: &str) -> Result<Ordinal, ParseError> {
    match parse_expression(src, &Env::new(), Some(Sort::Ordinal))? {
        Value::Ordinal(o) => Ok(o),
        _ => unreachable!("sort requested"),
    }
}

pub fn parse_complex(src: &str) -> Result<ComplexRational, ParseError> {
    let env = Env::new();
    let mut p = Parser::new(src, &env)?;
    let z = p.complex()?;
    p.end()?;
    Ok(z)
}

pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let env = Env::new();
    let mut p = Parser::new(src, &env)?;
    let q = p.rational()?;
    p.end()?;
    Ok(q)
}
