//! Selectors: definable sequences `n ↦ x_n` that pick one element of each
//! `D_n`.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filter::IndexSet;
use crate::numbers::{Poly, QuasiPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sort {
    Vertex,
    Arc,
    Ditip,
}

impl Sort {
    pub fn name(self) -> &'static str {
        match self {
            Sort::Vertex => "vertex",
            Sort::Arc => "arc",
            Sort::Ditip => "ditip",
        }
    }
}

/// Which ditip of the selected arc is meant at each index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarityRule {
    #[serde(rename = "in")]
    In,
    #[serde(rename = "out")]
    Out,
    /// Intip at even indices, outtip at odd ones.
    Alternating,
}

impl PolarityRule {
    pub fn parse(s: &str) -> Option<PolarityRule> {
        match s {
            "in" => Some(PolarityRule::In),
            "out" => Some(PolarityRule::Out),
            "alternating" => Some(PolarityRule::Alternating),
            _ => None,
        }
    }

    /// `{n : the selected ditip is an intip}`.
    pub fn intip_set(self) -> IndexSet {
        match self {
            PolarityRule::In => IndexSet::all(),
            PolarityRule::Out => IndexSet::empty(),
            PolarityRule::Alternating => IndexSet::residue_class(0, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Selector {
    Vertex(QuasiPoly),
    Arc(QuasiPoly),
    Ditip { arc: QuasiPoly, polarity: PolarityRule },
}

impl Selector {
    pub fn sort(&self) -> Sort {
        match self {
            Selector::Vertex(_) => Sort::Vertex,
            Selector::Arc(_) => Sort::Arc,
            Selector::Ditip { .. } => Sort::Ditip,
        }
    }

    /// The label sequence: vertex or arc labels, or the arc of a ditip.
    pub fn labels(&self) -> &QuasiPoly {
        match self {
            Selector::Vertex(q) | Selector::Arc(q) => q,
            Selector::Ditip { arc, .. } => arc,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Selector::Vertex(q) | Selector::Arc(q) => term_json(q),
            Selector::Ditip { arc, polarity } => json!({ "arc": term_json(arc), "polarity": polarity }),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Vertex(q) | Selector::Arc(q) => write!(f, "{q}"),
            Selector::Ditip { arc, polarity } => {
                let p = match polarity {
                    PolarityRule::In => "in",
                    PolarityRule::Out => "out",
                    PolarityRule::Alternating => "alternating",
                };
                write!(f, "{p}({arc})")
            }
        }
    }
}

fn term_json(q: &QuasiPoly) -> Value {
    match q.eventually_constant() {
        Some(c) if q.threshold() == 0 => json!({ "kind": "constant", "value": c as i64 }),
        _ => {
            let mut lit = serde_json::to_value(q).expect("quasi-polynomial serializes");
            lit.as_object_mut().unwrap().insert("kind".into(), json!("quasi_affine"));
            lit
        }
    }
}

/// A parsed selector whose sort is not fixed yet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectorSpec {
    Term(QuasiPoly),
    Ditip { arc: QuasiPoly, polarity: PolarityRule },
}

impl SelectorSpec {
    /// Accepts `{"kind":"constant","value":v}`, `{"kind":"quasi_affine", ...}`,
    /// `{"arc": <selector>, "polarity": "in"|"out"|"alternating"}`, or a
    /// string expression such as `"n"`, `"const:3"`, `"floor(n/2)"`.
    pub fn from_json(value: &Value) -> Result<SelectorSpec> {
        match value {
            Value::String(s) => Ok(SelectorSpec::Term(parse_expression(s)?)),
            Value::Number(_) => {
                let v = value.as_i64().ok_or_else(|| Error::Parse(format!("selector value {value} is not an integer")))?;
                Ok(SelectorSpec::Term(QuasiPoly::constant(v as i128)))
            }
            Value::Object(map) => {
                if let Some(arc) = map.get("arc") {
                    let polarity = map
                        .get("polarity")
                        .and_then(Value::as_str)
                        .and_then(PolarityRule::parse)
                        .ok_or_else(|| Error::Parse("ditip selector needs polarity in|out|alternating".into()))?;
                    return match SelectorSpec::from_json(arc)? {
                        SelectorSpec::Term(arc) => Ok(SelectorSpec::Ditip { arc, polarity }),
                        SelectorSpec::Ditip { .. } => Err(Error::Parse("ditip selector nested in a ditip".into())),
                    };
                }
                match map.get("kind").and_then(Value::as_str) {
                    Some("constant") => {
                        let v = map
                            .get("value")
                            .and_then(Value::as_i64)
                            .ok_or_else(|| Error::Parse("constant selector needs an integer value".into()))?;
                        Ok(SelectorSpec::Term(QuasiPoly::constant(v as i128)))
                    }
                    Some("quasi_affine") => {
                        let mut rest = map.clone();
                        rest.remove("kind");
                        let q: QuasiPoly = serde_json::from_value(Value::Object(rest))?;
                        Ok(SelectorSpec::Term(q))
                    }
                    Some(other) => Err(Error::Parse(format!("unknown selector kind `{other}`"))),
                    None => Err(Error::Parse("selector object needs `kind` or `arc`".into())),
                }
            }
            _ => Err(Error::Parse(format!("cannot read a selector from {value}"))),
        }
    }

    pub fn parse(text: &str) -> Result<SelectorSpec> {
        match serde_json::from_str::<Value>(text) {
            Ok(v) => SelectorSpec::from_json(&v),
            Err(_) => Ok(SelectorSpec::Term(parse_expression(text)?)),
        }
    }

    pub fn into_sort(self, sort: Sort) -> Result<Selector> {
        match (self, sort) {
            (SelectorSpec::Term(q), Sort::Vertex) => Ok(Selector::Vertex(q)),
            (SelectorSpec::Term(q), Sort::Arc) => Ok(Selector::Arc(q)),
            (SelectorSpec::Ditip { arc, polarity }, Sort::Ditip) => Ok(Selector::Ditip { arc, polarity }),
            (SelectorSpec::Term(_), Sort::Ditip) => Err(Error::SortMismatch { expected: "ditip", found: "term" }),
            (SelectorSpec::Ditip { .. }, s) => Err(Error::SortMismatch { expected: s.name(), found: "ditip" }),
        }
    }
}

/// Parses a selector expression over `n`.
///
/// Grammar: sums and differences of products of integers, `n`, `n^k`,
/// parenthesised expressions, `floor(e / k)`, `max(e, e)` and `min(e, e)`.
/// `const:v` is accepted as a synonym for the integer `v`; juxtaposition as
/// in `2n` is multiplication.
pub fn parse_expression(text: &str) -> Result<QuasiPoly> {
    let text = text.trim();
    if let Some(v) = text.strip_prefix("const:") {
        let v: i128 = v.trim().parse().map_err(|_| Error::Parse(format!("bad constant `{v}`")))?;
        return Ok(QuasiPoly::constant(v));
    }
    let mut p = ExprParser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    let q = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(q)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn error(&self, what: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{what} at position {} in `{text}`", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<QuasiPoly> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuasiPoly> {
        let mut acc = self.factor()?;
        loop {
            let implicit = matches!(self.peek(), Some(c) if c == '(' || c.is_ascii_alphabetic());
            if self.eat('*') || implicit {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn integer(&mut self) -> Result<i128> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("number out of range"))
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn factor(&mut self) -> Result<QuasiPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(QuasiPoly::constant(self.integer()?)),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => match self.word().as_str() {
                "n" => {
                    if self.eat('^') {
                        let k = self.integer()?;
                        let mut coeffs = vec![0; k as usize + 1];
                        coeffs[k as usize] = 1;
                        Ok(QuasiPoly::polynomial(Poly::from_ints(&coeffs))?)
                    } else {
                        Ok(QuasiPoly::identity())
                    }
                }
                "floor" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect('/')?;
                    let k = self.integer()?;
                    self.expect(')')?;
                    if k == 0 {
                        return Err(self.error("division by zero"));
                    }
                    Ok(e.floor_div(k))
                }
                f @ ("max" | "min") => {
                    self.expect('(')?;
                    let a = self.expr()?;
                    self.expect(',')?;
                    let b = self.expr()?;
                    self.expect(')')?;
                    Ok(if f == "max" { a.max(&b) } else { a.min(&b) })
                }
                other => Err(self.error(&format!("unknown name `{other}`"))),
            },
            _ => Err(self.error("expected a term")),
        }
    }
}
