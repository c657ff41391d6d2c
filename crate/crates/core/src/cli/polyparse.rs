//! Polynomial expressions in `d` and `x`/`x1..xq`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | name | '(' expr ')'
//! ```
//!
//! `∂`, `λ`, `λ1` and `λ₁` are accepted as spellings of `d`, `x`, `x1`.
//! Numbers are integers or finite decimals; write fractions as `3/2`.
//! Module generator names may appear as atoms when parsing cochain values,
//! in which case the expression must be linear in them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{LcaSpec, ModuleSpec};
use crate::cochain::{Cochain, ModuleValue, RowIndex};
use crate::exactpoly::rational::{as_nonneg_integer, parse_rational};
use crate::exactpoly::{MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Name(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn subscript_digit(c: char) -> Option<char> {
    let d = (c as u32).checked_sub('₀' as u32)?;
    (d < 10).then(|| char::from_digit(d, 10).expect("digit"))
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '∂' || c == '\'' || subscript_digit(c).is_some()
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), col));
            continue;
        }
        if c == '∂' {
            out.push((Tok::Name("d".into()), col));
            i += 1;
            continue;
        }
        if is_name_char(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i]) && chars[i] != '∂' {
                i += 1;
            }
            let name: String = chars[start..i].iter().map(|&c| subscript_digit(c).unwrap_or(c)).collect();
            out.push((Tok::Name(name), col));
            continue;
        }
        return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, col0 + chars.len()));
    Ok(out)
}

/// A value linear in the module generators: key `None` is the scalar part.
type Linear = BTreeMap<Option<usize>, MultiPoly>;

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    arity: usize,
    gens: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, col, msg)
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn scalar(&self, p: MultiPoly) -> Linear {
        let mut m = Linear::new();
        if !p.is_zero() {
            m.insert(None, p);
        }
        m
    }

    fn expr(&mut self) -> Result<Linear, ParseError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            for (k, p) in rhs {
                let e = acc.entry(k).or_insert_with(|| MultiPoly::zero(self.arity));
                e.add_scaled(&p, &Rational::from_integer(sign.into()));
            }
            acc.retain(|_, p| !p.is_zero());
        }
    }

    fn term(&mut self) -> Result<Linear, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let (_, col) = self.bump();
                    let rhs = self.unary()?;
                    acc = self.multiply(acc, rhs, col)?;
                }
                Tok::Slash => {
                    let (_, col) = self.bump();
                    let rhs = self.unary()?;
                    let c = constant_of(&rhs, self.arity)
                        .ok_or_else(|| self.err(col, "division is only allowed by a rational constant"))?;
                    if c.is_zero() {
                        return Err(self.err(col, "division by zero"));
                    }
                    let inv = c.recip();
                    for p in acc.values_mut() {
                        *p = p.scale(&inv);
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn multiply(&self, a: Linear, b: Linear, col: usize) -> Result<Linear, ParseError> {
        let a_gen = a.keys().any(Option::is_some);
        let b_gen = b.keys().any(Option::is_some);
        if a_gen && b_gen {
            return Err(self.err(col, "product of two module generators"));
        }
        let (lin, s) = if a_gen { (a, b) } else { (b, a) };
        let s = s.get(&None).cloned().unwrap_or_else(|| MultiPoly::zero(self.arity));
        let mut out = Linear::new();
        for (k, p) in lin {
            let prod = &p * &s;
            if !prod.is_zero() {
                out.insert(k, prod);
            }
        }
        Ok(out)
    }

    fn unary(&mut self) -> Result<Linear, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let v = self.unary()?;
                Ok(v.into_iter().map(|(k, p)| (k, -p)).collect())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Linear, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, col) = self.bump();
        let (tok, ecol) = self.bump();
        let e = match &tok {
            Tok::Num(s) => parse_rational(s).as_ref().and_then(as_nonneg_integer),
            _ => None,
        }
        .ok_or_else(|| self.err(ecol, format!("expected a non-negative integer exponent, found {tok}")))?;
        if base.keys().any(Option::is_some) {
            return Err(self.err(col, "a module generator cannot be raised to a power"));
        }
        let p = base.get(&None).cloned().unwrap_or_else(|| MultiPoly::zero(self.arity));
        Ok(self.scalar(p.pow(e)))
    }

    fn atom(&mut self) -> Result<Linear, ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num(s) => {
                let c = parse_rational(&s).ok_or_else(|| self.err(col, format!("malformed number `{s}`")))?;
                Ok(self.scalar(MultiPoly::constant(self.arity, c)))
            }
            Tok::Name(name) => self.name(&name, col),
            Tok::Open => {
                let v = self.expr()?;
                let (close, ccol) = self.bump();
                if close != Tok::Close {
                    return Err(self.err(ccol, format!("expected `)`, found {close}")));
                }
                Ok(v)
            }
            other => Err(self.err(col, format!("expected a number, variable or `(`, found {other}"))),
        }
    }

    fn name(&self, name: &str, col: usize) -> Result<Linear, ParseError> {
        if let Some(k) = self.gens.iter().position(|g| *g == name) {
            let mut m = Linear::new();
            m.insert(Some(k), MultiPoly::one(self.arity));
            return Ok(m);
        }
        if name == "d" {
            return Ok(self.scalar(MultiPoly::partial(self.arity)));
        }
        let rest = name.strip_prefix('x').or_else(|| name.strip_prefix('λ'));
        if let Some(rest) = rest {
            if rest.is_empty() {
                if self.arity == 1 {
                    return Ok(self.scalar(MultiPoly::lambda(1, 0)));
                }
                return Err(self.err(
                    col,
                    format!("`{name}` is only available with one λ-variable; use {name}1..{name}{}", self.arity),
                ));
            }
            if let Ok(i) = rest.parse::<usize>() {
                if (1..=self.arity).contains(&i) {
                    return Ok(self.scalar(MultiPoly::lambda(self.arity, i - 1)));
                }
                return Err(self.err(col, format!("variable `{name}` out of range (arity {})", self.arity)));
            }
        }
        if matches!(name, "sqrt" | "pi" | "e" | "i" | "I") {
            return Err(self.err(col, format!("non-rational coefficient `{name}`")));
        }
        Err(self.err(col, format!("unknown name `{name}`")))
    }
}

fn constant_of(v: &Linear, arity: usize) -> Option<Rational> {
    if v.keys().any(Option::is_some) {
        return None;
    }
    let p = v.get(&None).cloned().unwrap_or_else(|| MultiPoly::zero(arity));
    if p.terms().all(|(m, _)| m.total_degree() == 0) {
        Some(p.coefficient(&crate::exactpoly::Monomial::one(arity)))
    } else {
        None
    }
}

fn parse_linear(
    text: &str,
    arity: usize,
    gens: &[&str],
    line: usize,
    col0: usize,
) -> Result<Linear, ParseError> {
    let toks = tokenize(text, line, col0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        arity,
        gens,
    };
    if *p.peek() == Tok::End {
        return Err(p.err(p.col(), "empty expression"));
    }
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        let (t, col) = p.bump();
        return Err(p.err(col, format!("unexpected {t}")));
    }
    Ok(v)
}

/// Parses a polynomial in `∂` and `arity` λ-variables, located at
/// `line`/`col0` for diagnostics.
pub fn parse_poly_at(text: &str, arity: usize, line: usize, col0: usize) -> Result<MultiPoly, ParseError> {
    let v = parse_linear(text, arity, &[], line, col0)?;
    Ok(v.get(&None).cloned().unwrap_or_else(|| MultiPoly::zero(arity)))
}

pub fn parse_poly(text: &str, arity: usize) -> Result<MultiPoly, ParseError> {
    parse_poly_at(text, arity, 1, 1)
}

/// Parses an expression linear in the named module generators, such as
/// `H*(x1 - x2) + 2*L`, into one polynomial per generator.
pub fn parse_module_value(
    text: &str,
    arity: usize,
    gens: &[&str],
    line: usize,
    col0: usize,
) -> Result<ModuleValue, ParseError> {
    let v = parse_linear(text, arity, gens, line, col0)?;
    if let Some(p) = v.get(&None) {
        return Err(ParseError::new(
            line,
            col0,
            format!("term `{p}` is not attached to a module generator"),
        ));
    }
    let comps = (0..gens.len())
        .map(|k| v.get(&Some(k)).cloned().unwrap_or_else(|| MultiPoly::zero(arity)))
        .collect();
    Ok(ModuleValue::new(comps))
}

/// Parses a cochain written row by row, e.g. `L⊗H ↦ H; L⊗L ↦ H*(x1 - x2)`.
///
/// Rows are separated by `;` or newlines, generators by `⊗` or `,`, and
/// `->` may replace `↦`. Generators in a row must appear in declared
/// order; rows not mentioned are zero. A 0-cochain is just a module
/// element, such as `M`.
pub fn parse_cochain(text: &str, alg: &LcaSpec, module: &ModuleSpec) -> Result<Cochain, ParseError> {
    let mgens: Vec<&str> = (0..module.rank()).map(|k| module.generator_name(k)).collect();
    let pieces: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .flat_map(|(l, s)| s.split(';').map(move |p| (l + 1, p)))
        .filter(|(_, p)| !p.trim().is_empty())
        .collect();
    if pieces.is_empty() {
        return Err(ParseError::new(1, 1, "empty cochain"));
    }
    let mut out: Option<Cochain> = None;
    for (line, piece) in pieces {
        let (lhs, rhs) = match piece.split_once('↦').or_else(|| piece.split_once("->")) {
            Some((l, r)) => (Some(l), r),
            None => (None, piece),
        };
        let gens: Vec<usize> = match lhs {
            None => Vec::new(),
            Some(l) => l
                .split(['⊗', ','])
                .map(|g| {
                    let g = g.trim();
                    alg.index_of(g)
                        .ok_or_else(|| ParseError::new(line, 1, format!("unknown generator `{g}`")))
                })
                .collect::<Result<_, _>>()?,
        };
        if gens.windows(2).any(|w| w[0] > w[1]) {
            return Err(ParseError::new(
                line,
                1,
                "write the generators of a row in declared order",
            ));
        }
        let q = gens.len();
        let col0 = piece.chars().count() - rhs.chars().count() + 1;
        let value = parse_module_value(rhs, q, &mgens, line, col0)?;
        let c = out.get_or_insert_with(|| Cochain::zero_for(alg, module, q));
        if c.degree() != q {
            return Err(ParseError::new(line, 1, "rows of different degrees"));
        }
        let row = RowIndex::from_generators(alg.rank(), &gens);
        if c.get(&row).is_some() {
            return Err(ParseError::new(line, 1, "row given twice"));
        }
        c.set(row, value);
    }
    Ok(out.expect("nonempty"))
}
