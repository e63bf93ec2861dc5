//! Recursive-descent parser for the polynomial grammar:
//! `+ - * / ^`, integer exponents, names `[a-z][a-z0-9]*`, integer literals.
//! Names resolve to ring variables first, then to field generators.
//! Division is only allowed by nonzero constants.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{Poly, PolyRing};
use crate::error::{Error, Result};
use crate::fields::FieldDescriptor;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(text[start..i].parse().unwrap())));
        } else if c.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a Arc<PolyRing>,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
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

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .ok_or(Error::Syntax { pos: at, msg: "division by a non-constant".into() })?;
                acc = acc.div_const(&c).ok_or(Error::Syntax { pos: at, msg: "division by zero".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Syntax { pos: self.offset(), msg: "exponent too large".into() })?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let k = self.ring.field();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.ring, k.from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                if let Some(p) = Poly::var_named(self.ring, &name) {
                    self.pos += 1;
                    Ok(p)
                } else if let Some(g) = k.generator(&name) {
                    self.pos += 1;
                    Ok(Poly::constant(self.ring, g))
                } else {
                    Err(Error::UnknownIdentifier(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as an element of `ring`.
pub fn parse_in_ring(text: &str, ring: &Arc<PolyRing>) -> Result<Poly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = Parser { toks, pos: 0, ring, end: text.len() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// `parse_poly`: parses `text` over `field` in the given variables.
pub fn parse_poly(text: &str, vars: &[impl AsRef<str>], field: &FieldDescriptor) -> Result<Poly> {
    let ring = PolyRing::new(field, vars)?;
    parse_in_ring(text, &ring)
}

/// Names in `text` that are neither field generators nor numbers, in order of
/// first appearance.
pub fn identifiers(text: &str, field: &FieldDescriptor) -> Result<Vec<String>> {
    let gens = field.generator_names();
    let mut out: Vec<String> = Vec::new();
    for (_, t) in tokenize(text)? {
        if let Tok::Ident(name) = t {
            if !gens.contains(&name.as_str()) && !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}
