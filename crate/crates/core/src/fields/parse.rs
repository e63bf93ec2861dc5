//! Field-spec grammar:
//! `QQ` | `GF(p)` | `<field>(v1,…,vk)` | `<field>[g]/(m(g))` | `<field>^(1/q)`.

use super::{Elem, FieldDescriptor};
use crate::error::{Error, Result};
use crate::poly::{parse_in_ring, PolyRing};

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { pos, msg: msg.into() })
}

/// Offset of the parenthesis closing the one at `open`.
fn matching_paren(s: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, &b) in s.iter().enumerate().skip(open) {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// `parse_field_spec`.
pub fn parse_field_spec(spec: &str) -> Result<FieldDescriptor> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let b = s.as_bytes();
    let (mut field, mut i) = if s.starts_with("QQ") {
        (FieldDescriptor::rationals(), 2)
    } else if s.starts_with("GF(") {
        let Some(close) = s.find(')') else { return syntax(3, "unterminated GF(") };
        let p: u64 = match s[3..close].parse() {
            Ok(p) => p,
            Err(_) => return syntax(3, "expected a prime"),
        };
        (FieldDescriptor::prime(p)?, close + 1)
    } else {
        return syntax(0, "a field spec starts with QQ or GF(p)");
    };
    while i < b.len() {
        match b[i] {
            b'(' => {
                let Some(close) = matching_paren(b, i) else { return syntax(i, "unbalanced '('") };
                for name in s[i + 1..close].split(',') {
                    if name.is_empty() {
                        return syntax(i, "empty transcendental name");
                    }
                    field = field.adjoin_transcendental(name)?;
                }
                i = close + 1;
            }
            b'[' => {
                let Some(close) = s[i..].find(']').map(|c| c + i) else { return syntax(i, "unbalanced '['") };
                let name = &s[i + 1..close];
                if !s[close + 1..].starts_with("/(") {
                    return syntax(close + 1, "expected '/(' after the generator");
                }
                let open = close + 2;
                let Some(end) = matching_paren(b, open) else { return syntax(open, "unbalanced '('") };
                let ring = PolyRing::new(&field, &[name])?;
                let m = parse_in_ring(&s[open + 1..end], &ring).map_err(|e| match e {
                    Error::Syntax { pos, msg } => Error::Syntax { pos: pos + open + 1, msg },
                    other => other,
                })?;
                let deg = m.degree_in(0) as usize;
                let mut coeffs: Vec<Elem> = vec![field.zero(); deg + 1];
                for (e, c) in m.terms() {
                    coeffs[e[0] as usize] = c.clone();
                }
                field = field.adjoin_algebraic(name, &coeffs)?;
                i = end + 1;
            }
            b'^' => {
                if !s[i..].starts_with("^(1/") {
                    return syntax(i, "expected '^(1/q)'");
                }
                let Some(close) = s[i..].find(')').map(|c| c + i) else { return syntax(i, "unbalanced '('") };
                let q: u64 = match s[i + 4..close].parse() {
                    Ok(q) => q,
                    Err(_) => return syntax(i + 4, "expected an integer q"),
                };
                field = field.adjoin_root_layer(q)?;
                i = close + 1;
            }
            _ => return syntax(i, format!("unexpected {:?}", b[i] as char)),
        }
    }
    Ok(field)
}
