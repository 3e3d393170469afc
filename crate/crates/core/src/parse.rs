//! The plain-text polynomial grammar used by the CLI and all reports.
//!
//! Terms are joined by `+`/`-`; a term is `coef*x3^2*T[2,4,5]`. The `T[..]`
//! token lists ascending indices, a coefficient of 1 is omitted, rationals
//! print as `a/b`. Printing uses graded reverse lex, descending, so output
//! is canonical; `parse(format(p)) == p` exactly.

use crate::error::Error;
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::scalar::{self, Scalar};
use crate::vars::{VarId, VariableRegistry};
use crate::IndexSet;
use crate::Result;
use num::bigint::BigInt;
use num::traits::One;
use std::sync::Arc;

pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let order = TermOrder::grevlex();
    let mut terms: Vec<(&Monomial, &Scalar)> = p.terms().collect();
    terms.sort_by(|a, b| order.cmp(b.0, a.0));
    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = scalar::is_negative(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = scalar::abs(c);
        let coeff_part = if mag.is_one() && !m.is_one() {
            None
        } else {
            Some(scalar::format(&mag))
        };
        let mut factors: Vec<String> = Vec::new();
        if let Some(cp) = coeff_part {
            factors.push(cp);
        }
        for &(v, e) in m.exps() {
            let name = p.registry().label(v);
            if e == 1 {
                factors.push(name);
            } else {
                factors.push(format!("{name}^{e}"));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn read_uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are ascii");
        Ok(s.parse::<BigInt>().expect("digits parse"))
    }

    fn read_small_uint(&mut self) -> Result<u32> {
        let n = self.read_uint()?;
        u32::try_from(n).map_err(|_| self.err("index too large"))
    }
}

/// Parses a polynomial in the text grammar against a registry; unknown
/// variables are an error.
pub fn parse_polynomial(registry: &Arc<VariableRegistry>, input: &str) -> Result<Polynomial> {
    let mut lx = Lexer::new(input);
    let mut poly = Polynomial::zero(registry);
    let mut first = true;
    loop {
        lx.skip_ws();
        if lx.pos >= lx.bytes.len() {
            if first {
                return Err(lx.err("empty input"));
            }
            break;
        }
        let mut sign = 1i32;
        match lx.peek() {
            Some(b'+') => {
                lx.bump();
            }
            Some(b'-') => {
                sign = -1;
                lx.bump();
            }
            _ if first => {}
            _ => return Err(lx.err("expected '+' or '-' between terms")),
        }
        let (m, c) = parse_term(&mut lx, registry)?;
        let c = if sign < 0 { -c } else { c };
        poly.add_term(m, c);
        first = false;
    }
    Ok(poly)
}

fn parse_term(lx: &mut Lexer, registry: &Arc<VariableRegistry>) -> Result<(Monomial, Scalar)> {
    let mut coef = scalar::one();
    let mut pairs: Vec<(VarId, u32)> = Vec::new();
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = lx.read_uint()?;
                let den = if lx.peek() == Some(b'/') {
                    lx.bump();
                    let d = lx.read_uint()?;
                    if d == BigInt::from(0) {
                        return Err(lx.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                coef = &coef * Scalar::new(num, den);
            }
            Some(b'x') => {
                lx.bump();
                let i = lx.read_small_uint()?;
                let v = registry.x_var(i)?;
                let e = parse_exponent(lx)?;
                pairs.push((v, e));
            }
            Some(b'T') => {
                lx.bump();
                if lx.bump() != Some(b'[') {
                    return Err(lx.err("expected '[' after T"));
                }
                let mut idx = Vec::new();
                loop {
                    idx.push(lx.read_small_uint()?);
                    match lx.bump() {
                        Some(b',') => continue,
                        Some(b']') => break,
                        _ => return Err(lx.err("expected ',' or ']' in T[..]")),
                    }
                }
                if idx.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(lx.err("T indices must be strictly ascending"));
                }
                // T-sets in a registry share one ambient; recover it from any
                // registered set, falling back to the largest index.
                let ambient = registry
                    .t_sets()
                    .first()
                    .map(|s| s.ambient())
                    .unwrap_or_else(|| idx.last().copied().unwrap_or(0));
                let set = IndexSet::new(ambient, idx.clone())
                    .map_err(|e| lx.err(format!("bad T index set: {e}")))?;
                let v = registry.t_var(&set)?;
                let e = parse_exponent(lx)?;
                pairs.push((v, e));
            }
            _ => return Err(lx.err("expected a coefficient or a variable")),
        }
        if lx.peek() == Some(b'*') {
            lx.bump();
            continue;
        }
        break;
    }
    Ok((Monomial::from_pairs(&pairs), coef))
}

fn parse_exponent(lx: &mut Lexer) -> Result<u32> {
    if lx.peek() == Some(b'^') {
        lx.bump();
        lx.read_small_uint()
    } else {
        Ok(1)
    }
}
