//! A small expression parser for polynomials in `x_i` (dual) or `e_i`
//! (primal), with an optional parameter `T` substituted by an exact
//! scalar. Used by the pinned matrix displays and the CLI.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::{Alphabet, Monomial, Poly};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Scalar),
    Var(usize),
    Param,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(field: Field, alphabet: Alphabet, s: &str) -> Result<Vec<Tok>> {
    let prefix = alphabet.var_prefix().chars().next().unwrap();
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'T' => {
                out.push(Tok::Param);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(Scalar::parse(field, &text)?));
            }
            c if c == prefix => {
                i += 1;
                // Optional underscore, then digits.
                if i < chars.len() && chars[i] == '_' {
                    i += 1;
                }
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::Parse(format!("variable index expected after {prefix}")));
                }
                let idx: usize = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse("bad variable index".into()))?;
                out.push(Tok::Var(idx));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// Possibly non-homogeneous intermediate value.
#[derive(Debug, Clone)]
struct Value {
    terms: HashMap<Vec<u32>, Scalar>,
}

impl Value {
    fn constant(n: usize, c: Scalar) -> Value {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; n + 1], c);
        }
        Value { terms }
    }

    fn var(n: usize, field: Field, i: usize) -> Value {
        let mut exps = vec![0u32; n + 1];
        exps[i] = 1;
        let mut terms = HashMap::new();
        terms.insert(exps, field.one());
        Value { terms }
    }

    fn add(&self, other: &Value) -> Value {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(|| c.field().zero());
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Value { terms }
    }

    fn neg(&self) -> Value {
        Value { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    fn mul(&self, other: &Value) -> Value {
        let mut terms: HashMap<Vec<u32>, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let v = ca.mul(cb);
                let entry = terms.entry(m).or_insert_with(|| v.field().zero());
                *entry = entry.add(&v);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Value { terms }
    }

    fn pow(&self, e: u32) -> Value {
        let mut acc: Option<Value> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => a.mul(self),
            });
        }
        acc.unwrap_or_else(|| Value { terms: HashMap::new() })
    }
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    n: usize,
    field: Field,
    param: Option<Scalar>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                // Implicit multiplication: `2x0`, `x0x1`, `(1-T)x2`.
                Some(Tok::Var(_)) | Some(Tok::Num(_)) | Some(Tok::LParen) | Some(Tok::Param) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value> {
        let base = match self.next() {
            Some(Tok::Num(c)) => Value::constant(self.n, c),
            Some(Tok::Var(i)) => {
                if i > self.n {
                    return Err(Error::Parse(format!("variable index {i} exceeds n = {}", self.n)));
                }
                Value::var(self.n, self.field, i)
            }
            Some(Tok::Param) => match &self.param {
                Some(t) => Value::constant(self.n, t.clone()),
                None => return Err(Error::Parse("parameter T present but no value given".into())),
            },
            Some(Tok::Minus) => {
                let f = self.factor()?;
                f.neg()
            }
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => v,
                    _ => return Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        };
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(c)) => {
                    let e = c
                        .to_i64()
                        .filter(|&e| (0..=64).contains(&e))
                        .ok_or_else(|| Error::Parse("exponent must be a small integer".into()))?;
                    return Ok(base.pow(e as u32));
                }
                _ => return Err(Error::Parse("exponent expected after ^".into())),
            }
        }
        Ok(base)
    }
}

/// Parses a homogeneous polynomial expression. `param` substitutes `T`.
pub fn parse_poly(
    field: Field,
    alphabet: Alphabet,
    n: usize,
    s: &str,
    param: Option<&Scalar>,
) -> Result<Poly> {
    let toks = lex(field, alphabet, s)?;
    let mut p = Parser { toks: &toks, pos: 0, n, field, param: param.cloned() };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    let degrees: Vec<u32> = v.terms.keys().map(|m| m.iter().sum()).collect();
    if v.terms.is_empty() {
        return Ok(Poly::zero(field, alphabet, n, 0));
    }
    let d = degrees[0];
    if degrees.iter().any(|&x| x != d) {
        return Err(Error::Parse(format!("expression {s:?} is not homogeneous")));
    }
    Poly::from_terms(
        field,
        alphabet,
        n,
        d,
        v.terms.into_iter().map(|(m, c)| (Monomial::new(m), c)),
    )
}

/// Parses a linear form (degree exactly one, or zero).
pub fn parse_linear(
    field: Field,
    n: usize,
    s: &str,
    param: Option<&Scalar>,
) -> Result<Poly> {
    let p = parse_poly(field, Alphabet::Dual, n, s, param)?;
    if !p.is_zero() && p.degree() != 1 {
        return Err(Error::Parse(format!("{s:?} is not a linear form")));
    }
    if p.is_zero() {
        return Ok(Poly::zero(field, Alphabet::Dual, n, 1));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn parses_forms_and_params() {
        let p = parse_poly(q(), Alphabet::Dual, 2, "x0*x1 - x2^2", None).unwrap();
        assert_eq!(p.degree(), 2);
        let t = q().from_i64(5);
        let l = parse_linear(q(), 3, "(1-T)*x3", Some(&t)).unwrap();
        assert_eq!(l.coeff(&Monomial::var(3, 3)), q().from_i64(-4));
        assert!(parse_linear(q(), 3, "x0*x1", None).is_err());
        let zero = parse_linear(q(), 3, "0", None).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn parses_primal_quartic() {
        let f = parse_poly(q(), Alphabet::Primal, 2, "e0^3*e1 + e1^3*e2 + e2^3*e0", None).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.terms().count(), 3);
    }

    #[test]
    fn rejects_inhomogeneous() {
        assert!(parse_poly(q(), Alphabet::Dual, 2, "x0 + x1*x2", None).is_err());
    }
}
