//! Text syntax for polynomials over F_q.
//!
//! Grammar: sums and differences of products of integers, the field
//! generator `a`, named variables, parenthesized groups and `^` powers.
//! Juxtaposition multiplies, so `2x^2y` and `2*x^2*y` agree.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalars::{Fe, GaloisField};

/// Sparse multivariate polynomial keyed by exponent vectors.
pub type Terms = BTreeMap<Vec<u32>, Fe>;

struct Parser<'a> {
    field: &'a GaloisField,
    vars: &'a [&'a str],
    chars: Vec<char>,
    pos: usize,
}

fn add_terms(f: &GaloisField, a: &Terms, b: &Terms) -> Terms {
    let mut out = a.clone();
    for (k, &v) in b {
        let e = out.entry(k.clone()).or_insert(Fe::ZERO);
        *e = f.add(*e, v);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn mul_terms(f: &GaloisField, a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ka, &va) in a {
        for (kb, &vb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            let e = out.entry(k).or_insert(Fe::ZERO);
            *e = f.add(*e, f.mul(va, vb));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

impl Parser<'_> {
    fn location(&self) -> (usize, usize) {
        let before = &self.chars[..self.pos.min(self.chars.len())];
        let line = before.iter().filter(|&&c| c == '\n').count() + 1;
        let col = before.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        (line, col)
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        let (l, c) = self.location();
        Err(Error::Invalid(format!("line {l}, column {c}: {msg}")))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn constant(&self, c: Fe) -> Terms {
        let mut t = Terms::new();
        if !c.is_zero() {
            t.insert(vec![0; self.vars.len()], c);
        }
        t
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        match s.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.fail("expected an integer")
            }
        }
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut neg = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            neg = true;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = mul_terms(self.field, &acc, &self.constant(self.field.neg(Fe::ONE)));
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = add_terms(self.field, &acc, &t);
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    let m = self.constant(self.field.neg(Fe::ONE));
                    acc = add_terms(self.field, &acc, &mul_terms(self.field, &t, &m));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = mul_terms(self.field, &acc, &f);
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() || c == '_' => {
                    let f = self.power()?;
                    acc = mul_terms(self.field, &acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.number()?;
            let mut r = self.constant(Fe::ONE);
            for _ in 0..k {
                r = mul_terms(self.field, &r, &base);
            }
            return Ok(r);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let c = self.field.from_int((n % self.field.characteristic() as u64) as i64);
                Ok(self.constant(c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    let mut e = vec![0; self.vars.len()];
                    e[i] = 1;
                    let mut t = Terms::new();
                    t.insert(e, Fe::ONE);
                    return Ok(t);
                }
                if name == "a" {
                    return Ok(self.constant(self.field.generator()));
                }
                self.pos = start;
                self.fail(&format!("unknown symbol '{name}'"))
            }
            Some(c) => self.fail(&format!("unexpected '{c}'")),
            None => self.fail("unexpected end of input"),
        }
    }
}

/// Parses a polynomial in the named variables.
pub fn parse_multivariate(field: &GaloisField, s: &str, vars: &[&str]) -> Result<Terms> {
    let mut p = Parser {
        field,
        vars,
        chars: s.chars().collect(),
        pos: 0,
    };
    let t = p.expr()?;
    if p.peek().is_some() {
        return p.fail("trailing input");
    }
    Ok(t)
}

/// Parses a polynomial in one variable.
pub fn parse_univariate(field: &Arc<GaloisField>, s: &str, var: &str) -> Result<Poly> {
    let terms = parse_multivariate(field, s, &[var])?;
    let deg = terms.keys().map(|k| k[0]).max().unwrap_or(0) as usize;
    let mut coeffs = vec![Fe::ZERO; deg + 1];
    for (k, v) in terms {
        coeffs[k[0] as usize] = v;
    }
    Ok(Poly::new(field, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field_of_order;

    #[test]
    fn univariate() {
        let f = field_of_order(2).unwrap();
        let p = parse_univariate(&f, "t^2 + t + 1", "t").unwrap();
        assert_eq!(p.coeffs(), &[Fe(1), Fe(1), Fe(1)]);
        let f3 = field_of_order(3).unwrap();
        let p = parse_univariate(&f3, "-(t - 1)^2", "t").unwrap();
        assert_eq!(p.coeffs(), &[Fe(2), Fe(2), Fe(2)]);
    }

    #[test]
    fn multivariate_and_errors() {
        let f = field_of_order(4).unwrap();
        let t = parse_multivariate(&f, "x*y + a x^2", &["x", "y"]).unwrap();
        assert_eq!(t.get(&vec![1, 1]), Some(&Fe::ONE));
        assert_eq!(t.get(&vec![2, 0]), Some(&f.generator()));
        let err = parse_multivariate(&f, "x +\n  z", &["x"]).unwrap_err();
        assert_eq!(err.to_string(), "invalid input: line 2, column 3: unknown symbol 'z'");
    }
}
