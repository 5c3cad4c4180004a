//! Text grammar for polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := '-' factor | atom ['^' uint]
//! atom   := number ['i'] | 'i' | 'z' [uint] | '(' expr ')'
//! ```
//!
//! Variables are `z1 … zn` (bare `z` means `z1`). The formatter writes every
//! coefficient with the shortest decimal that round-trips, so
//! `parse(format(f)) == f` bit for bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use super::{MultiIndex, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::{ci, creal, Real};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Imag,
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'i' | b'I' => out.push((start, Tok::Imag)),
            b'z' | b'Z' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let idx = if i == start + 1 {
                    1
                } else {
                    src[start + 1..i]
                        .parse::<usize>()
                        .map_err(|_| syntax(start, "bad variable index"))?
                };
                if idx == 0 {
                    return Err(syntax(start, "variables are numbered from z1"));
                }
                out.push((start, Tok::Var(idx)));
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                out.push((start, Tok::Num(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, T: Real> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    nvars: usize,
    _t: std::marker::PhantomData<T>,
}

impl<T: Real> Parser<'_, T> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Polynomial<T>> {
        let mut acc = match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<T>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Num(_) | Tok::Imag | Tok::Var(_) | Tok::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial<T>> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.here();
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(s))) => {
                    let e: u32 = s.parse().map_err(|_| syntax(at, "exponent must be a nonnegative integer"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(syntax(at, "expected exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<T>> {
        let at = self.here();
        let Some((_, tok)) = self.toks.get(self.pos) else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(s) => {
                let x: T = s.parse().map_err(|_| syntax(at, format!("bad number '{s}'")))?;
                if let Some(Tok::Imag) = self.peek() {
                    self.pos += 1;
                    Ok(Polynomial::constant(self.nvars, Complex::new(T::zero(), x)))
                } else {
                    Ok(Polynomial::constant(self.nvars, creal(x)))
                }
            }
            Tok::Imag => Ok(Polynomial::constant(self.nvars, ci())),
            Tok::Var(k) => Ok(Polynomial::var(self.nvars, k - 1)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(syntax(self.here(), "expected ')'")),
                }
            }
            other => Err(syntax(at, format!("unexpected token {other:?}"))),
        }
    }
}

impl<T: Real> Polynomial<T> {
    /// Parses `text`; the variable count is the largest index mentioned, or
    /// `nvars` when given (which must not be smaller).
    pub fn parse(text: &str, nvars: Option<usize>) -> Result<Self> {
        let toks = tokenize(text)?;
        let used = toks
            .iter()
            .filter_map(|(_, t)| match t {
                Tok::Var(k) => Some(*k),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let n = match nvars {
            Some(n) if n < used => {
                return Err(Error::InvalidArgument(format!(
                    "text mentions z{used} but nvars = {n}"
                )))
            }
            Some(n) => n,
            None => used.max(1),
        };
        let mut p = Parser::<T> {
            toks: &toks,
            pos: 0,
            end: text.len(),
            nvars: n,
            _t: std::marker::PhantomData,
        };
        let f = p.expr()?;
        if p.pos != toks.len() {
            return Err(syntax(p.here(), "trailing input"));
        }
        Ok(f)
    }

    /// Canonical text form; same as `Display`.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl<T: Real> FromStr for Polynomial<T> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse(s, None)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, alpha: &MultiIndex) -> fmt::Result {
    let mut first = true;
    for (i, &e) in alpha.as_slice().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "z{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl<T: Real> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (alpha, c)) in self.terms().enumerate() {
            let constant = alpha.total() == 0;
            if c.im == T::zero() {
                let neg = c.re.is_sign_negative();
                let mag = c.re.abs();
                match (k, neg) {
                    (0, true) => f.write_str("-")?,
                    (0, false) => {}
                    (_, true) => f.write_str(" - ")?,
                    (_, false) => f.write_str(" + ")?,
                }
                if constant {
                    write!(f, "{mag}")?;
                } else if mag == T::one() {
                    write_monomial(f, alpha)?;
                } else {
                    write!(f, "{mag}*")?;
                    write_monomial(f, alpha)?;
                }
            } else {
                if k > 0 {
                    f.write_str(" + ")?;
                }
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", c.re, sign, c.im.abs())?;
                if !constant {
                    f.write_str("*")?;
                    write_monomial(f, alpha)?;
                }
            }
        }
        Ok(())
    }
}
