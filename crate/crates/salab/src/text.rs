//! Text syntax for scalars and forms.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := int ['/' int] ['i'] | 'i' | '(' expr ')' | var ['^' int] | dvar ('^' dvar)*
//! var    := 'z'k | 'zb'k | 't'
//! dvar   := 'dz'k | 'dzb'k
//! ```
//!
//! Products of forms are wedge products. The printer emits one term per
//! (basis, monomial) pair in map order, so printing is canonical.

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::form::{Basis, Form};
use crate::scalar::{Mono, Scalar, Var, MAX_DIM};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Slash,
    Star,
    Caret,
    Plus,
    Minus,
    LParen,
    RParen,
    I,
    Var(Var),
    D(Basis),
}

fn perr<T>(col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { col, msg: msg.into() })
}

fn tokenize(s: &str, n: usize) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let col = k + 1;
        if ch.is_whitespace() {
            k += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let st = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let lit: String = chars[st..k].iter().collect();
            out.push((col, Tok::Int(lit.parse().unwrap())));
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let st = k;
            while k < chars.len() && chars[k].is_ascii_alphabetic() {
                k += 1;
            }
            let word: String = chars[st..k].iter().collect();
            let ds = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[ds..k].iter().collect();
            let index = || -> Result<usize> {
                let i: usize = match digits.parse() {
                    Ok(i) => i,
                    Err(_) => return perr(col, format!("'{word}' needs an index")),
                };
                if i == 0 || i > n.min(MAX_DIM) {
                    return perr(col, format!("index {i} out of range 1..={}", n.min(MAX_DIM)));
                }
                Ok(i - 1)
            };
            let tok = match word.as_str() {
                "i" if digits.is_empty() => Tok::I,
                "t" if digits.is_empty() => Tok::Var(Var::T),
                "z" => Tok::Var(Var::Z(index()?)),
                "zb" => Tok::Var(Var::Zb(index()?)),
                "dz" => Tok::D(Basis::new(1 << index()?, 0)),
                "dzb" => Tok::D(Basis::new(0, 1 << index()?)),
                _ => return perr(col, format!("unknown symbol '{word}{digits}'")),
            };
            out.push((col, tok));
            continue;
        }
        let tok = match ch {
            '/' => Tok::Slash,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return perr(col, format!("unexpected character '{ch}'")),
        };
        out.push((col, tok));
        k += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Form> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                neg = true;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if neg { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Form> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.wedge(&self.factor()?);
        }
        Ok(acc)
    }

    fn int(&mut self) -> Result<BigInt> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            _ => perr(col, "expected an integer"),
        }
    }

    fn factor(&mut self) -> Result<Form> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(num)) => {
                let mut r = BigRational::from_integer(num);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    let dcol = self.col();
                    let den = self.int()?;
                    if den.is_zero() {
                        return perr(dcol, "zero denominator");
                    }
                    r /= BigRational::from_integer(den);
                }
                let c = if let Some(Tok::I) = self.peek() {
                    self.pos += 1;
                    Coeff::new(BigRational::zero(), r)
                } else {
                    Coeff::new(r, BigRational::zero())
                };
                Ok(Form::constant(c))
            }
            Some(Tok::I) => Ok(Form::constant(Coeff::i())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let c = self.col();
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => perr(c, "expected ')'"),
                }
            }
            Some(Tok::Var(v)) => {
                let mut e = 1u32;
                if let Some(Tok::Caret) = self.peek() {
                    self.pos += 1;
                    let ecol = self.col();
                    let k = self.int()?;
                    e = match u32::try_from(k) {
                        Ok(k) if k <= 255 => k,
                        _ => return perr(ecol, "exponent out of range"),
                    };
                }
                Ok(Form::scalar(&Scalar::var(v).pow(e)))
            }
            Some(Tok::D(b)) => {
                let mut acc = Form::with_basis(b, &Scalar::one());
                while let Some(Tok::Caret) = self.peek() {
                    self.pos += 1;
                    let c = self.col();
                    match self.next() {
                        Some(Tok::D(b2)) => acc = acc.wedge(&Form::with_basis(b2, &Scalar::one())),
                        _ => return perr(c, "expected dz or dzb after '^'"),
                    }
                }
                Ok(acc)
            }
            Some(_) => perr(col, "unexpected token"),
            None => perr(col, "unexpected end of input"),
        }
    }
}

/// Parse a form; chart indices must lie in 1..=n.
pub fn parse_form(s: &str, n: usize) -> Result<Form> {
    let toks = tokenize(s, n)?;
    let end_col = s.chars().count() + 1;
    if toks.is_empty() {
        return perr(1, "empty expression");
    }
    let mut p = Parser { toks, pos: 0, end_col };
    let f = p.expr()?;
    if p.pos < p.toks.len() {
        return perr(p.col(), "trailing input");
    }
    Ok(f)
}

/// Parse a polynomial (0-form).
pub fn parse_scalar(s: &str, n: usize) -> Result<Scalar> {
    let f = parse_form(s, n)?;
    if !f.has_degree(0) {
        return perr(1, "expected a scalar, found a form of positive degree");
    }
    Ok(f.to_scalar())
}

pub fn parse_coeff(s: &str) -> Result<Coeff> {
    let f = parse_form(s, 0)?;
    match f.to_scalar().as_constant() {
        Some(c) if f.has_degree(0) => Ok(c),
        _ => perr(1, "expected a complex rational constant"),
    }
}

fn rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn mono_str(m: &Mono) -> Vec<String> {
    m.vars()
        .map(|(v, e)| {
            let name = match v {
                Var::Z(i) => format!("z{}", i + 1),
                Var::Zb(i) => format!("zb{}", i + 1),
                Var::T => "t".to_string(),
            };
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect()
}

fn basis_str(b: &Basis) -> Option<String> {
    if b.degree() == 0 {
        return None;
    }
    let parts: Vec<String> = b
        .dz_indices()
        .iter()
        .map(|i| format!("dz{}", i + 1))
        .chain(b.dzb_indices().iter().map(|i| format!("dzb{}", i + 1)))
        .collect();
    Some(parts.join("^"))
}

/// Canonical text of a form.
pub fn print_form(f: &Form) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (b, m, c)) in f.terms().enumerate() {
        let mut factors = mono_str(&m);
        if let Some(bs) = basis_str(&b) {
            factors.push(bs);
        }
        let (re, im) = (c.re(), c.im());
        let (neg, lead) = if im.is_zero() || re.is_zero() {
            let (v, imag) = if im.is_zero() { (&re, false) } else { (&im, true) };
            let mag = v.abs();
            let lead = match (imag, mag.is_one(), factors.is_empty()) {
                (false, true, false) => None,
                (false, _, _) => Some(rat(&mag)),
                (true, true, _) => Some("i".to_string()),
                (true, false, _) => Some(format!("{}i", rat(&mag))),
            };
            (v.is_negative(), lead)
        } else {
            (false, Some(format!("({c})")))
        };
        let mut parts = Vec::new();
        if let Some(l) = lead {
            parts.push(l);
        }
        parts.extend(factors);
        let body = parts.join("*");
        match (idx, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

pub fn print_scalar(s: &Scalar) -> String {
    print_form(&Form::scalar(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let f = parse_form("z1^2*zb1", 2).unwrap();
        assert_eq!(f, Form::scalar(&Scalar::z(0).pow(2).mul(&Scalar::zb(0))));
        let g = parse_form("dz1^dzb2", 2).unwrap();
        assert_eq!(g, Form::dz(0).wedge(&Form::dzb(1)));
        assert_eq!(parse_coeff("3/2+1/3i").unwrap(), Coeff::complex(3, 2, 1, 3));
        let h = parse_form("dzb1*dz1", 1).unwrap();
        assert_eq!(h, Form::dz(0).wedge(&Form::dzb(0)).neg());
    }

    #[test]
    fn canonical_round_trip() {
        for s in ["0", "1", "-i", "3/2*z1^2*zb1", "(3/2+1/3i)*z1*dz1^dzb2 - 2i*dz2", "z1 - zb2*t^2", "-dz1^dz2^dzb1"] {
            let f = parse_form(s, 2).unwrap();
            let p = print_form(&f);
            assert_eq!(parse_form(&p, 2).unwrap(), f, "{s} -> {p}");
            assert_eq!(print_form(&parse_form(&p, 2).unwrap()), p);
        }
    }

    #[test]
    fn errors_carry_columns() {
        match parse_form("z1 + z3", 2) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 6),
            other => panic!("{other:?}"),
        }
        match parse_form("z1 + ", 2) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_form("1/0", 1).is_err());
        assert!(parse_scalar("dz1", 1).is_err());
    }
}
