//! Text grammar for [`HoloExpr`].
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' integer)?
//! atom    := number 'i'? | 'i' | 'z' | 'pi' | '(' expr ')'
//!          | 'exp' '(' expr ')'
//!          | 'mobius' '(' const ',' const ',' const ',' const ')'
//! ```
//!
//! Examples: `-z`, `(1-z)*(1+z)`, `1 - z^2`, `mobius(i,i,-1,1)`, `exp(z)`,
//! `1.5i*z`.

use std::str::FromStr;

use super::HoloExpr;
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == 'e' || bytes[i] == 'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == '+' || bytes[j] == '-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = bytes[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| Error::parse(start, format!("bad number '{text}'")))?;
            out.push((start, Tok::Num(v)));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^(),".contains(ch) {
            out.push((i, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(Error::parse(i, format!("unexpected character '{ch}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Op(c)) if c == ch => Ok(()),
            Some(t) => Err(Error::parse(at, format!("expected '{ch}', found {t:?}"))),
            None => Err(Error::parse(at, format!("expected '{ch}', found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<HoloExpr> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.bump();
            let rhs = self.term()?;
            acc = if op == '+' { HoloExpr::sum(acc, rhs) } else { HoloExpr::difference(acc, rhs) };
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<HoloExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = HoloExpr::product(acc, rhs);
                }
                Some(Tok::Op('/')) => {
                    let at = self.offset();
                    self.bump();
                    let rhs = self.unary()?;
                    acc = match (acc.as_constant(), rhs.as_constant()) {
                        (Some(a), Some(b)) if b.norm() > 0.0 => HoloExpr::constant(a / b),
                        _ => HoloExpr::ratio(acc, rhs).map_err(|e| Error::parse(at, e.to_string()))?,
                    };
                }
                _ if self.starts_atom() => {
                    let rhs = self.power()?;
                    acc = HoloExpr::product(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<HoloExpr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.bump();
                Ok(HoloExpr::neg(self.unary()?))
            }
            Some(Tok::Op('+')) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<HoloExpr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 => {
                    return Ok(HoloExpr::powi(base, v as u32));
                }
                _ => return Err(Error::parse(at, "exponent must be an integer in 0..=64")),
            }
        }
        Ok(base)
    }

    fn constant_arg(&mut self) -> Result<C64> {
        let at = self.offset();
        let e = self.expr()?;
        e.as_constant().ok_or_else(|| Error::parse(at, "argument must be a constant"))
    }

    fn atom(&mut self) -> Result<HoloExpr> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => {
                if let Some(Tok::Ident(id)) = self.peek() {
                    if id == "i" {
                        self.bump();
                        return Ok(HoloExpr::constant(C64::new(0.0, v)));
                    }
                }
                Ok(HoloExpr::real(v))
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "z" => Ok(HoloExpr::var()),
                "i" => Ok(HoloExpr::constant(C64::new(0.0, 1.0))),
                "pi" => Ok(HoloExpr::real(std::f64::consts::PI)),
                "exp" => {
                    self.expect('(')?;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    Ok(HoloExpr::compose(HoloExpr::exp(), inner))
                }
                "mobius" => {
                    self.expect('(')?;
                    let a = self.constant_arg()?;
                    self.expect(',')?;
                    let b = self.constant_arg()?;
                    self.expect(',')?;
                    let c = self.constant_arg()?;
                    self.expect(',')?;
                    let d = self.constant_arg()?;
                    self.expect(')')?;
                    HoloExpr::mobius(a, b, c, d).map_err(|e| Error::parse(at, e.to_string()))
                }
                other => Err(Error::parse(at, format!("unknown identifier '{other}'"))),
            },
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => Err(Error::parse(at, format!("unexpected token {t:?}"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

/// Parses the expression grammar described in the module docs.
pub fn parse_expr(src: &str) -> Result<HoloExpr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    Ok(e)
}

impl FromStr for HoloExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}
