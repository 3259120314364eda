//! Expression parser for elements and tensors over a root datum's catalog.
//!
//! expr   := ['-'] tterm (('+'|'-') tterm)*
//! tterm  := term ('@' term)*
//! term   := factor (('*'|'.') factor)*
//! factor := base ('^' nat)*
//! base   := rational | 'hbar' | atom | '[' expr ',' expr ']'
//!         | '{' expr ',' expr '}' | '(' expr ')'
//! atom   := ('x+'|'x-'|'h'|'ht') '(' nat ',' nat ')'
//!
//! '.' is accepted as a product so that printed elements parse back. Offsets
//! in syntax errors count characters from 1.

use crate::error::{Error, Result};
use crate::poly::HbarPoly;
use crate::presentations::htilde;
use crate::roots::RootDatum;
use crate::scalar::Scalar;
use crate::superfree::{Element, GeneratorId, TensorElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed<S: Scalar> {
    Element(Element<S>),
    Tensor(TensorElement<S>),
}

impl<S: Scalar> Parsed<S> {
    pub fn into_element(self) -> Result<Element<S>> {
        match self {
            Parsed::Element(e) => Ok(e),
            Parsed::Tensor(_) => Err(Error::Unsupported("expected an element, got a tensor".into())),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Parsed::Element(e) => e.to_string(),
            Parsed::Tensor(t) => t.to_string(),
        }
    }
}

pub fn parse_expression<S: Scalar>(text: &str, rd: &RootDatum) -> Result<Parsed<S>> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, rd };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(&format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(v)
}

pub fn parse_element<S: Scalar>(text: &str, rd: &RootDatum) -> Result<Element<S>> {
    parse_expression(text, rd)?.into_element()
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    rd: &'a RootDatum,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos + 1, message: message.into() }
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

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(&format!("expected {c:?}, found {d:?}"))),
            None => Err(self.error(&format!("expected {c:?} at end of input"))),
        }
    }

    fn nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Syntax { offset: start + 1, message: "number too large".into() })
    }

    /// '@'-products of terms; a single operand stays as it is.
    fn tterm<S: Scalar>(&mut self) -> Result<Parsed<S>> {
        let first = self.term::<S>()?;
        if self.peek() != Some('@') {
            return Ok(first);
        }
        let mut factors = vec![first];
        while self.peek() == Some('@') {
            self.pos += 1;
            factors.push(self.term()?);
        }
        let mut els = Vec::new();
        for f in factors {
            match f {
                Parsed::Element(e) => els.push(e),
                Parsed::Tensor(_) => return Err(self.error("nested tensor product")),
            }
        }
        let refs: Vec<&Element<S>> = els.iter().collect();
        Ok(Parsed::Tensor(TensorElement::tensor(&refs)))
    }

    fn expr<S: Scalar>(&mut self) -> Result<Parsed<S>> {
        let mut negate = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.tterm::<S>()?;
        if negate {
            acc = neg(acc);
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.tterm()?;
                    acc = self.add(acc, t, false)?;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.tterm()?;
                    acc = self.add(acc, t, true)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn add<S: Scalar>(&self, a: Parsed<S>, b: Parsed<S>, minus: bool) -> Result<Parsed<S>> {
        let b = if minus { neg(b) } else { b };
        match (a, b) {
            (Parsed::Element(x), Parsed::Element(y)) => Ok(Parsed::Element(x.add(&y))),
            (Parsed::Tensor(x), Parsed::Tensor(y)) if x.arity == y.arity => Ok(Parsed::Tensor(x.add(&y))),
            (Parsed::Tensor(x), Parsed::Element(y)) | (Parsed::Element(y), Parsed::Tensor(x)) if y.is_zero() => {
                Ok(Parsed::Tensor(x))
            }
            _ => Err(self.error("cannot add an element and a tensor")),
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<Parsed<S>> {
        let mut acc = self.factor::<S>()?;
        while matches!(self.peek(), Some('*') | Some('.')) {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.mul(acc, f)?;
        }
        Ok(acc)
    }

    fn mul<S: Scalar>(&self, a: Parsed<S>, b: Parsed<S>) -> Result<Parsed<S>> {
        match (a, b) {
            (Parsed::Element(x), Parsed::Element(y)) => Ok(Parsed::Element(x.multiply(&y))),
            (Parsed::Element(c), Parsed::Tensor(t)) | (Parsed::Tensor(t), Parsed::Element(c)) => match scalar_part(&c) {
                Some(p) => Ok(Parsed::Tensor(t.scale_poly(&p))),
                None => Err(self.error("only scalars may multiply a tensor")),
            },
            (Parsed::Tensor(x), Parsed::Tensor(y)) if x.arity == y.arity => Ok(Parsed::Tensor(x.multiply(&y))),
            _ => Err(self.error("tensor arity mismatch")),
        }
    }

    fn factor<S: Scalar>(&mut self) -> Result<Parsed<S>> {
        let mut base = self.base::<S>()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let k = self.nat()?;
            base = match base {
                Parsed::Element(e) => Parsed::Element(e.pow(k)),
                Parsed::Tensor(t) => {
                    let mut acc = TensorElement::unit(t.arity);
                    for _ in 0..k {
                        acc = acc.multiply(&t);
                    }
                    Parsed::Tensor(acc)
                }
            };
        }
        Ok(base)
    }

    fn base<S: Scalar>(&mut self) -> Result<Parsed<S>> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        match c {
            '0'..='9' => {
                let num = self.nat()?;
                let mut v = S::from_i64(num as i64);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den = self.nat()?;
                    if den == 0 {
                        return Err(self.error("zero denominator"));
                    }
                    v = v / S::from_i64(den as i64);
                }
                Ok(Parsed::Element(Element::scalar(v)))
            }
            '(' => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            '[' | '{' => {
                self.pos += 1;
                let a = self.expr::<S>()?.into_element().map_err(|_| self.error("brackets take elements"))?;
                self.expect(',')?;
                let b = self.expr::<S>()?.into_element().map_err(|_| self.error("brackets take elements"))?;
                let (close, v) = if c == '[' { (']', a.super_bracket(&b)) } else { ('}', a.anti_bracket(&b)) };
                self.expect(close)?;
                Ok(Parsed::Element(v))
            }
            _ if self.keyword("hbar") => Ok(Parsed::Element(Element::hbar())),
            _ if self.keyword("ht") => {
                let (i, r) = self.indices()?;
                if r != 1 {
                    return Err(self.error("ht is defined at level 1 only"));
                }
                Ok(Parsed::Element(htilde(i)))
            }
            'h' => {
                self.pos += 1;
                let (i, r) = self.indices()?;
                Ok(Parsed::Element(Element::gen(GeneratorId::h(i, r))))
            }
            'x' => {
                self.pos += 1;
                let plus = match self.peek() {
                    Some('+') => true,
                    Some('-') => false,
                    _ => return Err(self.error("expected x+ or x-")),
                };
                self.pos += 1;
                let (i, r) = self.indices()?;
                Ok(Parsed::Element(Element::gen(GeneratorId::x(plus, i, r, self.rd.parity_of(i)))))
            }
            other => Err(self.error(&format!("unexpected {other:?}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let k: Vec<char> = kw.chars().collect();
        if self.chars.len() >= self.pos + k.len() && self.chars[self.pos..self.pos + k.len()] == k[..] {
            self.pos += k.len();
            true
        } else {
            false
        }
    }

    fn indices(&mut self) -> Result<(usize, usize)> {
        self.expect('(')?;
        let start = self.pos;
        let i = self.nat()?;
        self.expect(',')?;
        let r = self.nat()?;
        self.expect(')')?;
        self.rd.check_index(i).map_err(|_| Error::Syntax { offset: start + 1, message: format!("unknown generator index {i}") })?;
        Ok((i, r))
    }
}

fn neg<S: Scalar>(v: Parsed<S>) -> Parsed<S> {
    match v {
        Parsed::Element(e) => Parsed::Element(e.neg()),
        Parsed::Tensor(t) => Parsed::Tensor(t.neg()),
    }
}

/// The coefficient of the empty word when that is the only term.
fn scalar_part<S: Scalar>(e: &Element<S>) -> Option<HbarPoly<S>> {
    let mut it = e.terms();
    match (it.next(), it.next()) {
        (None, _) => Some(HbarPoly::zero()),
        (Some((w, c)), None) if w.is_empty() => Some(c.clone()),
        _ => None,
    }
}
