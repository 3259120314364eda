//! The free associative superalgebra over Q[hbar] on Yangian generators,
//! its tensor powers, super brackets and generator substitution.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::HbarPoly;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    Xplus,
    Xminus,
    H,
    Htilde,
}

/// A generator letter. Parity is carried along but is determined by the
/// kind and the root it belongs to, so ordering by (kind, root, level) is
/// total on generators of one datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub kind: GenKind,
    pub root_index: u16,
    pub level: u16,
    pub parity: u8,
}

impl GeneratorId {
    pub fn new(kind: GenKind, root_index: usize, level: usize, parity: u8) -> Self {
        let parity = match kind {
            GenKind::H | GenKind::Htilde => 0,
            _ => parity,
        };
        GeneratorId { kind, root_index: root_index as u16, level: level as u16, parity }
    }
    pub fn xp(i: usize, r: usize, parity: u8) -> Self {
        Self::new(GenKind::Xplus, i, r, parity)
    }
    pub fn xm(i: usize, r: usize, parity: u8) -> Self {
        Self::new(GenKind::Xminus, i, r, parity)
    }
    pub fn x(plus: bool, i: usize, r: usize, parity: u8) -> Self {
        if plus {
            Self::xp(i, r, parity)
        } else {
            Self::xm(i, r, parity)
        }
    }
    pub fn h(i: usize, r: usize) -> Self {
        Self::new(GenKind::H, i, r, 0)
    }
    pub fn ht(i: usize, r: usize) -> Self {
        Self::new(GenKind::Htilde, i, r, 0)
    }
    pub fn index(&self) -> usize {
        self.root_index as usize
    }
    pub fn lvl(&self) -> usize {
        self.level as usize
    }
    pub fn is_x(&self) -> bool {
        matches!(self.kind, GenKind::Xplus | GenKind::Xminus)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GenKind::Xplus => "x+",
            GenKind::Xminus => "x-",
            GenKind::H => "h",
            GenKind::Htilde => "ht",
        };
        write!(f, "{k}({},{})", self.root_index, self.level)
    }
}

/// A monomial. Ordered graded-lexicographically: shorter words first, then
/// letter by letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<GeneratorId>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }
    pub fn letter(g: GeneratorId) -> Self {
        Word(vec![g])
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn parity(&self) -> u8 {
        self.0.iter().fold(0, |p, g| p ^ g.parity)
    }
    /// Total generator level; hbar carries degree one in the same grading.
    pub fn level(&self) -> usize {
        self.0.iter().map(|g| g.lvl()).sum()
    }
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Finite Q[hbar]-combination of words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element<S: Scalar> {
    terms: BTreeMap<Word, HbarPoly<S>>,
}

impl<S: Scalar> Default for Element<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty(), HbarPoly::one())
    }

    pub fn scalar(v: S) -> Self {
        Self::from_word(Word::empty(), HbarPoly::constant(v))
    }

    pub fn hbar() -> Self {
        Self::from_word(Word::empty(), HbarPoly::hbar())
    }

    pub fn gen(g: GeneratorId) -> Self {
        Self::from_word(Word::letter(g), HbarPoly::one())
    }

    pub fn from_word(w: Word, c: HbarPoly<S>) -> Self {
        let mut e = Self::zero();
        e.add_term(w, &c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, HbarPoly<S>)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, &c);
        }
        e
    }

    pub fn add_term(&mut self, w: Word, c: &HbarPoly<S>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                existing.add_assign_ref(c);
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &HbarPoly<S>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> HbarPoly<S> {
        self.terms.get(w).cloned().unwrap_or_else(HbarPoly::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Element { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, v: &S) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        Element { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.scale(v))).collect() }
    }

    pub fn scale_poly(&self, p: &HbarPoly<S>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &(c * p));
        }
        out
    }

    pub fn mul_hbar(&self) -> Self {
        Element { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.shift(1))).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.multiply(self);
        }
        acc
    }

    /// Splits into (even part, odd part).
    pub fn parity_parts(&self) -> (Self, Self) {
        let mut even = Self::zero();
        let mut odd = Self::zero();
        for (w, c) in &self.terms {
            if w.parity() == 0 {
                even.terms.insert(w.clone(), c.clone());
            } else {
                odd.terms.insert(w.clone(), c.clone());
            }
        }
        (even, odd)
    }

    /// Parity when homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<u8> {
        let mut ps = self.terms.keys().map(|w| w.parity());
        match ps.next() {
            None => Some(0),
            Some(p) => ps.all(|q| q == p).then_some(p),
        }
    }

    /// ab - (-1)^{p(a)p(b)} ba, extended bilinearly over parity components.
    pub fn super_bracket(&self, other: &Self) -> Self {
        self.graded_bracket(other, true)
    }

    /// ab + (-1)^{p(a)p(b)} ba, extended bilinearly over parity components.
    pub fn anti_bracket(&self, other: &Self) -> Self {
        self.graded_bracket(other, false)
    }

    fn graded_bracket(&self, other: &Self, commutator: bool) -> Self {
        let mut out = Self::zero();
        let (a0, a1) = self.parity_parts();
        let (b0, b1) = other.parity_parts();
        for (pa, a) in [(0u8, &a0), (1, &a1)] {
            for (pb, b) in [(0u8, &b0), (1, &b1)] {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let ab = a.multiply(b);
                let ba = b.multiply(a);
                let sign_odd = pa * pb == 1;
                // commutator: ab - (-1)^{pp} ba; anti: ab + (-1)^{pp} ba
                let subtract = commutator != sign_odd;
                out.add_assign(&ab);
                if subtract {
                    out.add_assign(&ba.neg());
                } else {
                    out.add_assign(&ba);
                }
            }
        }
        out
    }

    /// k-fold iterated bracket [a,[a,...[a,b]]].
    pub fn ad_pow(&self, k: i64, b: &Self) -> Result<Self> {
        if k < 0 {
            return Err(Error::NegativeExponent(k));
        }
        let mut acc = b.clone();
        for _ in 0..k {
            acc = self.super_bracket(&acc);
        }
        Ok(acc)
    }

    pub fn generators(&self) -> BTreeSet<GeneratorId> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn has_hbar(&self) -> bool {
        self.terms.values().any(|c| c.has_hbar())
    }

    /// Degree in the grading deg(hbar) = 1, deg(generator) = level, when
    /// homogeneous.
    pub fn loop_degree(&self) -> Option<usize> {
        let mut degs = BTreeSet::new();
        for (w, c) in &self.terms {
            for (k, v) in c.coeffs().iter().enumerate() {
                if !v.is_zero() {
                    degs.insert(w.level() + k);
                }
            }
        }
        match degs.len() {
            0 => Some(0),
            1 => degs.into_iter().next(),
            _ => None,
        }
    }

    /// Applies an algebra map given on generators.
    pub fn substitute(&self, map: &GeneratorMap<S>) -> Result<Self> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Self::one();
            for g in &w.0 {
                let img = map.image(g)?;
                acc = acc.multiply(img);
            }
            out.add_assign(&acc.scale_poly(c));
        }
        Ok(out)
    }

    /// Applies a map into the tensor square (or cube) given on generators,
    /// multiplying images with the super sign rule.
    pub fn substitute_tensor(&self, arity: usize, image: &dyn Fn(&GeneratorId) -> Result<TensorElement<S>>) -> Result<TensorElement<S>> {
        let mut out = TensorElement::zero(arity);
        let mut cache: BTreeMap<GeneratorId, TensorElement<S>> = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut acc = TensorElement::unit(arity);
            for g in &w.0 {
                if !cache.contains_key(g) {
                    let img = image(g)?;
                    if img.arity != arity {
                        return Err(Error::ArityMismatch);
                    }
                    cache.insert(*g, img);
                }
                acc = acc.multiply(&cache[g]);
            }
            out.add_assign(&acc.scale_poly(c));
        }
        Ok(out)
    }

    /// Replaces hbar by a scalar.
    pub fn eval_hbar(&self, at: &S) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &HbarPoly::constant(c.eval(at)));
        }
        out
    }

    /// Components of fixed loop degree (see `loop_degree`).
    pub fn loop_components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            for (k, v) in c.coeffs().iter().enumerate() {
                if !v.is_zero() {
                    out.entry(w.level() + k)
                        .or_default()
                        .add_term(w.clone(), &HbarPoly::monomial(v.clone(), k));
                }
            }
        }
        out
    }

    /// Divides every coefficient by hbar^k when possible.
    pub fn div_hbar(&self, k: usize) -> Option<Self> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &c.unshift(k)?);
        }
        Some(out)
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let (neg, prefix) = c.term_prefix();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (prefix.is_empty(), w.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{w}")?,
                (false, true) => write!(f, "{prefix}")?,
                (false, false) => write!(f, "{prefix}*{w}")?,
            }
        }
        Ok(())
    }
}

/// Finite combination of pairs or triples of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElement<S: Scalar> {
    pub arity: usize,
    terms: BTreeMap<Vec<Word>, HbarPoly<S>>,
}

/// Sign for (a_1 x ... x a_k)(b_1 x ... x b_k): every b_i moves past a_j
/// for j > i.
fn tensor_sign(a: &[Word], b: &[Word]) -> bool {
    let mut s = 0u8;
    for i in 0..b.len() {
        let pb = b[i].parity();
        if pb == 0 {
            continue;
        }
        for aj in &a[i + 1..] {
            s ^= aj.parity() & pb;
        }
    }
    s == 1
}

impl<S: Scalar> TensorElement<S> {
    pub fn zero(arity: usize) -> Self {
        TensorElement { arity, terms: BTreeMap::new() }
    }

    pub fn unit(arity: usize) -> Self {
        let mut t = Self::zero(arity);
        t.add_term(vec![Word::empty(); arity], &HbarPoly::one());
        t
    }

    pub fn add_term(&mut self, ws: Vec<Word>, c: &HbarPoly<S>) {
        debug_assert_eq!(ws.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&ws) {
            Some(existing) => {
                existing.add_assign_ref(c);
                if existing.is_zero() {
                    self.terms.remove(&ws);
                }
            }
            None => {
                self.terms.insert(ws, c.clone());
            }
        }
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<Word>, HbarPoly<S>)>) -> Self {
        let mut t = Self::zero(arity);
        for (ws, c) in terms {
            t.add_term(ws, &c);
        }
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &HbarPoly<S>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, ws: &[Word]) -> HbarPoly<S> {
        self.terms.get(ws).cloned().unwrap_or_else(HbarPoly::zero)
    }

    /// Tensor product of elements, one per factor.
    pub fn tensor(factors: &[&Element<S>]) -> Self {
        let mut acc: Vec<(Vec<Word>, HbarPoly<S>)> = vec![(Vec::new(), HbarPoly::one())];
        for e in factors {
            let mut next = Vec::new();
            for (ws, c) in &acc {
                for (w, d) in e.terms() {
                    let mut v = ws.clone();
                    v.push(w.clone());
                    next.push((v, c * d));
                }
            }
            acc = next;
        }
        Self::from_terms(factors.len(), acc)
    }

    /// a x 1 + 1 x a (arity 2).
    pub fn boxed(a: &Element<S>) -> Self {
        let one = Element::one();
        Self::tensor(&[a, &one]).add(&Self::tensor(&[&one, a]))
    }

    /// The element a placed in factor `slot`, units elsewhere.
    pub fn placed(a: &Element<S>, slot: usize, arity: usize) -> Self {
        let one = Element::one();
        let factors: Vec<&Element<S>> = (0..arity).map(|k| if k == slot { a } else { &one }).collect();
        Self::tensor(&factors)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        for (ws, c) in &other.terms {
            self.add_term(ws.clone(), c);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TensorElement { arity: self.arity, terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, v: &S) -> Self {
        if v.is_zero() {
            return Self::zero(self.arity);
        }
        TensorElement { arity: self.arity, terms: self.terms.iter().map(|(w, c)| (w.clone(), c.scale(v))).collect() }
    }

    pub fn scale_poly(&self, p: &HbarPoly<S>) -> Self {
        let mut out = Self::zero(self.arity);
        for (ws, c) in &self.terms {
            out.add_term(ws.clone(), &(c * p));
        }
        out
    }

    pub fn mul_hbar(&self) -> Self {
        TensorElement { arity: self.arity, terms: self.terms.iter().map(|(w, c)| (w.clone(), c.shift(1))).collect() }
    }

    pub fn div_hbar(&self, k: usize) -> Option<Self> {
        let mut out = Self::zero(self.arity);
        for (ws, c) in &self.terms {
            out.add_term(ws.clone(), &c.unshift(k)?);
        }
        Some(out)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        let mut out = Self::zero(self.arity);
        for (a, c1) in &self.terms {
            for (b, c2) in &other.terms {
                let ws: Vec<Word> = a.iter().zip(b).map(|(x, y)| x.concat(y)).collect();
                let c = c1 * c2;
                if tensor_sign(a, b) {
                    out.add_term(ws, &-&c);
                } else {
                    out.add_term(ws, &c);
                }
            }
        }
        out
    }

    pub fn parity_parts(&self) -> (Self, Self) {
        let mut even = Self::zero(self.arity);
        let mut odd = Self::zero(self.arity);
        for (ws, c) in &self.terms {
            let p = ws.iter().fold(0, |p, w| p ^ w.parity());
            if p == 0 {
                even.terms.insert(ws.clone(), c.clone());
            } else {
                odd.terms.insert(ws.clone(), c.clone());
            }
        }
        (even, odd)
    }

    pub fn super_bracket(&self, other: &Self) -> Self {
        self.graded_bracket(other, true)
    }

    pub fn anti_bracket(&self, other: &Self) -> Self {
        self.graded_bracket(other, false)
    }

    fn graded_bracket(&self, other: &Self, commutator: bool) -> Self {
        let mut out = Self::zero(self.arity);
        let (a0, a1) = self.parity_parts();
        let (b0, b1) = other.parity_parts();
        for (pa, a) in [(0u8, &a0), (1, &a1)] {
            for (pb, b) in [(0u8, &b0), (1, &b1)] {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let ab = a.multiply(b);
                let ba = b.multiply(a);
                let subtract = commutator != (pa * pb == 1);
                out.add_assign(&ab);
                if subtract {
                    out.add_assign(&ba.neg());
                } else {
                    out.add_assign(&ba);
                }
            }
        }
        out
    }

    /// sigma(a x b) = (-1)^{p(a)p(b)} b x a.
    pub fn flip(&self) -> Self {
        assert_eq!(self.arity, 2, "flip needs arity 2");
        let mut out = Self::zero(2);
        for (ws, c) in &self.terms {
            let swapped = vec![ws[1].clone(), ws[0].clone()];
            if ws[0].parity() & ws[1].parity() == 1 {
                out.add_term(swapped, &-c);
            } else {
                out.add_term(swapped, c);
            }
        }
        out
    }

    /// Applies an even algebra map to every factor.
    pub fn map_factors(&self, map: &GeneratorMap<S>) -> Result<Self> {
        let mut out = Self::zero(self.arity);
        let mut cache: BTreeMap<Word, Element<S>> = BTreeMap::new();
        for (ws, c) in &self.terms {
            for w in ws {
                if !cache.contains_key(w) {
                    let e = Element::from_word(w.clone(), HbarPoly::one()).substitute(map)?;
                    cache.insert(w.clone(), e);
                }
            }
            let images: Vec<&Element<S>> = ws.iter().map(|w| &cache[w]).collect();
            out.add_assign(&Self::tensor(&images).scale_poly(c));
        }
        Ok(out)
    }

    /// Replaces factor `slot` by the image of a map into a tensor square,
    /// raising the arity by one. The map must be even.
    pub fn expand_factor(&self, slot: usize, image: &dyn Fn(&Element<S>) -> Result<TensorElement<S>>) -> Result<Self> {
        let mut out = Self::zero(self.arity + 1);
        for (ws, c) in &self.terms {
            let img = image(&Element::from_word(ws[slot].clone(), HbarPoly::one()))?;
            if img.arity != 2 {
                return Err(Error::ArityMismatch);
            }
            for (pair, d) in img.terms() {
                let mut v = Vec::with_capacity(self.arity + 1);
                v.extend_from_slice(&ws[..slot]);
                v.extend_from_slice(pair);
                v.extend_from_slice(&ws[slot + 1..]);
                out.add_term(v, &(c * d));
            }
        }
        Ok(out)
    }

    /// Applies a linear functional with scalar values to factor `slot`.
    pub fn contract_factor(&self, slot: usize, f: &dyn Fn(&Word) -> HbarPoly<S>) -> Self {
        let mut out = Self::zero(self.arity - 1);
        for (ws, c) in &self.terms {
            let v = f(&ws[slot]);
            if v.is_zero() {
                continue;
            }
            let mut rest = ws.clone();
            rest.remove(slot);
            out.add_term(rest, &(c * &v));
        }
        out
    }

    pub fn eval_hbar(&self, at: &S) -> Self {
        let mut out = Self::zero(self.arity);
        for (ws, c) in &self.terms {
            out.add_term(ws.clone(), &HbarPoly::constant(c.eval(at)));
        }
        out
    }

    pub fn has_hbar(&self) -> bool {
        self.terms.values().any(|c| c.has_hbar())
    }

    pub fn generators(&self) -> BTreeSet<GeneratorId> {
        self.terms.keys().flat_map(|ws| ws.iter().flat_map(|w| w.0.iter().copied())).collect()
    }

    pub fn max_factor_len(&self) -> usize {
        self.terms.keys().flat_map(|ws| ws.iter().map(|w| w.len())).max().unwrap_or(0)
    }

    /// Collects the coefficient of a fixed word in factor `slot`.
    pub fn slice(&self, slot: usize, w: &Word) -> Self {
        let mut out = Self::zero(self.arity);
        for (ws, c) in &self.terms {
            if &ws[slot] == w {
                out.add_term(ws.clone(), c);
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for TensorElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (ws, c)) in self.terms.iter().enumerate() {
            let (neg, prefix) = c.term_prefix();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let body: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
            let body = body.join(" @ ");
            if prefix.is_empty() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{prefix}*({body})")?;
            }
        }
        Ok(())
    }
}

/// Generator assignment extended multiplicatively (an algebra map candidate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap<S: Scalar> {
    pub name: String,
    pub source: String,
    pub target: String,
    pub images: BTreeMap<GeneratorId, Element<S>>,
}

impl<S: Scalar> GeneratorMap<S> {
    pub fn new(name: &str, source: &str, target: &str) -> Self {
        GeneratorMap { name: name.into(), source: source.into(), target: target.into(), images: BTreeMap::new() }
    }

    pub fn insert(&mut self, g: GeneratorId, img: Element<S>) {
        self.images.insert(g, img);
    }

    pub fn image(&self, g: &GeneratorId) -> Result<&Element<S>> {
        self.images.get(g).ok_or(Error::Unmapped(*g))
    }

    /// Every image must have the parity of its source generator.
    pub fn check_parity(&self) -> Result<()> {
        for (g, img) in &self.images {
            match img.parity() {
                Some(p) if p == g.parity || img.is_zero() => {}
                _ => return Err(Error::ParityMismatch(*g)),
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let images: serde_json::Map<String, serde_json::Value> =
            self.images.iter().map(|(g, e)| (g.to_string(), serde_json::Value::String(e.to_string()))).collect();
        serde_json::json!({
            "name": self.name,
            "source": self.source,
            "target": self.target,
            "images": images,
        })
    }
}
