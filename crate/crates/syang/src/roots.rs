//! Weights, simple root systems of sl(m|n) and its affinization, Cartan
//! matrices, Dynkin diagrams and positive roots.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    E,
    D,
}

impl Letter {
    pub fn parity(self) -> u8 {
        match self {
            Letter::E => 0,
            Letter::D => 1,
        }
    }
    pub fn as_char(self) -> char {
        match self {
            Letter::E => 'E',
            Letter::D => 'D',
        }
    }
}

pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    let word: Vec<Letter> = text
        .trim()
        .chars()
        .map(|c| match c.to_ascii_uppercase() {
            'E' => Ok(Letter::E),
            'D' => Ok(Letter::D),
            other => Err(Error::BadLetter(other)),
        })
        .collect::<Result<_>>()?;
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(word)
}

pub fn word_string(word: &[Letter]) -> String {
    word.iter().map(|l| l.as_char()).collect()
}

/// Integer combination of eps_1..eps_m, delta_1..delta_n and the null root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    pub eps: Vec<i64>,
    pub delta: Vec<i64>,
    pub imaginary_deg: i64,
}

impl WeightVector {
    pub fn zero(m: usize, n: usize) -> Self {
        WeightVector { eps: vec![0; m], delta: vec![0; n], imaginary_deg: 0 }
    }

    pub fn eps_unit(m: usize, n: usize, a: usize) -> Self {
        let mut w = Self::zero(m, n);
        w.eps[a] = 1;
        w
    }

    pub fn delta_unit(m: usize, n: usize, a: usize) -> Self {
        let mut w = Self::zero(m, n);
        w.delta[a] = 1;
        w
    }

    pub fn null_root(m: usize, n: usize, k: i64) -> Self {
        let mut w = Self::zero(m, n);
        w.imaginary_deg = k;
        w
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.eps.len(), self.delta.len())
    }

    pub fn is_zero(&self) -> bool {
        self.imaginary_deg == 0 && self.finite_part_is_zero()
    }

    pub fn finite_part_is_zero(&self) -> bool {
        self.eps.iter().chain(self.delta.iter()).all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        WeightVector {
            eps: self.eps.iter().map(|c| c * k).collect(),
            delta: self.delta.iter().map(|c| c * k).collect(),
            imaginary_deg: self.imaginary_deg * k,
        }
    }

    pub fn with_imaginary(&self, k: i64) -> Self {
        let mut w = self.clone();
        w.imaginary_deg = k;
        w
    }

    /// True when the eps/delta part is w_a - w_b for two distinct weights.
    pub fn is_finite_root_shape(&self) -> bool {
        let coeffs: Vec<i64> = self.eps.iter().chain(self.delta.iter()).copied().collect();
        let plus = coeffs.iter().filter(|&&c| c == 1).count();
        let minus = coeffs.iter().filter(|&&c| c == -1).count();
        let zero = coeffs.iter().filter(|&&c| c == 0).count();
        plus == 1 && minus == 1 && zero + 2 == coeffs.len()
    }

    /// Parity of a root of shape w_a - w_b: odd when it mixes eps and delta.
    pub fn root_parity(&self) -> u8 {
        let e: i64 = self.eps.iter().map(|c| c.abs()).sum();
        let d: i64 = self.delta.iter().map(|c| c.abs()).sum();
        u8::from(e % 2 == 1 && d % 2 == 1)
    }
}

fn zip_with(a: &WeightVector, b: &WeightVector, f: impl Fn(i64, i64) -> i64) -> WeightVector {
    assert_eq!(a.shape(), b.shape(), "weight vectors over different (m,n)");
    WeightVector {
        eps: a.eps.iter().zip(&b.eps).map(|(x, y)| f(*x, *y)).collect(),
        delta: a.delta.iter().zip(&b.delta).map(|(x, y)| f(*x, *y)).collect(),
        imaginary_deg: f(a.imaginary_deg, b.imaginary_deg),
    }
}

impl Add for &WeightVector {
    type Output = WeightVector;
    fn add(self, other: &WeightVector) -> WeightVector {
        zip_with(self, other, |x, y| x + y)
    }
}

impl Sub for &WeightVector {
    type Output = WeightVector;
    fn sub(self, other: &WeightVector) -> WeightVector {
        zip_with(self, other, |x, y| x - y)
    }
}

impl Neg for &WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        self.scaled(-1)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = Vec::new();
        for (a, &c) in self.eps.iter().enumerate() {
            if c != 0 {
                terms.push((c, format!("e{}", a + 1)));
            }
        }
        for (a, &c) in self.delta.iter().enumerate() {
            if c != 0 {
                terms.push((c, format!("d{}", a + 1)));
            }
        }
        if self.imaginary_deg != 0 {
            terms.push((self.imaginary_deg, "delta".to_string()));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, name)) in terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
        }
        Ok(())
    }
}

/// (eps_i, eps_j) = delta_ij, (delta_i, delta_j) = -delta_ij; the null root
/// pairs to zero with everything.
pub fn bilinear(a: &WeightVector, b: &WeightVector) -> Result<i64> {
    if a.shape() != b.shape() {
        return Err(Error::WeightMismatch);
    }
    let e: i64 = a.eps.iter().zip(&b.eps).map(|(x, y)| x * y).sum();
    let d: i64 = a.delta.iter().zip(&b.delta).map(|(x, y)| x * y).sum();
    Ok(e - d)
}

fn form(a: &WeightVector, b: &WeightVector) -> i64 {
    bilinear(a, b).expect("weights of one datum share (m,n)")
}

/// A simple root system given by an ordering of the diagonal weights.
///
/// Simple roots are stored in the order alpha_1..alpha_{N-1} followed by
/// alpha_0 when affine (N = m+n); public accessors take the 1-based indices (0 = alpha_0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootDatum {
    pub word: Vec<Letter>,
    pub affine: bool,
    pub m: usize,
    pub n: usize,
    pub simple_roots: Vec<WeightVector>,
    pub parity: Vec<u8>,
}

impl RootDatum {
    pub fn new(word: &[Letter], affine: bool) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        if affine && word.len() < 3 {
            return Err(Error::AffineTooShort(word.len()));
        }
        let m = word.iter().filter(|&&l| l == Letter::E).count();
        let n = word.len() - m;
        let mut rd = RootDatum {
            word: word.to_vec(),
            affine,
            m,
            n,
            simple_roots: Vec::new(),
            parity: Vec::new(),
        };
        let len = word.len();
        for k in 1..len {
            rd.simple_roots.push(&rd.position_weight(k - 1) - &rd.position_weight(k));
            rd.parity.push(word[k - 1].parity() ^ word[k].parity());
        }
        if affine {
            let a0 = &rd.position_weight(len - 1) - &rd.position_weight(0);
            rd.simple_roots.push(a0.with_imaginary(1));
            rd.parity.push(word[len - 1].parity() ^ word[0].parity());
        }
        Ok(rd)
    }

    pub fn parse(text: &str, affine: bool) -> Result<Self> {
        Self::new(&parse_word(text)?, affine)
    }

    /// Number of diagonal weights, m + n.
    pub fn size(&self) -> usize {
        self.word.len()
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }

    /// Public 1-based indices in storage order.
    pub fn indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (1..self.size()).collect();
        if self.affine {
            v.push(0);
        }
        v
    }

    pub fn is_valid_index(&self, i: usize) -> bool {
        if i == 0 {
            self.affine
        } else {
            i < self.size()
        }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if self.is_valid_index(i) {
            Ok(())
        } else {
            Err(Error::InvalidIndex(i))
        }
    }

    /// Storage position of the simple root with index `i`.
    pub fn pos(&self, i: usize) -> usize {
        debug_assert!(self.is_valid_index(i));
        if i == 0 {
            self.size() - 1
        } else {
            i - 1
        }
    }

    pub fn index_at(&self, pos: usize) -> usize {
        if self.affine && pos == self.size() - 1 {
            0
        } else {
            pos + 1
        }
    }

    pub fn root(&self, i: usize) -> &WeightVector {
        &self.simple_roots[self.pos(i)]
    }

    pub fn parity_of(&self, i: usize) -> u8 {
        self.parity[self.pos(i)]
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.parity_of(i) == 1
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        form(self.root(i), self.root(j))
    }

    /// Word positions (0-based) of the two weights whose difference is alpha_i.
    pub fn letter_pair(&self, i: usize) -> (usize, usize) {
        if i == 0 {
            (self.size() - 1, 0)
        } else {
            (i - 1, i)
        }
    }

    /// Weight sitting at word position `p` (eps or delta, numbered in order).
    pub fn position_weight(&self, p: usize) -> WeightVector {
        let letter = self.word[p];
        let rank = self.word[..p].iter().filter(|&&l| l == letter).count();
        match letter {
            Letter::E => WeightVector::eps_unit(self.m, self.n, rank),
            Letter::D => WeightVector::delta_unit(self.m, self.n, rank),
        }
    }

    /// Previous simple root index, cyclic when affine.
    pub fn prev(&self, i: usize) -> Option<usize> {
        let len = self.size();
        if self.affine {
            Some((i + len - 1) % len)
        } else if i > 1 {
            Some(i - 1)
        } else {
            None
        }
    }

    /// Next simple root index, cyclic when affine.
    pub fn next(&self, i: usize) -> Option<usize> {
        let len = self.size();
        if self.affine {
            Some((i + 1) % len)
        } else if i + 1 < len {
            Some(i + 1)
        } else {
            None
        }
    }

    /// Real root test used by odd reflections: finite roots, plus their
    /// shifts by multiples of the null root when affine.
    pub fn is_real_root(&self, v: &WeightVector) -> bool {
        v.is_finite_root_shape() && (self.affine || v.imaginary_deg == 0)
    }

    /// Coordinates of `v` in the basis of simple roots (storage order).
    /// `None` when `v` is outside their integer span.
    pub fn simple_coordinates(&self, v: &WeightVector) -> Option<Vec<i64>> {
        let len = self.size();
        // Coordinate of alpha_k (k = 1..len-1) equals the sum of position
        // weights' coefficients over positions 0..k-1, shifted by c0 in the
        // affine case; alpha_0 carries the null root coefficient.
        let coeff_at = |p: usize| -> i64 {
            let letter = self.word[p];
            let rank = self.word[..p].iter().filter(|&&l| l == letter).count();
            match letter {
                Letter::E => v.eps[rank],
                Letter::D => v.delta[rank],
            }
        };
        let total: i64 = (0..len).map(coeff_at).sum();
        if total != 0 {
            return None;
        }
        let c0 = if self.affine {
            v.imaginary_deg
        } else if v.imaginary_deg != 0 {
            return None;
        } else {
            0
        };
        let mut coords = Vec::with_capacity(self.rank());
        let mut partial = 0;
        for p in 0..len - 1 {
            partial += coeff_at(p);
            coords.push(partial + c0);
        }
        if self.affine {
            coords.push(c0);
        }
        Some(coords)
    }

    pub fn cartan_matrix(&self) -> CartanMatrix {
        let r = self.rank();
        let mut entries = vec![vec![0i64; r]; r];
        for (a, row) in entries.iter_mut().enumerate() {
            for (b, e) in row.iter_mut().enumerate() {
                *e = form(&self.simple_roots[a], &self.simple_roots[b]);
            }
        }
        CartanMatrix { entries, parity: self.parity.clone() }
    }

    pub fn dynkin_diagram(&self) -> Diagram {
        let cm = self.cartan_matrix();
        let nodes = (0..self.rank())
            .map(|p| DiagramNode { index: self.index_at(p), grey: self.parity[p] == 1 })
            .collect();
        let mut edges = Vec::new();
        for a in 0..self.rank() {
            for b in a + 1..self.rank() {
                if cm.entries[a][b] != 0 {
                    edges.push((a, b, cm.entries[a][b]));
                }
            }
        }
        Diagram { word: self.word_string(), affine: self.affine, nodes, edges }
    }

    /// Finite positive roots w_a - w_b (a < b), then for the affine case
    /// alpha + k*delta for every finite root alpha and 1 <= k <= N, then the
    /// imaginary roots k*delta with multiplicity m+n-1.
    pub fn positive_roots(&self, loop_cutoff: i64) -> Result<Vec<RootEntry>> {
        if loop_cutoff < 0 {
            return Err(Error::InvalidCutoff(loop_cutoff));
        }
        if loop_cutoff > 0 && !self.affine {
            return Err(Error::LoopCutoffFinite(loop_cutoff));
        }
        let len = self.size();
        let mut finite = Vec::new();
        for a in 0..len {
            for b in a + 1..len {
                let w = &self.position_weight(a) - &self.position_weight(b);
                let parity = w.root_parity();
                finite.push(RootEntry { weight: w, parity, multiplicity: 1 });
            }
        }
        let mut out = finite.clone();
        for k in 1..=loop_cutoff {
            for sign in [1i64, -1] {
                for r in &finite {
                    let w = r.weight.scaled(sign).with_imaginary(k);
                    out.push(RootEntry { weight: w, parity: r.parity, multiplicity: 1 });
                }
            }
        }
        for k in 1..=loop_cutoff {
            out.push(RootEntry {
                weight: WeightVector::null_root(self.m, self.n, k),
                parity: 0,
                multiplicity: len - 1,
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEntry {
    pub weight: WeightVector,
    pub parity: u8,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    pub entries: Vec<Vec<i64>>,
    pub parity: Vec<u8>,
}

impl CartanMatrix {
    pub fn is_symmetric(&self) -> bool {
        let r = self.entries.len();
        (0..r).all(|a| (0..r).all(|b| self.entries[a][b] == self.entries[b][a]))
    }

    pub fn to_json(&self, rd: &RootDatum) -> Value {
        json!({
            "word": rd.word_string(),
            "affine": rd.affine,
            "parity": self.parity,
            "matrix": self.entries,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramNode {
    pub index: usize,
    pub grey: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub word: String,
    pub affine: bool,
    pub nodes: Vec<DiagramNode>,
    /// Storage positions and the Cartan entry joining them.
    pub edges: Vec<(usize, usize, i64)>,
}

impl Diagram {
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("graph \"{}{}\" {{\n", self.word, if self.affine { "^(1)" } else { "" }));
        for node in &self.nodes {
            if node.grey {
                s.push_str(&format!(
                    "  a{} [label=\"alpha_{}\", style=filled, fillcolor=gray];\n",
                    node.index, node.index
                ));
            } else {
                s.push_str(&format!("  a{} [label=\"alpha_{}\"];\n", node.index, node.index));
            }
        }
        for &(a, b, e) in &self.edges {
            s.push_str(&format!(
                "  a{} -- a{} [label=\"{}\"];\n",
                self.nodes[a].index, self.nodes[b].index, e
            ));
        }
        s.push_str("}\n");
        s
    }

    /// One line per chain: `(o)a1 -- (x)a2`; grey nodes print as `x`. The
    /// affine node is appended with the edge that closes the cycle.
    pub fn to_ascii(&self) -> String {
        let mark = |p: usize| if self.nodes[p].grey { "x" } else { "o" };
        let connected = |a: usize, b: usize| {
            self.edges.iter().any(|&(x, y, _)| (x == a && y == b) || (x == b && y == a))
        };
        let chain_len = if self.affine { self.nodes.len() - 1 } else { self.nodes.len() };
        let mut s = String::new();
        for p in 0..chain_len {
            if p > 0 {
                s.push_str(if connected(p - 1, p) { " -- " } else { "    " });
            }
            s.push_str(&format!("({})a{}", mark(p), self.nodes[p].index));
        }
        s.push('\n');
        if self.affine {
            let z = self.nodes.len() - 1;
            let ends: Vec<String> = (0..chain_len)
                .filter(|&p| connected(p, z))
                .map(|p| format!("a{}", self.nodes[p].index))
                .collect();
            s.push_str(&format!("({})a0 -- {}\n", mark(z), ends.join(", ")));
        }
        s
    }
}

/// All E/D words of the given length, in lexicographic order (E < D).
pub fn all_words(len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 2);
        for w in &out {
            for l in [Letter::E, Letter::D] {
                let mut v: Vec<Letter> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All arrangements of m E's and n D's in lexicographic order.
pub fn shuffle_words(m: usize, n: usize) -> Vec<Vec<Letter>> {
    all_words(m + n)
        .into_iter()
        .filter(|w| w.iter().filter(|&&l| l == Letter::E).count() == m)
        .collect()
}

/// The distinguished ordering E^m D^n.
pub fn distinguished_word(m: usize, n: usize) -> Vec<Letter> {
    let mut w = vec![Letter::E; m];
    w.extend(std::iter::repeat_n(Letter::D, n));
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(w: &str, affine: bool) -> RootDatum {
        RootDatum::parse(w, affine).unwrap()
    }

    #[test]
    fn eed_simple_roots() {
        let r = rd("EED", false);
        assert_eq!(r.root(1).to_string(), "e1-e2");
        assert_eq!(r.root(2).to_string(), "e2-d1");
        assert_eq!(r.parity, vec![0, 1]);
    }

    #[test]
    fn eeedd_affine_alpha0() {
        let r = rd("eeedd", true);
        assert_eq!(r.rank(), 5);
        assert_eq!(r.root(0).to_string(), "-e1+d2+delta");
        assert_eq!(r.parity, vec![0, 0, 1, 0, 1]);
        let sum = r.simple_roots.iter().fold(WeightVector::zero(3, 2), |acc, w| &acc + w);
        assert!(sum.finite_part_is_zero());
    }

    #[test]
    fn errors() {
        assert_eq!(RootDatum::parse("", false), Err(Error::EmptyWord));
        assert_eq!(RootDatum::parse("ED", true), Err(Error::AffineTooShort(2)));
        assert_eq!(rd("EED", false).positive_roots(1), Err(Error::LoopCutoffFinite(1)));
        assert!(bilinear(&WeightVector::zero(1, 1), &WeightVector::zero(2, 1)).is_err());
    }

    #[test]
    fn simple_coordinates_roundtrip() {
        let r = rd("EDEED", true);
        for (p, a) in r.simple_roots.iter().enumerate() {
            let c = r.simple_coordinates(a).unwrap();
            for (q, &v) in c.iter().enumerate() {
                assert_eq!(v, i64::from(p == q));
            }
        }
    }

    #[test]
    fn ascii_and_dot() {
        let d = rd("EED", false).dynkin_diagram();
        assert_eq!(d.to_ascii(), "(o)a1 -- (x)a2\n");
        assert!(d.to_dot().contains("a2 [label=\"alpha_2\", style=filled, fillcolor=gray]"));
        let a = rd("EEEDD", true).dynkin_diagram();
        assert_eq!(a.to_ascii(), "(o)a1 -- (o)a2 -- (x)a3 -- (o)a4\n(x)a0 -- a1, a4\n");
    }
}
