//! Defining supermatrix realization of sl(m|n) and the loop realization of
//! its affine version (central charge zero), with Laurent entries clamped to
//! a degree window.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::presentations::RelationSet;
use crate::report::{Outcome, Report, ReportEntry};
use crate::roots::{Letter, RootDatum};
use crate::scalar::Scalar;
use crate::poly::HbarPoly;
use crate::superfree::{Element, GenKind, GeneratorId, GeneratorMap, TensorElement, Word};

/// Laurent polynomial in t; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent<S: Scalar> {
    terms: BTreeMap<i64, S>,
}

impl<S: Scalar> Laurent<S> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn monomial(c: S, deg: i64) -> Self {
        let mut l = Self::zero();
        l.add_monomial(deg, c);
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, deg: i64) -> S {
        self.terms.get(&deg).cloned().unwrap_or_else(S::zero)
    }

    pub fn max_abs_degree(&self) -> i64 {
        self.terms.keys().map(|d| d.abs()).max().unwrap_or(0)
    }

    fn add_monomial(&mut self, deg: i64, c: S) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(deg).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&deg);
        }
    }

    fn add_scaled(&mut self, other: &Self, c: &S) {
        for (d, v) in &other.terms {
            self.add_monomial(*d, v.clone() * c.clone());
        }
    }
}

impl<S: Scalar> std::fmt::Display for Laurent<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, c)| match d {
                0 => format!("{c}"),
                _ => format!("{c}t^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Square supermatrix over Laurent polynomials, degrees clamped to
/// [-cutoff, cutoff]. A product leaving the window sets `overflow`, which
/// then propagates through every later operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrixPoly<S: Scalar> {
    pub parities: Vec<u8>,
    pub cutoff: i64,
    pub overflow: bool,
    entries: Vec<Vec<Laurent<S>>>,
}

impl<S: Scalar> SuperMatrixPoly<S> {
    pub fn zero(parities: &[u8], cutoff: i64) -> Self {
        let n = parities.len();
        SuperMatrixPoly { parities: parities.to_vec(), cutoff, overflow: false, entries: vec![vec![Laurent::zero(); n]; n] }
    }

    pub fn identity(parities: &[u8], cutoff: i64) -> Self {
        let mut m = Self::zero(parities, cutoff);
        for a in 0..parities.len() {
            m.entries[a][a] = Laurent::monomial(S::one(), 0);
        }
        m
    }

    /// c * E_{ab} * t^deg.
    pub fn unit(parities: &[u8], cutoff: i64, a: usize, b: usize, c: S, deg: i64) -> Self {
        let mut m = Self::zero(parities, cutoff);
        m.overflow = deg.abs() > cutoff;
        if !m.overflow {
            m.entries[a][b] = Laurent::monomial(c, deg);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.parities.len()
    }

    pub fn entry(&self, a: usize, b: usize) -> &Laurent<S> {
        &self.entries[a][b]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }

    pub fn entry_parity(&self, a: usize, b: usize) -> u8 {
        self.parities[a] ^ self.parities[b]
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &S::one())
    }

    pub fn add_scaled(&self, other: &Self, c: &S) -> Self {
        let mut out = self.clone();
        out.overflow |= other.overflow;
        for (a, row) in other.entries.iter().enumerate() {
            for (b, e) in row.iter().enumerate() {
                out.entries[a][b].add_scaled(e, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::zero(&self.parities, self.cutoff).add_scaled(self, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        let mut out = Self::zero(&self.parities, self.cutoff);
        out.overflow = self.overflow || other.overflow;
        for a in 0..n {
            for k in 0..n {
                let l = &self.entries[a][k];
                if l.is_zero() {
                    continue;
                }
                for b in 0..n {
                    let r = &other.entries[k][b];
                    for (d1, c1) in l.terms() {
                        for (d2, c2) in r.terms() {
                            let d = d1 + d2;
                            if d.abs() > self.cutoff {
                                out.overflow = true;
                            } else {
                                out.entries[a][b].add_monomial(d, c1.clone() * c2.clone());
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// (even block part, odd block part).
    pub fn parity_parts(&self) -> (Self, Self) {
        let mut even = Self::zero(&self.parities, self.cutoff);
        let mut odd = even.clone();
        even.overflow = self.overflow;
        odd.overflow = self.overflow;
        for (a, row) in self.entries.iter().enumerate() {
            for (b, e) in row.iter().enumerate() {
                if self.entry_parity(a, b) == 0 {
                    even.entries[a][b] = e.clone();
                } else {
                    odd.entries[a][b] = e.clone();
                }
            }
        }
        (even, odd)
    }

    pub fn super_bracket(&self, other: &Self) -> Self {
        let (a0, a1) = self.parity_parts();
        let (b0, b1) = other.parity_parts();
        let mut out = Self::zero(&self.parities, self.cutoff);
        out.overflow = self.overflow || other.overflow;
        for (pa, a) in [(0u8, &a0), (1, &a1)] {
            for (pb, b) in [(0u8, &b0), (1, &b1)] {
                let sign = if pa * pb == 1 { S::one() } else { -S::one() };
                out = out.add(&a.mul(b)).add_scaled(&b.mul(a), &sign);
            }
        }
        out
    }

    /// Supertrace, a Laurent polynomial.
    pub fn supertrace(&self) -> Laurent<S> {
        let mut out = Laurent::zero();
        for a in 0..self.size() {
            let sign = if self.parities[a] == 1 { -S::one() } else { S::one() };
            out.add_scaled(&self.entries[a][a], &sign);
        }
        out
    }

    /// Constant term of str(XY): the invariant pairing on the loop algebra.
    pub fn pairing(&self, other: &Self) -> S {
        self.mul(other).supertrace().coeff(0)
    }

    /// Entries as strings "c_{-N}t^-N + ... + c_N t^N".
    pub fn to_json(&self) -> Value {
        json!({
            "overflow": self.overflow,
            "entries": self.entries.iter()
                .map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Nonzero entries (a, b, degree, coefficient), for tensor comparisons.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, i64, S)> {
        let mut out = Vec::new();
        for (a, row) in self.entries.iter().enumerate() {
            for (b, e) in row.iter().enumerate() {
                for (d, c) in e.terms() {
                    out.push((a, b, *d, c.clone()));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Realization<S: Scalar> {
    pub datum: RootDatum,
    pub cutoff: i64,
    /// Coroot signs in storage order.
    pub signs: Vec<i64>,
    gens: BTreeMap<GeneratorId, SuperMatrixPoly<S>>,
}

impl<S: Scalar> Realization<S> {
    pub fn parities(&self) -> Vec<u8> {
        self.datum.word.iter().map(|l| l.parity()).collect()
    }

    pub fn generator(&self, g: &GeneratorId) -> Result<&SuperMatrixPoly<S>> {
        if g.level != 0 || g.kind == GenKind::Htilde {
            return Err(Error::NotLieLevel(*g));
        }
        self.gens.get(g).ok_or(Error::UnknownGenerator(*g))
    }

    pub fn sign(&self, i: usize) -> i64 {
        self.signs[self.datum.pos(i)]
    }

    pub fn zero_matrix(&self) -> SuperMatrixPoly<S> {
        SuperMatrixPoly::zero(&self.parities(), self.cutoff)
    }

    pub fn unit(&self, a: usize, b: usize, deg: i64) -> SuperMatrixPoly<S> {
        SuperMatrixPoly::unit(&self.parities(), self.cutoff, a, b, S::one(), deg)
    }
}

/// Matrices of the level-0 generators. The sign of x-(k) is +1 when the left
/// letter of alpha_k is E and -1 when it is D, which makes the realized
/// Cartan matrix the symmetric one.
pub fn realize<S: Scalar>(rd: &RootDatum, cutoff: i64) -> Result<Realization<S>> {
    if (rd.affine && cutoff < 1) || (!rd.affine && cutoff != 0) {
        return Err(Error::InvalidCutoff(cutoff));
    }
    let par: Vec<u8> = rd.word.iter().map(|l| l.parity()).collect();
    let mut gens = BTreeMap::new();
    let mut signs = Vec::new();
    for i in rd.indices() {
        let (a, b) = rd.letter_pair(i);
        let d: i64 = if rd.word[a] == Letter::E { 1 } else { -1 };
        signs.push(d);
        let deg = if i == 0 { 1 } else { 0 };
        let p = rd.parity_of(i);
        let xp = SuperMatrixPoly::unit(&par, cutoff, a, b, S::one(), deg);
        let xm = SuperMatrixPoly::unit(&par, cutoff, b, a, S::from_i64(d), -deg);
        gens.insert(GeneratorId::h(i, 0), xp.super_bracket(&xm));
        gens.insert(GeneratorId::xp(i, 0, p), xp);
        gens.insert(GeneratorId::xm(i, 0, p), xm);
    }
    Ok(Realization { datum: rd.clone(), cutoff, signs, gens })
}

/// Homomorphic evaluation of an hbar-free level-0 element.
pub fn eval<S: Scalar>(real: &Realization<S>, a: &Element<S>) -> Result<SuperMatrixPoly<S>> {
    if a.has_hbar() {
        return Err(Error::HbarPresent);
    }
    let par = real.parities();
    let mut out = SuperMatrixPoly::zero(&par, real.cutoff);
    let mut prefix_cache: BTreeMap<Vec<GeneratorId>, SuperMatrixPoly<S>> = BTreeMap::new();
    for (w, c) in a.terms() {
        let mut acc = SuperMatrixPoly::identity(&par, real.cutoff);
        for (k, g) in w.0.iter().enumerate() {
            let key = w.0[..=k].to_vec();
            if let Some(m) = prefix_cache.get(&key) {
                acc = m.clone();
                continue;
            }
            acc = acc.mul(real.generator(g)?);
            prefix_cache.insert(key, acc.clone());
        }
        out = out.add_scaled(&acc, &c.constant_term());
    }
    Ok(out)
}

/// Evaluates every relation; a relation passes when it maps to zero without
/// overflow.
pub fn check_relations<S: Scalar>(real: &Realization<S>, rs: &RelationSet<S>) -> Result<Report> {
    if !rs.is_lie_level() {
        return Err(Error::Unsupported("relation set is not Lie-level".into()));
    }
    let mut report = Report::new(&format!("matrix check of {} on {}", rs.name, real.datum.word_string()));
    for r in &rs.relations {
        let start = Instant::now();
        let m = eval(real, &r.element)?;
        let (verdict, outcome, detail) = if m.overflow {
            ("overflow", Outcome::Inconclusive, None)
        } else if m.is_zero() {
            ("pass", Outcome::Verified, None)
        } else {
            ("fail", Outcome::Violated, Some(m.to_json()))
        };
        let mut e = ReportEntry::new(&r.label, verdict, outcome);
        e.elapsed_ms = start.elapsed().as_millis();
        e.detail = detail;
        report.entries.push(e);
    }
    Ok(report)
}

fn exp_nilpotent<S: Scalar>(x: &SuperMatrixPoly<S>) -> SuperMatrixPoly<S> {
    let par = x.parities.clone();
    let mut out = SuperMatrixPoly::identity(&par, x.cutoff);
    let mut power = out.clone();
    let mut k = 1i64;
    loop {
        power = power.mul(x).scale(&(S::one() / S::from_i64(k)));
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
        k += 1;
        assert!(k as usize <= par.len() + 1, "nilpotent matrix");
    }
    out
}

/// s = exp(f) exp(-e) exp(f) for the sl(2) triple of an even root, with
/// e = x+(i) and f = d_i x-(i), together with its inverse. Conjugation by s
/// acts on loop matrices entrywise and leaves t alone.
pub struct Conjugator<S: Scalar> {
    pub matrix: SuperMatrixPoly<S>,
    pub inverse: SuperMatrixPoly<S>,
}

impl<S: Scalar> Conjugator<S> {
    pub fn conjugate(&self, a: &SuperMatrixPoly<S>) -> SuperMatrixPoly<S> {
        self.matrix.mul(a).mul(&self.inverse)
    }
}

pub fn even_reflection_conjugator<S: Scalar>(real: &Realization<S>, i: usize) -> Result<Conjugator<S>> {
    real.datum.check_index(i)?;
    if real.datum.is_odd(i) {
        return Err(Error::OddRoot(i));
    }
    let e = real.generator(&GeneratorId::xp(i, 0, 0))?.clone();
    let f = real.generator(&GeneratorId::xm(i, 0, 0))?.scale(&S::from_i64(real.sign(i)));
    let (ef, ee) = (exp_nilpotent(&f), exp_nilpotent(&e.scale(&-S::one())));
    let (ef_inv, ee_inv) = (exp_nilpotent(&f.scale(&-S::one())), exp_nilpotent(&e));
    Ok(Conjugator { matrix: ef.mul(&ee).mul(&ef), inverse: ef_inv.mul(&ee_inv).mul(&ef_inv) })
}

/// A dual pair for the half Casimir: `lower` pairs with `upper` to 1 under
/// (X, Y) = str(Y X) at t^0, i.e. str(x_alpha x_-alpha) = 1.
#[derive(Clone, Debug)]
pub struct RootVectorPair<S: Scalar> {
    pub lower: SuperMatrixPoly<S>,
    pub upper: SuperMatrixPoly<S>,
    pub parity: u8,
    /// (a, b, k): upper is a multiple of E_ab t^k.
    pub root: (usize, usize, i64),
}

/// Finite positive roots (a < b, k = 0) with b - a <= height, and for the
/// affine case every (a, b, k) with a != b, 1 <= k <= loop cutoff and finite
/// part height at most `height`.
pub fn root_vectors<S: Scalar>(real: &Realization<S>, height: usize, loop_cutoff: i64) -> Result<Vec<RootVectorPair<S>>> {
    if loop_cutoff > real.cutoff || (loop_cutoff > 0 && !real.datum.affine) || loop_cutoff < 0 {
        return Err(Error::CutoffMismatch(format!("loop cutoff {loop_cutoff} against realization {}", real.cutoff)));
    }
    let n = real.datum.size();
    let par = real.parities();
    let mut out = Vec::new();
    for k in 0..=loop_cutoff {
        for a in 0..n {
            for b in 0..n {
                if a == b || (k == 0 && a > b) || a.abs_diff(b) > height {
                    continue;
                }
                let upper = real.unit(a, b, k);
                let sign = if par[a] == 1 { -S::one() } else { S::one() };
                let lower = SuperMatrixPoly::unit(&par, real.cutoff, b, a, sign, -k);
                debug_assert!(upper.mul(&lower).supertrace().coeff(0).is_one());
                out.push(RootVectorPair { lower, upper, parity: par[a] ^ par[b], root: (a, b, k) });
            }
        }
    }
    Ok(out)
}

/// A realization of another catalog through fixed matrices in the same
/// matrix space, e.g. the images of source generators under an algebra map.
pub fn pullback<S: Scalar>(real: &Realization<S>, map: &GeneratorMap<S>) -> Result<Realization<S>> {
    let mut gens = BTreeMap::new();
    for (g, img) in &map.images {
        if g.level == 0 && g.kind != GenKind::Htilde && !img.has_hbar() {
            gens.insert(*g, eval(real, img)?);
        }
    }
    Ok(Realization { datum: real.datum.clone(), cutoff: real.cutoff, signs: real.signs.clone(), gens })
}

/// Matrix-unit expansion of a tensor: one (row, column, t-degree) triple per
/// factor.
pub type TensorMatrix<S> = BTreeMap<Vec<(usize, usize, i64)>, S>;

/// Evaluates an hbar-free tensor factorwise, factor k through `reals[k]`.
pub fn eval_tensor<S: Scalar>(reals: &[&Realization<S>], t: &TensorElement<S>) -> Result<TensorMatrix<S>> {
    if t.arity != reals.len() {
        return Err(Error::ArityMismatch);
    }
    if t.has_hbar() {
        return Err(Error::HbarPresent);
    }
    let mut caches: Vec<BTreeMap<Word, Vec<(usize, usize, i64, S)>>> = vec![BTreeMap::new(); t.arity];
    let mut out: TensorMatrix<S> = BTreeMap::new();
    for (ws, c) in t.terms() {
        let mut acc: Vec<(Vec<(usize, usize, i64)>, S)> = vec![(Vec::new(), c.constant_term())];
        for (k, w) in ws.iter().enumerate() {
            if !caches[k].contains_key(w) {
                let m = eval(reals[k], &Element::from_word(w.clone(), HbarPoly::one()))?;
                if m.overflow {
                    return Err(Error::Overflow(reals[k].cutoff));
                }
                caches[k].insert(w.clone(), m.nonzero_entries());
            }
            let entries = &caches[k][w];
            let mut next = Vec::with_capacity(acc.len() * entries.len());
            for (key, v) in &acc {
                for (a, b, d, e) in entries {
                    let mut nk = key.clone();
                    nk.push((*a, *b, *d));
                    next.push((nk, v.clone() * e.clone()));
                }
            }
            acc = next;
        }
        for (key, v) in acc {
            let e = out.entry(key).or_insert_with(S::zero);
            *e = e.clone() + v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

pub fn report_json<S: Scalar>(m: &SuperMatrixPoly<S>) -> Value {
    m.to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{classical_reflection_map, kac_moody_relations};
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn odd_cartan_element() {
        let rd = RootDatum::parse("EED", false).unwrap();
        let real = realize::<Q>(&rd, 0).unwrap();
        let h2 = real.generator(&GeneratorId::h(2, 0)).unwrap();
        let par = real.parities();
        let expect = SuperMatrixPoly::unit(&par, 0, 1, 1, Q::from_i64(1), 0).add(&SuperMatrixPoly::unit(&par, 0, 2, 2, Q::from_i64(1), 0));
        assert_eq!(h2, &expect);
    }

    #[test]
    fn cartan_from_eigenvalues() {
        for w in ["EED", "EDDE", "DEDE", "EEEDD"] {
            let rd = RootDatum::parse(w, false).unwrap();
            let real = realize::<Q>(&rd, 0).unwrap();
            for i in rd.indices() {
                for j in rd.indices() {
                    let hi = real.generator(&GeneratorId::h(i, 0)).unwrap();
                    let xj = real.generator(&GeneratorId::xp(j, 0, rd.parity_of(j))).unwrap();
                    assert_eq!(hi.super_bracket(xj), xj.scale(&Q::from_i64(rd.cartan(i, j))), "{w} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn kac_moody_relations_hold() {
        for (w, affine, n) in [("EED", false, 0), ("EEDD", false, 0), ("EDED", false, 0), ("EEEDD", true, 3), ("EEDED", true, 3)] {
            let rd = RootDatum::parse(w, affine).unwrap();
            let real = realize::<Q>(&rd, n).unwrap();
            let rep = check_relations(&real, &kac_moody_relations(&rd)).unwrap();
            assert_eq!(rep.outcome(), Outcome::Verified, "{w}");
        }
    }

    #[test]
    fn corrupted_relation_fails() {
        let rd = RootDatum::parse("EED", false).unwrap();
        let real = realize::<Q>(&rd, 0).unwrap();
        let mut rs = kac_moody_relations::<Q>(&rd);
        rs.relations[5].element = rs.relations[5].element.neg().add(&Element::gen(GeneratorId::h(1, 0)));
        let rep = check_relations(&real, &rs).unwrap();
        assert_eq!(rep.outcome(), Outcome::Violated);
        assert_eq!(rep.entries.iter().filter(|e| e.verdict == "fail").count(), 1);
    }

    #[test]
    fn overflow_is_reported() {
        let rd = RootDatum::parse("EEEDD", true).unwrap();
        let real = realize::<Q>(&rd, 1).unwrap();
        let mut word = Element::<Q>::gen(GeneratorId::xp(0, 0, rd.parity_of(0)));
        for i in [1, 2, 3, 4, 0] {
            word = word.multiply(&Element::gen(GeneratorId::xp(i, 0, rd.parity_of(i))));
        }
        assert!(eval(&real, &word).unwrap().overflow);
        assert!(!realize::<Q>(&rd, 2).map(|r| eval(&r, &word).unwrap().overflow).unwrap());
    }

    #[test]
    fn sl2_conjugator() {
        let rd = RootDatum::parse("EE", false).unwrap();
        let real = realize::<Q>(&rd, 0).unwrap();
        let c = even_reflection_conjugator(&real, 1).unwrap();
        let par = real.parities();
        let expect = SuperMatrixPoly::unit(&par, 0, 0, 1, -Q::from_i64(1), 0).add(&SuperMatrixPoly::unit(&par, 0, 1, 0, Q::from_i64(1), 0));
        assert_eq!(c.matrix, expect);
        assert_eq!(c.conjugate(&real.unit(0, 1, 0)), real.unit(1, 0, 0).scale(&-Q::from_i64(1)));
    }

    #[test]
    fn classical_reflection_images_satisfy_target_relations() {
        for (w, affine, n) in [("EEEDD", false, 0), ("EEEDD", true, 3), ("EDEDE", true, 3)] {
            let rd = RootDatum::parse(w, affine).unwrap();
            for i in rd.indices().into_iter().filter(|&i| rd.is_odd(i)) {
                let (phi, target) = classical_reflection_map::<Q>(&rd, i).unwrap();
                let real = realize::<Q>(&target, n).unwrap();
                for r in &kac_moody_relations::<Q>(&rd).relations {
                    let img = r.element.substitute(&phi).unwrap();
                    let m = eval(&real, &img).unwrap();
                    assert!(!m.overflow && m.is_zero(), "{w} affine={affine} i={i} {}", r.label);
                }
            }
        }
    }
}
