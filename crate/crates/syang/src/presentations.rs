//! Relation sets of the Kac-Moody, minimalistic and Drinfeld presentations,
//! reflection maps between minimalistic presentations, the Drinfeld generator
//! lift and the Cartan block determinants used for the quartic relation.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::HbarPoly;
use crate::roots::RootDatum;
use crate::scalar::Scalar;
use crate::superfree::{Element, GeneratorId, GeneratorMap};
use crate::weyl::reflect_simple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<S: Scalar> {
    pub label: String,
    pub family: &'static str,
    pub element: Element<S>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet<S: Scalar> {
    pub name: String,
    pub datum: RootDatum,
    pub catalog: Vec<GeneratorId>,
    pub relations: Vec<Relation<S>>,
}

impl<S: Scalar> RelationSet<S> {
    fn new(name: &str, rd: &RootDatum, catalog: Vec<GeneratorId>) -> Self {
        RelationSet { name: name.into(), datum: rd.clone(), catalog, relations: Vec::new() }
    }

    fn push(&mut self, family: &'static str, params: &str, element: Element<S>) {
        self.relations.push(Relation { label: format!("{family}[{params}]"), family, element });
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&Relation<S>> {
        self.relations.iter().find(|r| r.label == label)
    }

    pub fn family(&self, family: &str) -> impl Iterator<Item = &Relation<S>> {
        let family = family.to_string();
        self.relations.iter().filter(move |r| r.family == family)
    }

    pub fn max_word_len(&self) -> usize {
        self.relations.iter().map(|r| r.element.max_word_len()).max().unwrap_or(0)
    }

    /// Level-0 generators only and no hbar.
    pub fn is_lie_level(&self) -> bool {
        self.relations
            .iter()
            .all(|r| !r.element.has_hbar() && r.element.generators().iter().all(|g| g.level == 0))
    }

    /// Catalog closure and parity homogeneity of every relation.
    pub fn validate(&self) -> Result<()> {
        let cat: BTreeSet<GeneratorId> = self.catalog.iter().copied().collect();
        for r in &self.relations {
            if let Some(g) = r.element.generators().into_iter().find(|g| !cat.contains(g)) {
                return Err(Error::UnknownGenerator(g));
            }
            if r.element.parity().is_none() {
                return Err(Error::Inhomogeneous(r.label.clone()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "word": self.datum.word_string(),
            "affine": self.datum.affine,
            "catalog": self.catalog.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "relations": self.relations.iter().map(|r| json!({
                "label": r.label,
                "family": r.family,
                "element": r.element.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn int<S: Scalar>(k: i64) -> S {
    S::from_i64(k)
}

fn sign_char(plus: bool) -> char {
    if plus {
        '+'
    } else {
        '-'
    }
}

fn pm<S: Scalar>(plus: bool) -> S {
    if plus {
        S::one()
    } else {
        -S::one()
    }
}

/// c * hbar / 2 as a coefficient.
fn half_hbar<S: Scalar>(c: S) -> HbarPoly<S> {
    HbarPoly::monomial(c / int::<S>(2), 1)
}

pub fn x<S: Scalar>(rd: &RootDatum, plus: bool, i: usize, r: usize) -> Element<S> {
    Element::gen(GeneratorId::x(plus, i, r, rd.parity_of(i)))
}

pub fn h<S: Scalar>(i: usize, r: usize) -> Element<S> {
    Element::gen(GeneratorId::h(i, r))
}

/// h~(i,1) = h(i,1) - (hbar/2) h(i,0)^2.
pub fn htilde<S: Scalar>(i: usize) -> Element<S> {
    let h0 = h::<S>(i, 0);
    h::<S>(i, 1).sub(&h0.multiply(&h0).scale_poly(&half_hbar(S::one())))
}

/// h, x+, x- at levels 0..=max_level for every simple root, sorted.
pub fn level_catalog(rd: &RootDatum, max_level: usize) -> Vec<GeneratorId> {
    let mut out = Vec::new();
    for i in rd.indices() {
        let p = rd.parity_of(i);
        for r in 0..=max_level {
            out.push(GeneratorId::h(i, r));
            out.push(GeneratorId::xp(i, r, p));
            out.push(GeneratorId::xm(i, r, p));
        }
    }
    out.sort();
    out
}

pub fn lie_catalog(rd: &RootDatum) -> Vec<GeneratorId> {
    level_catalog(rd, 0)
}

pub fn minimalistic_catalog(rd: &RootDatum) -> Vec<GeneratorId> {
    level_catalog(rd, 1)
}

/// Neighbours with a nonzero Cartan entry that are distinct from `i`.
fn both_neighbours(rd: &RootDatum, i: usize) -> Option<(usize, usize)> {
    let (p, n) = (rd.prev(i)?, rd.next(i)?);
    (p != n && p != i && n != i).then_some((p, n))
}

fn quartic<S: Scalar>(rd: &RootDatum, plus: bool, t: usize, r: usize, s: usize) -> Option<Element<S>> {
    let (p, n) = both_neighbours(rd, t)?;
    let xt = x::<S>(rd, plus, t, 0);
    let left = x::<S>(rd, plus, p, r).super_bracket(&xt);
    let right = xt.super_bracket(&x::<S>(rd, plus, n, s));
    Some(left.super_bracket(&right))
}

fn serre_exponent(rd: &RootDatum, i: usize, j: usize) -> i64 {
    1 + rd.cartan(i, j).abs()
}

/// Defining relations of the (loop) Kac-Moody superalgebra, all at level 0.
pub fn kac_moody_relations<S: Scalar>(rd: &RootDatum) -> RelationSet<S> {
    let mut rs = RelationSet::new("kac-moody", rd, lie_catalog(rd));
    let idx = rd.indices();
    for &i in &idx {
        for &j in &idx {
            rs.push("hh", &format!("{i},{j}"), h::<S>(i, 0).super_bracket(&h(j, 0)));
        }
    }
    for &i in &idx {
        for &j in &idx {
            for plus in [true, false] {
                let xj = x::<S>(rd, plus, j, 0);
                let el = h::<S>(i, 0).super_bracket(&xj).sub(&xj.scale(&(pm::<S>(plus) * int(rd.cartan(i, j)))));
                rs.push("hx", &format!("{};{i},{j}", sign_char(plus)), el);
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            let mut el = x::<S>(rd, true, i, 0).super_bracket(&x(rd, false, j, 0));
            if i == j {
                el = el.sub(&h(i, 0));
            }
            rs.push("xx", &format!("{i},{j}"), el);
        }
    }
    for &i in &idx {
        for &j in &idx {
            if i == j {
                continue;
            }
            for plus in [true, false] {
                let el = x::<S>(rd, plus, i, 0)
                    .ad_pow(serre_exponent(rd, i, j), &x(rd, plus, j, 0))
                    .expect("exponent is positive");
                rs.push("serre", &format!("{};{i},{j}", sign_char(plus)), el);
            }
        }
    }
    for &i in &idx {
        if rd.is_odd(i) {
            for plus in [true, false] {
                let xi = x::<S>(rd, plus, i, 0);
                rs.push("odd-self", &format!("{};{i}", sign_char(plus)), xi.super_bracket(&xi));
            }
        }
    }
    for &t in &idx {
        if rd.is_odd(t) {
            for plus in [true, false] {
                if let Some(el) = quartic(rd, plus, t, 0, 0) {
                    rs.push("quartic", &format!("{};{t}", sign_char(plus)), el);
                }
            }
        }
    }
    rs
}

/// Relations of the presentation by generators of levels 0 and 1.
///
/// The derived element h~(i,1) enters through `htilde`; it is not a catalog
/// generator. For a non-affine datum or m = n the theorem backing this
/// presentation does not apply, but the relations are still instantiated.
pub fn minimalistic_relations<S: Scalar>(rd: &RootDatum) -> RelationSet<S> {
    let mut rs = RelationSet::new("minimalistic", rd, minimalistic_catalog(rd));
    let idx = rd.indices();
    for &i in &idx {
        for &j in &idx {
            for r in 0..2 {
                for s in 0..2 {
                    if (i, r) < (j, s) {
                        rs.push("h-comm", &format!("{i},{j};{r},{s}"), h::<S>(i, r).super_bracket(&h(j, s)));
                    }
                }
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            let mut el = x::<S>(rd, true, i, 0).super_bracket(&x(rd, false, j, 0));
            if i == j {
                el = el.sub(&h(i, 0));
            }
            rs.push("x-cartan-0", &format!("{i},{j}"), el);
        }
    }
    for &i in &idx {
        for &j in &idx {
            let mut a = x::<S>(rd, true, i, 1).super_bracket(&x(rd, false, j, 0));
            let mut b = x::<S>(rd, true, i, 0).super_bracket(&x(rd, false, j, 1));
            if i == j {
                a = a.sub(&h(i, 1));
                b = b.sub(&h(i, 1));
            }
            rs.push("x-cartan-1", &format!("10;{i},{j}"), a);
            rs.push("x-cartan-1", &format!("01;{i},{j}"), b);
        }
    }
    for &i in &idx {
        for &j in &idx {
            for plus in [true, false] {
                for r in 0..2 {
                    let xj = x::<S>(rd, plus, j, r);
                    let el = h::<S>(i, 0).super_bracket(&xj).sub(&xj.scale(&(pm::<S>(plus) * int(rd.cartan(i, j)))));
                    rs.push("h-weight", &format!("{};{i},{j};{r}", sign_char(plus)), el);
                }
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            for plus in [true, false] {
                let (xi0, xj0) = (x::<S>(rd, plus, i, 0), x::<S>(rd, plus, j, 0));
                let el = x::<S>(rd, plus, i, 1)
                    .super_bracket(&xj0)
                    .sub(&xi0.super_bracket(&x(rd, plus, j, 1)))
                    .sub(&xi0.anti_bracket(&xj0).scale_poly(&half_hbar(pm::<S>(plus) * int(rd.cartan(i, j)))));
                rs.push("x-shift", &format!("{};{i},{j}", sign_char(plus)), el);
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            for plus in [true, false] {
                let el = htilde::<S>(i)
                    .super_bracket(&x(rd, plus, j, 0))
                    .sub(&x::<S>(rd, plus, j, 1).scale(&(pm::<S>(plus) * int(rd.cartan(i, j)))));
                rs.push("ht-shift", &format!("{};{i},{j}", sign_char(plus)), el);
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            if i == j {
                continue;
            }
            for plus in [true, false] {
                let el = x::<S>(rd, plus, i, 0)
                    .ad_pow(serre_exponent(rd, i, j), &x(rd, plus, j, 0))
                    .expect("exponent is positive");
                rs.push("serre", &format!("{};{i},{j}", sign_char(plus)), el);
            }
        }
    }
    for &i in &idx {
        if rd.is_odd(i) {
            for plus in [true, false] {
                let xi = x::<S>(rd, plus, i, 0);
                rs.push("odd-self", &format!("{};{i}", sign_char(plus)), xi.super_bracket(&xi));
            }
        }
    }
    for &t in &idx {
        if rd.is_odd(t) {
            for plus in [true, false] {
                if let Some(el) = quartic(rd, plus, t, 0, 0) {
                    rs.push("quartic", &format!("{};{t}", sign_char(plus)), el);
                }
            }
        }
    }
    rs
}

/// Distinct orderings of a sorted tuple.
fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    if sorted.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut prev = None;
    for k in 0..sorted.len() {
        if prev == Some(sorted[k]) {
            continue;
        }
        prev = Some(sorted[k]);
        let mut rest = sorted.to_vec();
        let head = rest.remove(k);
        for mut tail in distinct_permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn multisets(len: usize, max: usize, min: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for v in min..=max {
        for mut tail in multisets(len - 1, max, v) {
            tail.insert(0, v);
            out.push(tail);
        }
    }
    out
}

/// Sum of the level parameters in a relation label such as
/// "x-cartan[1,2;0,1]" or "serre-sym[+;1,2;0,1;1]"; None for labels without
/// level parameters.
pub fn label_level_sum(label: &str) -> Option<usize> {
    let inner = label.split_once('[')?.1.strip_suffix(']')?;
    let mut groups: Vec<&str> = inner.split(';').collect();
    if matches!(groups.first(), Some(&"+") | Some(&"-")) {
        groups.remove(0);
    }
    if groups.len() < 2 {
        return None;
    }
    groups[1..]
        .iter()
        .flat_map(|g| g.split(','))
        .map(|v| v.parse::<usize>().ok())
        .sum()
}

/// Drinfeld relations with every generator level at most `max_level`.
pub fn drinfeld_relations<S: Scalar>(rd: &RootDatum, max_level: usize) -> Result<RelationSet<S>> {
    if max_level < 1 {
        return Err(Error::InvalidCutoff(max_level as i64));
    }
    let big_r = max_level;
    let mut rs = RelationSet::new("drinfeld", rd, level_catalog(rd, big_r));
    let idx = rd.indices();
    for &i in &idx {
        for &j in &idx {
            for r in 0..=big_r {
                for s in 0..=big_r {
                    if (i, r) < (j, s) {
                        rs.push("h-comm", &format!("{i},{j};{r},{s}"), h::<S>(i, r).super_bracket(&h(j, s)));
                    }
                }
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            for plus in [true, false] {
                for s in 0..=big_r {
                    let xj = x::<S>(rd, plus, j, s);
                    let el = h::<S>(i, 0).super_bracket(&xj).sub(&xj.scale(&(pm::<S>(plus) * int(rd.cartan(i, j)))));
                    rs.push("h-weight", &format!("{};{i},{j};{s}", sign_char(plus)), el);
                }
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            for r in 0..=big_r {
                for s in 0..=big_r - r {
                    let mut el = x::<S>(rd, true, i, r).super_bracket(&x(rd, false, j, s));
                    if i == j {
                        el = el.sub(&h(i, r + s));
                    }
                    rs.push("x-cartan", &format!("{i},{j};{r},{s}"), el);
                }
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            for plus in [true, false] {
                for r in 0..big_r {
                    for s in 0..big_r {
                        let coef = half_hbar(pm::<S>(plus) * int(rd.cartan(i, j)));
                        let (hr, xs) = (h::<S>(i, r), x::<S>(rd, plus, j, s));
                        let el = h::<S>(i, r + 1)
                            .super_bracket(&xs)
                            .sub(&hr.super_bracket(&x(rd, plus, j, s + 1)))
                            .sub(&hr.anti_bracket(&xs).scale_poly(&coef));
                        rs.push("h-shift", &format!("{};{i},{j};{r},{s}", sign_char(plus)), el);
                        let xr = x::<S>(rd, plus, i, r);
                        let el = x::<S>(rd, plus, i, r + 1)
                            .super_bracket(&xs)
                            .sub(&xr.super_bracket(&x(rd, plus, j, s + 1)))
                            .sub(&xr.anti_bracket(&xs).scale_poly(&coef));
                        rs.push("x-shift", &format!("{};{i},{j};{r},{s}", sign_char(plus)), el);
                    }
                }
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            if i == j {
                continue;
            }
            let n = serre_exponent(rd, i, j) as usize;
            for plus in [true, false] {
                for levels in multisets(n, big_r, 0) {
                    for s in 0..=big_r {
                        let mut el = Element::zero();
                        for perm in distinct_permutations(&levels) {
                            let mut acc = x::<S>(rd, plus, j, s);
                            for &r in perm.iter().rev() {
                                acc = x::<S>(rd, plus, i, r).super_bracket(&acc);
                            }
                            el.add_assign(&acc);
                        }
                        let lv: Vec<String> = levels.iter().map(|v| v.to_string()).collect();
                        rs.push("serre-sym", &format!("{};{i},{j};{};{s}", sign_char(plus), lv.join(",")), el);
                    }
                }
            }
        }
    }
    for &i in &idx {
        if rd.is_odd(i) {
            for plus in [true, false] {
                for r in 0..=big_r {
                    for s in r..=big_r {
                        let el = x::<S>(rd, plus, i, r).super_bracket(&x(rd, plus, i, s));
                        rs.push("odd-self", &format!("{};{i};{r},{s}", sign_char(plus)), el);
                    }
                }
            }
        }
    }
    for &t in &idx {
        if rd.is_odd(t) {
            for plus in [true, false] {
                for r in 0..=big_r {
                    for s in 0..=big_r {
                        if let Some(el) = quartic(rd, plus, t, r, s) {
                            rs.push("quartic", &format!("{};{t};{r},{s}", sign_char(plus)), el);
                        }
                    }
                }
            }
        }
    }
    Ok(rs)
}

/// Images of the level-0 and level-1 generators of one simple root under the
/// reflection in `i`, written in generators of the target datum `t`.
struct ReflectionImages<S: Scalar> {
    x0: [Element<S>; 2],
    x1: [Element<S>; 2],
    h0: Element<S>,
    ht: Element<S>,
}

fn reflection_images<S: Scalar>(rd: &RootDatum, t: &RootDatum, i: usize, j: usize, corrected: bool) -> ReflectionImages<S> {
    // Without corrections only the leading terms are kept: the hbar-free part
    // written over h~ and the level-one generators.
    let on = if corrected { S::one() } else { S::zero() };
    let tx = |plus: bool, k: usize, r: usize| x::<S>(t, plus, k, r);
    let a = rd.cartan(i, j);
    if j == i {
        // x+ goes to -x-; x- goes to eps*x+ with eps = -1 (even) or +1 (odd),
        // the sign that keeps [x+, x-] = h.
        let eps: S = if rd.is_odd(i) { S::one() } else { -S::one() };
        let hi = h::<S>(i, 0);
        let corr = |plus: bool| hi.anti_bracket(&tx(plus, i, 0)).scale_poly(&half_hbar(on.clone()));
        let cii = t.cartan(i, i);
        return ReflectionImages {
            x0: [tx(false, i, 0).neg(), tx(true, i, 0).scale(&eps)],
            x1: [corr(false).sub(&tx(false, i, 1)), tx(true, i, 1).sub(&corr(true)).scale(&eps)],
            h0: hi.neg(),
            ht: htilde::<S>(i)
                .neg()
                .sub(&tx(true, i, 0).anti_bracket(&tx(false, i, 0)).scale_poly(&half_hbar(int::<S>(cii) * on.clone()))),
        };
    }
    if a == 0 {
        return ReflectionImages {
            x0: [tx(true, j, 0), tx(false, j, 0)],
            x1: [tx(true, j, 1), tx(false, j, 1)],
            h0: h(j, 0),
            ht: htilde(j),
        };
    }
    // Neighbour: x(j) goes to s[x(i), x(j)] in the target. The product of the
    // two signs is fixed by [T x+, T x-] = h_i + h_j; the x+ sign follows the
    // tabulated rows.
    let c = t.cartan(i, j);
    let graded = if t.parity_of(i) * t.parity_of(j) == 1 { -1 } else { 1 };
    let s_plus: i64 = if rd.is_odd(i) && rd.is_odd(j) { -1 } else { 1 };
    let s_minus = s_plus * graded * c;
    let br = |plus: bool, r: usize, s: i64| tx(plus, i, 0).super_bracket(&tx(plus, j, r)).scale(&int::<S>(s));
    ReflectionImages {
        x0: [br(true, 0, s_plus), br(false, 0, s_minus)],
        x1: [br(true, 1, s_plus), br(false, 1, s_minus)],
        h0: h::<S>(i, 0).add(&h(j, 0)),
        ht: htilde::<S>(i)
            .add(&htilde(j))
            .sub(&tx(true, i, 0).anti_bracket(&tx(false, i, 0)).scale_poly(&half_hbar(int::<S>(c) * on))),
    }
}

/// Quantum reflection in the simple root `i`: a map from the minimalistic
/// catalog of `rd` into the minimalistic algebra of the reflected datum,
/// which is returned alongside. h(j,1) is sent to T(h~) + (hbar/2) T(h(j,0))^2.
pub fn quantum_reflection<S: Scalar>(rd: &RootDatum, i: usize) -> Result<(GeneratorMap<S>, RootDatum)> {
    rd.check_index(i)?;
    let target = reflect_simple(rd, i)?.new_datum;
    let mut map = GeneratorMap::new(&format!("T{i}"), &rd.word_string(), &target.word_string());
    for j in rd.indices() {
        let im = reflection_images::<S>(rd, &target, i, j, true);
        let p = rd.parity_of(j);
        let h1 = im.ht.add(&im.h0.multiply(&im.h0).scale_poly(&half_hbar(S::one())));
        for (k, plus) in [true, false].into_iter().enumerate() {
            map.insert(GeneratorId::x(plus, j, 0, p), im.x0[k].clone());
            map.insert(GeneratorId::x(plus, j, 1, p), im.x1[k].clone());
        }
        map.insert(GeneratorId::h(j, 0), im.h0);
        map.insert(GeneratorId::h(j, 1), h1);
    }
    Ok((map, target))
}

/// Image of h~(j,1) under the quantum reflection, for residual bookkeeping.
pub fn quantum_reflection_htilde<S: Scalar>(rd: &RootDatum, i: usize, j: usize) -> Result<Element<S>> {
    rd.check_index(i)?;
    rd.check_index(j)?;
    let target = reflect_simple(rd, i)?.new_datum;
    Ok(reflection_images::<S>(rd, &target, i, j, true).ht)
}

/// Leading terms of the quantum reflection on h~(j,1) and x+-(j,1), with the
/// quadratic level-zero corrections dropped. Returns (h~, [x+, x-]).
pub fn reflection_leading<S: Scalar>(rd: &RootDatum, i: usize, j: usize) -> Result<(Element<S>, [Element<S>; 2])> {
    rd.check_index(i)?;
    rd.check_index(j)?;
    let target = reflect_simple(rd, i)?.new_datum;
    let im = reflection_images::<S>(rd, &target, i, j, false);
    Ok((im.ht, im.x1))
}

/// Lie-level restriction of the quantum reflection at an odd root.
pub fn classical_reflection_map<S: Scalar>(rd: &RootDatum, i: usize) -> Result<(GeneratorMap<S>, RootDatum)> {
    rd.check_index(i)?;
    if !rd.is_odd(i) {
        return Err(Error::EvenRoot(i));
    }
    let (full, target) = quantum_reflection::<S>(rd, i)?;
    let mut map = GeneratorMap::new(&format!("phi{i}"), &full.source, &full.target);
    for g in lie_catalog(rd) {
        map.insert(g, full.image(&g)?.clone());
    }
    Ok((map, target))
}

/// Level-one relations that the odd reflection at `i` must carry to relations:
/// the h~/x commutators and x-shifts whose indices all lie in {i-1, i, i+1}.
pub fn reflection_suite<S: Scalar>(rd: &RootDatum, i: usize) -> Result<RelationSet<S>> {
    rd.check_index(i)?;
    if !rd.is_odd(i) {
        return Err(Error::EvenRoot(i));
    }
    let near: Vec<usize> = std::iter::once(i).chain(rd.prev(i)).chain(rd.next(i)).collect();
    let mut rs = minimalistic_relations::<S>(rd);
    rs.name = format!("{} (near {i})", rs.name);
    rs.relations.retain(|r| {
        (r.family == "x-cartan-1" || r.family == "x-shift")
            && !r.element.is_zero()
            && r.element.generators().iter().all(|g| near.contains(&g.index()))
    });
    Ok(rs)
}

/// Neighbour used to raise levels: next(i), or prev(i) at the end of a
/// finite chain.
pub fn lift_neighbour(rd: &RootDatum, i: usize) -> usize {
    rd.next(i).or_else(|| rd.prev(i)).expect("rank at least 2")
}

/// Drinfeld generators of level <= max_level as elements of the minimalistic
/// algebra: x(i,k+1) = +-(a_{k',i})^{-1}[h~(k',1), x(i,k)] with k' the lift
/// neighbour, and h(i,k+1) = [x+(i,k+1), x-(i,0)].
pub fn drinfeld_lift<S: Scalar>(rd: &RootDatum, max_level: usize) -> Result<GeneratorMap<S>> {
    if max_level < 1 {
        return Err(Error::InvalidCutoff(max_level as i64));
    }
    if rd.rank() < 2 {
        return Err(Error::Unsupported("lift needs at least two simple roots".into()));
    }
    let w = rd.word_string();
    let mut map = GeneratorMap::new("drinfeld-lift", &w, &w);
    for g in minimalistic_catalog(rd) {
        map.insert(g, Element::gen(g));
    }
    for i in rd.indices() {
        let k = lift_neighbour(rd, i);
        let a = rd.cartan(k, i);
        assert!(a != 0, "consecutive roots pair nontrivially");
        let ht = htilde::<S>(k);
        let p = rd.parity_of(i);
        for r in 1..max_level {
            for plus in [true, false] {
                let prev = map.image(&GeneratorId::x(plus, i, r, p))?.clone();
                let img = ht.super_bracket(&prev).scale(&(pm::<S>(plus) / int(a)));
                map.insert(GeneratorId::x(plus, i, r + 1, p), img);
            }
            let hp = map
                .image(&GeneratorId::xp(i, r + 1, p))?
                .super_bracket(map.image(&GeneratorId::xm(i, 0, p))?);
            map.insert(GeneratorId::h(i, r + 1), hp);
        }
    }
    Ok(map)
}

pub fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Rows (m, n, k) by columns (j-1, j, j+1) of the Cartan matrix and the
/// determinant of that block.
pub fn serre_block_determinant(rd: &RootDatum, j: usize, rows: (usize, usize, usize)) -> Result<([[i64; 3]; 3], i64)> {
    rd.check_index(j)?;
    let (p, n) = both_neighbours(rd, j).ok_or(Error::InvalidIndex(j))?;
    for r in [rows.0, rows.1, rows.2] {
        rd.check_index(r)?;
    }
    let cols = [p, j, n];
    let mut block = [[0i64; 3]; 3];
    for (a, &r) in [rows.0, rows.1, rows.2].iter().enumerate() {
        for (b, &c) in cols.iter().enumerate() {
            block[a][b] = rd.cartan(r, c);
        }
    }
    Ok((block, det3(&block)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn kac_moody_counts() {
        let rd = RootDatum::parse("EED", false).unwrap();
        let rs = kac_moody_relations::<Q>(&rd);
        assert_eq!(rs.len(), 22);
        assert_eq!(rs.family("serre").count(), 4);
        assert_eq!(rs.family("odd-self").count(), 2);
        rs.validate().unwrap();
        let xp2 = x::<Q>(&rd, true, 2, 0);
        assert_eq!(rs.get("odd-self[+;2]").unwrap().element, xp2.super_bracket(&xp2));
    }

    #[test]
    fn minimalistic_catalog_size() {
        let rd = RootDatum::parse("EEEDD", true).unwrap();
        assert_eq!(minimalistic_catalog(&rd).len(), 30);
        let rs = minimalistic_relations::<Q>(&rd);
        rs.validate().unwrap();
        assert_eq!(rs.family("quartic").count(), 4);
    }

    #[test]
    fn drinfeld_catalog_matches_minimalistic() {
        let rd = RootDatum::parse("EEEDD", true).unwrap();
        let rs = drinfeld_relations::<Q>(&rd, 1).unwrap();
        assert_eq!(rs.catalog, minimalistic_catalog(&rd));
        rs.validate().unwrap();
        assert!(drinfeld_relations::<Q>(&rd, 0).is_err());
    }

    #[test]
    fn permutations() {
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(multisets(2, 1, 0), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn reflections_preserve_parity() {
        for w in ["EED", "EDE", "EEEDD", "EDEDE"] {
            for affine in [false, true] {
                let rd = RootDatum::parse(w, affine).unwrap();
                for i in rd.indices() {
                    let (map, _) = quantum_reflection::<Q>(&rd, i).unwrap();
                    map.check_parity().unwrap();
                    assert_eq!(map.images.len(), 6 * rd.rank());
                }
            }
        }
    }

    #[test]
    fn lift_is_identity_at_level_one() {
        let rd = RootDatum::parse("EEEDD", true).unwrap();
        let map = drinfeld_lift::<Q>(&rd, 1).unwrap();
        for (g, img) in &map.images {
            assert_eq!(img, &Element::gen(*g));
        }
    }

    #[test]
    fn serre_block() {
        let rd = RootDatum::parse("EEDD", true).unwrap();
        let (_, d) = serre_block_determinant(&rd, 2, (2, 2, 2)).unwrap();
        assert_eq!(d, 0);
    }
}
