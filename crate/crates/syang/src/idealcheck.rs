//! Bounded two-sided ideal membership in the free superalgebra and its tensor
//! powers, and homomorphism checks built on it.
//!
//! Every relation is homogeneous for the weight grading (x+ of alpha_i has
//! weight alpha_i) and for the degree deg(hbar) = 1, deg(generator of level
//! r) = r. On a component of fixed degree D the monomials hbar^k w are in
//! bijection with words w of level at most D, so elimination runs over Q at
//! hbar = 1 and a witness is lifted back by restoring hbar^(D - deg).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::HbarPoly;
use crate::presentations::{lift_neighbour, Relation, RelationSet};
use crate::report::{Outcome, Report, ReportEntry};
use crate::roots::RootDatum;
use crate::scalar::Scalar;
use crate::superfree::{Element, GenKind, GeneratorId, GeneratorMap, TensorElement, Word};

type Weight = Vec<i64>;
type Key = (Weight, usize);

fn gen_weight(rd: &RootDatum, g: &GeneratorId) -> (usize, i64) {
    let sign = match g.kind {
        GenKind::Xplus => 1,
        GenKind::Xminus => -1,
        _ => 0,
    };
    (rd.pos(g.index()), sign)
}

pub fn word_weight(rd: &RootDatum, w: &Word) -> Weight {
    let mut v = vec![0i64; rd.rank()];
    for g in &w.0 {
        let (p, s) = gen_weight(rd, g);
        v[p] += s;
    }
    v
}

/// Homogeneous components keyed by (weight, degree).
pub fn components<S: Scalar>(rd: &RootDatum, a: &Element<S>) -> BTreeMap<Key, Element<S>> {
    let mut out: BTreeMap<Key, Element<S>> = BTreeMap::new();
    for (w, c) in a.terms() {
        let wt = word_weight(rd, w);
        for (k, v) in c.coeffs().iter().enumerate() {
            if !v.is_zero() {
                out.entry((wt.clone(), w.level() + k))
                    .or_default()
                    .add_term(w.clone(), &HbarPoly::monomial(v.clone(), k));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Prepared<S: Scalar> {
    label: String,
    element: Element<S>,
    weight: Weight,
    degree: usize,
    max_len: usize,
    /// The relation at hbar = 1.
    special: Vec<(Word, S)>,
}

fn prepare<S: Scalar>(rd: &RootDatum, label: &str, el: &Element<S>) -> Result<Option<Prepared<S>>> {
    if el.is_zero() {
        return Ok(None);
    }
    let comps = components(rd, el);
    if comps.len() != 1 {
        return Err(Error::Inhomogeneous(label.into()));
    }
    let ((weight, degree), _) = comps.into_iter().next().expect("one component");
    let one = S::one();
    let special = el.terms().map(|(w, c)| (w.clone(), c.eval(&one))).collect();
    Ok(Some(Prepared { label: label.into(), element: el.clone(), weight, degree, max_len: el.max_word_len(), special }))
}

/// A summand coeff * left . relation . right of a membership certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm<S: Scalar> {
    pub coeff: HbarPoly<S>,
    pub left: Word,
    pub relation: String,
    pub right: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<S: Scalar> {
    Member { witness: Vec<WitnessTerm<S>> },
    NotFound { bound: usize, support: Vec<GeneratorId> },
}

impl<S: Scalar> Verdict<S> {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member { .. })
    }

    pub fn witness_json(&self) -> Option<Value> {
        match self {
            Verdict::Member { witness } => Some(Value::Array(
                witness
                    .iter()
                    .map(|t| json!({
                        "coeff": t.coeff.to_string(),
                        "left": t.left.to_string(),
                        "relation": t.relation,
                        "right": t.right.to_string(),
                    }))
                    .collect(),
            )),
            Verdict::NotFound { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Origin {
    relation: usize,
    left: Word,
    right: Word,
    hbar_power: usize,
}

#[derive(Clone, Debug)]
struct Pivot<S: Scalar> {
    /// Sorted by descending word id; entry 0 is the leading term.
    row: Vec<(u32, S)>,
    origin: usize,
    /// Multiples of earlier pivots subtracted from the origin row.
    steps: Vec<(usize, S)>,
}

/// Echelon basis of one homogeneous component of the bounded ideal.
#[derive(Debug)]
struct Component<S: Scalar> {
    words: Vec<Word>,
    ids: HashMap<Word, u32>,
    origins: Vec<Origin>,
    pivots: Vec<Pivot<S>>,
    lead: HashMap<u32, usize>,
}

fn axpy<S: Scalar>(row: &[(u32, S)], c: &S, piv: &[(u32, S)]) -> Vec<(u32, S)> {
    // row - c * piv, both sorted by descending id.
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        if j == piv.len() || (i < row.len() && row[i].0 > piv[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i == row.len() || piv[j].0 > row[i].0 {
            out.push((piv[j].0, -(c.clone() * piv[j].1.clone())));
            j += 1;
        } else {
            let v = row[i].1.clone() - c.clone() * piv[j].1.clone();
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<S: Scalar> Component<S> {
    /// Head-reduces `row`; returns the remainder and the multipliers used.
    fn head_reduce(&self, mut row: Vec<(u32, S)>) -> (Vec<(u32, S)>, Vec<(usize, S)>) {
        let mut steps = Vec::new();
        while let Some((lead, c)) = row.first().cloned() {
            let Some(&p) = self.lead.get(&lead) else { break };
            let piv = &self.pivots[p];
            let f = c / piv.row[0].1.clone();
            row = axpy(&row, &f, &piv.row);
            steps.push((p, f));
        }
        (row, steps)
    }

    /// Full reduction: no remaining word is a pivot lead.
    fn normal_form(&self, row: Vec<(u32, S)>) -> (Vec<(u32, S)>, Vec<(usize, S)>) {
        let mut rest = row;
        let mut out = Vec::new();
        let mut steps = Vec::new();
        loop {
            let (r, s) = self.head_reduce(rest);
            steps.extend(s);
            if r.is_empty() {
                break;
            }
            out.push(r[0].clone());
            rest = r[1..].to_vec();
        }
        (out, steps)
    }

    /// Origin-row coefficients of sum_k c_k * pivot_k.
    fn expand(&self, mult: &[(usize, S)]) -> BTreeMap<usize, S> {
        let mut acc: BTreeMap<usize, S> = BTreeMap::new();
        // Pivot k only references pivots < k, so expanding from the top down
        // visits each pivot once.
        let mut pending: BTreeMap<usize, S> = BTreeMap::new();
        for (p, c) in mult {
            let e = pending.entry(*p).or_insert_with(S::zero);
            *e = e.clone() + c.clone();
        }
        while let Some((p, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            let piv = &self.pivots[p];
            let e = acc.entry(piv.origin).or_insert_with(S::zero);
            *e = e.clone() + c.clone();
            for (q, f) in &piv.steps {
                let e = pending.entry(*q).or_insert_with(S::zero);
                *e = e.clone() - c.clone() * f.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }

    fn to_row(&self, terms: &[(Word, S)]) -> Option<Vec<(u32, S)>> {
        let mut row = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            row.push((*self.ids.get(w)?, c.clone()));
        }
        row.sort_by_key(|e| std::cmp::Reverse(e.0));
        Some(row)
    }
}

/// The bounded ideal generated by a relation set, restricted to words over a
/// support. Components are echelonized lazily and cached.
pub struct SpanBasis<S: Scalar> {
    pub support: BTreeSet<GeneratorId>,
    pub bound: usize,
    datum: RootDatum,
    relations: Vec<Prepared<S>>,
    /// Words over the support of length <= bound - shortest relation, by weight.
    padding: HashMap<Weight, Vec<Word>>,
    cache: Mutex<HashMap<Key, Arc<OnceLock<Arc<Component<S>>>>>>,
}

impl<S: Scalar> std::fmt::Debug for SpanBasis<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpanBasis").field("support", &self.support).field("bound", &self.bound).finish()
    }
}

fn all_words(support: &[GeneratorId], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * support.len());
        for w in &layer {
            for g in support {
                let mut v = w.0.clone();
                v.push(*g);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Bounded ideal of `rs` over words in `support` of length at most `bound`.
/// Relations using generators outside the support are left out.
pub fn ideal_span<S: Scalar>(rs: &RelationSet<S>, support: &BTreeSet<GeneratorId>, bound: usize) -> Result<SpanBasis<S>> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let catalog: BTreeSet<GeneratorId> = rs.catalog.iter().copied().collect();
    if let Some(g) = support.iter().find(|g| !catalog.contains(g)) {
        return Err(Error::OutsideSupport(*g));
    }
    let mut relations: Vec<Prepared<S>> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for r in &rs.relations {
        if !r.element.generators().is_subset(support) {
            continue;
        }
        if let Some(p) = prepare(&rs.datum, &r.label, &r.element)? {
            // Drop exact duplicates up to sign, e.g. [h_i,h_j] and [h_j,h_i].
            let key = r.element.to_string();
            let neg = r.element.neg().to_string();
            if seen.contains(&key) || seen.contains(&neg) {
                continue;
            }
            seen.insert(key);
            relations.push(p);
        }
    }
    let needed = relations.iter().map(|r| r.max_len).max().unwrap_or(0);
    if needed > bound {
        return Err(Error::BoundTooSmall { bound, needed });
    }
    let shortest = relations.iter().map(|r| r.max_len).min().unwrap_or(bound);
    let sup: Vec<GeneratorId> = support.iter().copied().collect();
    let mut padding: HashMap<Weight, Vec<Word>> = HashMap::new();
    for w in all_words(&sup, bound.saturating_sub(shortest)) {
        padding.entry(word_weight(&rs.datum, &w)).or_default().push(w);
    }
    Ok(SpanBasis {
        support: support.clone(),
        bound,
        datum: rs.datum.clone(),
        relations,
        padding,
        cache: Mutex::new(HashMap::new()),
    })
}

impl<S: Scalar> SpanBasis<S> {
    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    fn component(&self, key: &Key) -> Arc<Component<S>> {
        let cell = {
            let mut cache = self.cache.lock().expect("cache lock");
            cache.entry(key.clone()).or_default().clone()
        };
        cell.get_or_init(|| Arc::new(self.build(key))).clone()
    }

    fn build(&self, key: &Key) -> Component<S> {
        let (weight, degree) = key;
        let mut origins = Vec::new();
        let mut rows: Vec<Vec<(Word, S)>> = Vec::new();
        let empty = Vec::new();
        for (ri, rel) in self.relations.iter().enumerate() {
            if rel.degree > *degree || rel.max_len > self.bound {
                continue;
            }
            let len_budget = self.bound - rel.max_len;
            let deg_budget = degree - rel.degree;
            let rest: Weight = weight.iter().zip(&rel.weight).map(|(a, b)| a - b).collect();
            for (lw, lefts) in &self.padding {
                let need: Weight = rest.iter().zip(lw).map(|(a, b)| a - b).collect();
                let rights = self.padding.get(&need).unwrap_or(&empty);
                for u in lefts {
                    if u.len() > len_budget || u.level() > deg_budget {
                        continue;
                    }
                    for v in rights {
                        if u.len() + v.len() > len_budget || u.level() + v.level() > deg_budget {
                            continue;
                        }
                        let row: Vec<(Word, S)> = rel
                            .special
                            .iter()
                            .map(|(w, c)| (u.concat(w).concat(v), c.clone()))
                            .collect();
                        origins.push(Origin {
                            relation: ri,
                            left: u.clone(),
                            right: v.clone(),
                            hbar_power: deg_budget - u.level() - v.level(),
                        });
                        rows.push(row);
                    }
                }
            }
        }
        // Deterministic order: origins sorted by (relation, left, right).
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by(|&a, &b| {
            let (oa, ob) = (&origins[a], &origins[b]);
            (oa.relation, &oa.left, &oa.right).cmp(&(ob.relation, &ob.left, &ob.right))
        });
        let origins: Vec<Origin> = order.iter().map(|&k| origins[k].clone()).collect();
        let rows: Vec<Vec<(Word, S)>> = order.iter().map(|&k| std::mem::take(&mut rows[k])).collect();
        let word_set: BTreeSet<Word> = rows.iter().flat_map(|r| r.iter().map(|(w, _)| w.clone())).collect();
        let words: Vec<Word> = word_set.into_iter().collect();
        let ids: HashMap<Word, u32> = words.iter().enumerate().map(|(k, w)| (w.clone(), k as u32)).collect();
        let mut comp = Component { words, ids, origins, pivots: Vec::new(), lead: HashMap::new() };
        for (k, r) in rows.iter().enumerate() {
            let row = comp.to_row(r).expect("words registered");
            let (row, steps) = comp.head_reduce(row);
            if let Some((lead, _)) = row.first() {
                comp.lead.insert(*lead, comp.pivots.len());
                comp.pivots.push(Pivot { row, origin: k, steps });
            }
        }
        comp
    }

    /// Dimension of the bounded ideal in one homogeneous component.
    pub fn dimension(&self, weight: &[i64], degree: usize) -> usize {
        self.component(&(weight.to_vec(), degree)).pivots.len()
    }

    fn check_input(&self, a: &Element<S>) -> Result<()> {
        if let Some(g) = a.generators().into_iter().find(|g| !self.support.contains(g)) {
            return Err(Error::OutsideSupport(g));
        }
        if a.max_word_len() > self.bound {
            return Err(Error::LengthBound { len: a.max_word_len(), bound: self.bound });
        }
        Ok(())
    }

    fn witness_terms(&self, comp: &Component<S>, mult: &[(usize, S)]) -> Vec<WitnessTerm<S>> {
        comp.expand(mult)
            .into_iter()
            .map(|(o, c)| {
                let org = &comp.origins[o];
                WitnessTerm {
                    coeff: HbarPoly::monomial(c, org.hbar_power),
                    left: org.left.clone(),
                    relation: self.relations[org.relation].label.clone(),
                    right: org.right.clone(),
                }
            })
            .collect()
    }

    /// Sum of coeff * left . relation . right.
    pub fn reexpand(&self, witness: &[WitnessTerm<S>]) -> Element<S> {
        let by_label: HashMap<&str, &Element<S>> =
            self.relations.iter().map(|r| (r.label.as_str(), &r.element)).collect();
        let mut out = Element::zero();
        for t in witness {
            let rel = by_label[t.relation.as_str()];
            let e = Element::from_word(t.left.clone(), HbarPoly::one())
                .multiply(rel)
                .multiply(&Element::from_word(t.right.clone(), HbarPoly::one()))
                .scale_poly(&t.coeff);
            out.add_assign(&e);
        }
        out
    }

    /// Exact membership test; member verdicts are re-expanded and compared
    /// with `a` before being returned.
    pub fn is_member(&self, a: &Element<S>) -> Result<Verdict<S>> {
        self.check_input(a)?;
        let mut witness = Vec::new();
        for (key, part) in components(&self.datum, a) {
            let comp = self.component(&key);
            let one = S::one();
            let terms: Vec<(Word, S)> = part.terms().map(|(w, c)| (w.clone(), c.eval(&one))).collect();
            let Some(row) = comp.to_row(&terms) else {
                return Ok(self.not_found());
            };
            let (rest, mult) = comp.head_reduce(row);
            if !rest.is_empty() {
                return Ok(self.not_found());
            }
            witness.extend(self.witness_terms(&comp, &mult));
        }
        if self.reexpand(&witness) != *a {
            return Err(Error::Unsupported("witness failed to re-expand".into()));
        }
        Ok(Verdict::Member { witness })
    }

    fn not_found(&self) -> Verdict<S> {
        Verdict::NotFound { bound: self.bound, support: self.support.iter().copied().collect() }
    }

    /// Normal form of a single word modulo the bounded ideal, with hbar
    /// restored, and a witness for word - normal form.
    pub fn word_normal_form(&self, w: &Word) -> (Element<S>, Vec<WitnessTerm<S>>) {
        let plain = Element::from_word(w.clone(), HbarPoly::one());
        if w.len() > self.bound || !w.0.iter().all(|g| self.support.contains(g)) {
            return (plain, Vec::new());
        }
        let key = (word_weight(&self.datum, w), w.level());
        let comp = self.component(&key);
        let Some(&id) = comp.ids.get(w) else {
            return (plain, Vec::new());
        };
        let (nf, mult) = comp.normal_form(vec![(id, S::one())]);
        let mut out = Element::zero();
        for (id, c) in nf {
            let u = &comp.words[id as usize];
            out.add_term(u.clone(), &HbarPoly::monomial(c, key.1 - u.level()));
        }
        (out, self.witness_terms(&comp, &mult))
    }

    /// Normal form of an element, componentwise.
    pub fn normal_form(&self, a: &Element<S>) -> Element<S> {
        let mut out = Element::zero();
        for (w, c) in a.terms() {
            out.add_assign(&self.word_normal_form(w).0.scale_poly(c));
        }
        out
    }
}

/// Membership of a tensor in the ideal generated by rho@1@.. and its
/// placements in every slot: reduce every factor to normal form; the tensor
/// is a member exactly when the fully reduced tensor vanishes. The witness
/// lists the factor reductions; each one is re-expanded before returning.
pub fn tensor_member<S: Scalar>(span: &SpanBasis<S>, a: &TensorElement<S>) -> Result<(Verdict<S>, TensorElement<S>)> {
    let mut cache: HashMap<Word, (Element<S>, Vec<WitnessTerm<S>>)> = HashMap::new();
    for (ws, _) in a.terms() {
        for w in ws {
            if !cache.contains_key(w) {
                cache.insert(w.clone(), span.word_normal_form(w));
            }
        }
    }
    let mut reduced = TensorElement::zero(a.arity);
    for (ws, c) in a.terms() {
        let factors: Vec<&Element<S>> = ws.iter().map(|w| &cache[w].0).collect();
        reduced.add_assign(&TensorElement::tensor(&factors).scale_poly(c));
    }
    if !reduced.is_zero() {
        return Ok((span.not_found(), reduced));
    }
    let mut witness = Vec::new();
    for (w, (nf, wit)) in &cache {
        let diff = Element::from_word(w.clone(), HbarPoly::one()).sub(nf);
        if span.reexpand(wit) != diff {
            return Err(Error::Unsupported("factor witness failed to re-expand".into()));
        }
        witness.extend(wit.iter().cloned());
    }
    Ok((Verdict::Member { witness }, reduced))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportPolicy {
    /// Every catalog generator whose root index occurs in the element.
    Indices,
    /// As `Indices`, plus the neighbour each index is lifted through
    /// (next, or prev at the end of a finite chain).
    LiftNeighbour,
    /// As `Indices`, plus the neighbouring root indices.
    Neighbours,
    Full,
}

pub fn support_for<S: Scalar>(rs: &RelationSet<S>, gens: &BTreeSet<GeneratorId>, policy: SupportPolicy) -> BTreeSet<GeneratorId> {
    let mut idx: BTreeSet<usize> = gens.iter().map(|g| g.index()).collect();
    match policy {
        SupportPolicy::Full => return rs.catalog.iter().copied().collect(),
        SupportPolicy::Neighbours => {
            let extra: Vec<usize> = idx
                .iter()
                .flat_map(|&i| [rs.datum.prev(i), rs.datum.next(i)])
                .flatten()
                .collect();
            idx.extend(extra);
        }
        SupportPolicy::LiftNeighbour => {
            if rs.datum.rank() >= 2 {
                let extra: Vec<usize> = idx.iter().map(|&i| lift_neighbour(&rs.datum, i)).collect();
                idx.extend(extra);
            }
        }
        SupportPolicy::Indices => {}
    }
    rs.catalog.iter().copied().filter(|g| idx.contains(&g.index())).collect()
}

/// Spans shared between checks with the same support.
pub struct SpanPool<'a, S: Scalar> {
    rs: &'a RelationSet<S>,
    bound: usize,
    /// Raise the bound to the element's own word length when it is longer.
    pub stretch: bool,
    spans: Mutex<HashMap<(Vec<GeneratorId>, usize), Arc<OnceLock<Result<Arc<SpanBasis<S>>>>>>>,
}

impl<'a, S: Scalar> SpanPool<'a, S> {
    pub fn new(rs: &'a RelationSet<S>, bound: usize) -> Self {
        SpanPool { rs, bound, stretch: false, spans: Mutex::new(HashMap::new()) }
    }

    pub fn stretched(rs: &'a RelationSet<S>, bound: usize) -> Self {
        SpanPool { stretch: true, ..Self::new(rs, bound) }
    }

    pub fn bound_for(&self, a: &Element<S>) -> usize {
        if self.stretch {
            self.bound.max(a.max_word_len())
        } else {
            self.bound
        }
    }

    pub fn span(&self, support: &BTreeSet<GeneratorId>, bound: usize) -> Result<Arc<SpanBasis<S>>> {
        let key = (support.iter().copied().collect(), bound);
        let cell = self.spans.lock().expect("pool lock").entry(key).or_default().clone();
        cell.get_or_init(|| ideal_span(self.rs, support, bound).map(Arc::new)).clone()
    }

    pub fn relations(&self) -> &RelationSet<S> {
        self.rs
    }
}

fn support_names(s: &BTreeSet<GeneratorId>) -> Vec<String> {
    s.iter().map(|g| g.to_string()).collect()
}

/// Membership of one element, as a report entry.
pub fn check_element<S: Scalar>(pool: &SpanPool<S>, label: &str, a: &Element<S>, policy: SupportPolicy) -> Result<ReportEntry> {
    let start = Instant::now();
    if a.is_zero() {
        let mut e = ReportEntry::new(label, "member", Outcome::Verified);
        e.witness = Some(Value::Array(Vec::new()));
        e.bound = Some(pool.bound);
        return Ok(e);
    }
    let support = support_for(pool.rs, &a.generators(), policy);
    let bound = pool.bound_for(a);
    let span = match pool.span(&support, bound) {
        Ok(s) => s,
        Err(Error::BoundTooSmall { .. }) => {
            let mut e = ReportEntry::new(label, "not-found-at-bound", Outcome::Inconclusive);
            e.support = support_names(&support);
            e.bound = Some(bound);
            return Ok(e);
        }
        Err(err) => return Err(err),
    };
    let verdict = match span.is_member(a) {
        Ok(v) => v,
        Err(Error::LengthBound { .. }) => span.not_found(),
        Err(err) => return Err(err),
    };
    let mut e = match &verdict {
        Verdict::Member { .. } => ReportEntry::new(label, "member", Outcome::Verified),
        Verdict::NotFound { .. } => ReportEntry::new(label, "not-found-at-bound", Outcome::Inconclusive),
    };
    e.witness = verdict.witness_json();
    e.support = support_names(&support);
    e.bound = Some(bound);
    e.elapsed_ms = start.elapsed().as_millis();
    Ok(e)
}

/// For each source relation, tests whether its image under `map` lies in the
/// bounded ideal of the target relations.
pub fn verify_hom<S: Scalar>(
    map: &GeneratorMap<S>,
    src: &RelationSet<S>,
    tgt: &RelationSet<S>,
    bound: usize,
    policy: SupportPolicy,
) -> Result<Report> {
    verify_hom_in(&SpanPool::new(tgt, bound), map, src, policy)
}

pub fn verify_hom_in<S: Scalar>(
    pool: &SpanPool<S>,
    map: &GeneratorMap<S>,
    src: &RelationSet<S>,
    policy: SupportPolicy,
) -> Result<Report> {
    let tgt = pool.relations();
    let images: Vec<(String, Element<S>)> = src
        .relations
        .iter()
        .map(|r| Ok((r.label.clone(), r.element.substitute(map)?)))
        .collect::<Result<_>>()?;
    let entries: Vec<Result<ReportEntry>> =
        images.par_iter().map(|(label, img)| check_element(pool, label, img, policy)).collect();
    let mut report = Report::new(&format!("{} : {} -> {}", map.name, src.name, tgt.name));
    for e in entries {
        report.entries.push(e?);
    }
    Ok(report)
}

/// Like `verify_hom`, retrying inconclusive relations at each larger bound
/// in turn. Every entry records the bound at which it was settled.
pub fn verify_hom_escalating<S: Scalar>(
    map: &GeneratorMap<S>,
    src: &RelationSet<S>,
    tgt: &RelationSet<S>,
    bounds: &[usize],
    policy: SupportPolicy,
) -> Result<Report> {
    let mut report = Report::new(&format!("{} : {} -> {}", map.name, src.name, tgt.name));
    let mut pending: Vec<usize> = (0..src.relations.len()).collect();
    let mut entries: Vec<Option<ReportEntry>> = vec![None; src.relations.len()];
    for &bound in bounds {
        if pending.is_empty() {
            break;
        }
        let pool = SpanPool::new(tgt, bound);
        let results: Vec<(usize, Result<ReportEntry>)> = pending
            .par_iter()
            .map(|&k| {
                let r = &src.relations[k];
                (k, r.element.substitute(map).and_then(|img| check_element(&pool, &r.label, &img, policy)))
            })
            .collect();
        pending.clear();
        for (k, e) in results {
            let e = e?;
            if e.outcome == Outcome::Inconclusive {
                pending.push(k);
            }
            entries[k] = Some(e);
        }
    }
    report.entries = entries.into_iter().flatten().collect();
    Ok(report)
}

/// Like [`verify_hom_escalating`], but source relations are taken in stages
/// of increasing top generator level, and every image proved a member joins
/// the target as a `lemma:` relation for later checks. Adding members leaves
/// the ideal unchanged; it only shortens the witnesses that the length bound
/// has to hold.
pub fn verify_hom_chained<S: Scalar>(
    map: &GeneratorMap<S>,
    src: &RelationSet<S>,
    tgt: &RelationSet<S>,
    bounds: &[usize],
    policy: SupportPolicy,
) -> Result<Report> {
    let mut report = Report::new(&format!("{} : {} -> {} (chained)", map.name, src.name, tgt.name));
    let top = |k: usize| src.relations[k].element.generators().iter().map(|g| g.level).max().unwrap_or(0);
    let mut stages: BTreeMap<u16, Vec<usize>> = BTreeMap::new();
    for k in 0..src.relations.len() {
        stages.entry(top(k)).or_default().push(k);
    }
    let images: Vec<Element<S>> = src.relations.iter().map(|r| r.element.substitute(map)).collect::<Result<_>>()?;
    let mut known = tgt.clone();
    let mut entries: Vec<Option<ReportEntry>> = vec![None; src.relations.len()];
    for (_, stage) in stages {
        let mut pending = stage;
        // Members found in one pass can unlock others of the same level.
        loop {
            let mut sub = src.clone();
            sub.relations = pending.iter().map(|&k| src.relations[k].clone()).collect();
            let rep = verify_hom_escalating(map, &sub, &known, bounds, policy)?;
            let mut still = Vec::new();
            let mut gained = false;
            for (e, &k) in rep.entries.into_iter().zip(&pending) {
                if e.outcome == Outcome::Inconclusive {
                    still.push(k);
                } else if e.outcome == Outcome::Verified && !images[k].is_zero() {
                    known.relations.push(Relation {
                        label: format!("lemma:{}", src.relations[k].label),
                        family: "lemma",
                        element: images[k].clone(),
                    });
                    gained = true;
                }
                entries[k] = Some(e);
            }
            if still.is_empty() || !gained {
                break;
            }
            pending = still;
        }
    }
    report.entries = entries.into_iter().flatten().collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{h, kac_moody_relations, minimalistic_relations, x};
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn single(label: &str, el: Element<Q>, rd: &RootDatum) -> RelationSet<Q> {
        let mut rs = kac_moody_relations::<Q>(rd);
        rs.relations.retain(|r| r.label == label);
        rs.relations[0].element = el;
        rs
    }

    #[test]
    fn relations_are_members() {
        let rd = RootDatum::parse("EED", false).unwrap();
        let rs = kac_moody_relations::<Q>(&rd);
        let support: BTreeSet<GeneratorId> = rs.catalog.iter().copied().collect();
        let span = ideal_span(&rs, &support, 4).unwrap();
        for r in &rs.relations {
            assert!(span.is_member(&r.element).unwrap().is_member(), "{}", r.label);
        }
        let x1 = x::<Q>(&rd, true, 1, 0);
        assert!(!span.is_member(&x1).unwrap().is_member());
    }

    #[test]
    fn brute_force_dimension() {
        // [h1,h2] over {h1,h2} at L = 3: w.rel.w' with one padding letter,
        // all independent: 2 left + 2 right + 1 bare = 5 in weight 0,
        // degree 0, minus nothing.
        let rd = RootDatum::parse("EED", false).unwrap();
        let el = h::<Q>(1, 0).super_bracket(&h(2, 0));
        let rs = single("hh[1,2]", el, &rd);
        let support: BTreeSet<GeneratorId> = [GeneratorId::h(1, 0), GeneratorId::h(2, 0)].into_iter().collect();
        let span = ideal_span(&rs, &support, 3).unwrap();
        assert_eq!(span.dimension(&[0, 0], 0), brute_dimension(&rs, &support, 3));
    }

    fn brute_dimension(rs: &RelationSet<Q>, support: &BTreeSet<GeneratorId>, bound: usize) -> usize {
        // Rank by dense elimination over all w.rel.w' products.
        let sup: Vec<GeneratorId> = support.iter().copied().collect();
        let rel = &rs.relations[0].element;
        let pads = all_words(&sup, bound - rel.max_word_len());
        let mut rows: Vec<Element<Q>> = Vec::new();
        for u in &pads {
            for v in &pads {
                if u.len() + v.len() + rel.max_word_len() <= bound {
                    rows.push(Element::from_word(u.clone(), HbarPoly::one()).multiply(rel).multiply(&Element::from_word(v.clone(), HbarPoly::one())));
                }
            }
        }
        let words: Vec<Word> = rows.iter().flat_map(|r| r.terms().map(|(w, _)| w.clone())).collect::<BTreeSet<_>>().into_iter().collect();
        let mut mat: Vec<Vec<Q>> = rows.iter().map(|r| words.iter().map(|w| r.coeff(w).constant_term()).collect()).collect();
        let mut rank = 0;
        for col in 0..words.len() {
            if let Some(p) = (rank..mat.len()).find(|&r| !mat[r][col].is_zero()) {
                mat.swap(rank, p);
                for r in 0..mat.len() {
                    if r != rank && !mat[r][col].is_zero() {
                        let f = mat[r][col].clone() / mat[rank][col].clone();
                        let pivot = mat[rank].clone();
                        for (c, v) in mat[r].iter_mut().enumerate() {
                            *v = v.clone() - f.clone() * pivot[c].clone();
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn weight_relation_instance() {
        let rd = RootDatum::parse("EEEDD", true).unwrap();
        let rs = minimalistic_relations::<Q>(&rd);
        let pool = SpanPool::new(&rs, 3);
        let (h2, xp) = (h::<Q>(2, 0), x::<Q>(&rd, true, 1, 1));
        let el = h2.multiply(&xp).sub(&xp.multiply(&h2)).add(&xp);
        let e = check_element(&pool, "sample", &el, SupportPolicy::Indices).unwrap();
        assert_eq!(e.verdict, "member");
    }

    #[test]
    fn tensor_membership() {
        let rd = RootDatum::parse("EED", false).unwrap();
        let rs = kac_moody_relations::<Q>(&rd);
        let support: BTreeSet<GeneratorId> = rs.catalog.iter().copied().collect();
        let span = ideal_span(&rs, &support, 3).unwrap();
        let rho = &rs.relations[5].element;
        let t = TensorElement::boxed(rho);
        assert!(tensor_member(&span, &t).unwrap().0.is_member());
        let x1 = x::<Q>(&rd, true, 1, 0);
        let bad = TensorElement::tensor(&[&x1, &x1]);
        assert!(!tensor_member(&span, &bad).unwrap().0.is_member());
    }
}
