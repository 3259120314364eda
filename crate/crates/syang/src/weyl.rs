//! Even and odd reflections of simple root systems, groupoid words and the
//! odd-reflection orbit of a distinguished datum.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::roots::{bilinear, distinguished_word, word_string, Letter, RootDatum, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectionKind {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionResult {
    pub new_datum: RootDatum,
    /// Image of each simple root of the source datum, in storage order.
    pub root_images: Vec<WeightVector>,
    pub kind: ReflectionKind,
}

/// Images of a simple system `roots` under the reflection in `roots[pos]`.
/// Odd: alpha_i goes to -alpha_i, alpha_j to alpha_j + alpha_i when that is a
/// root, otherwise alpha_j is fixed. Even: the usual reflection formula.
fn reflect_roots(rd: &RootDatum, roots: &[WeightVector], pos: usize, odd: bool) -> Vec<WeightVector> {
    let ai = roots[pos].clone();
    if !odd {
        let norm = bilinear(&ai, &ai).expect("same shape");
        return roots
            .iter()
            .map(|lam| {
                let k = 2 * bilinear(lam, &ai).expect("same shape") / norm;
                lam - &ai.scaled(k)
            })
            .collect();
    }
    roots
        .iter()
        .enumerate()
        .map(|(q, lam)| {
            if q == pos {
                -&ai
            } else {
                let shifted = lam + &ai;
                if rd.is_real_root(&shifted) {
                    shifted
                } else {
                    lam.clone()
                }
            }
        })
        .collect()
}

fn swapped_word(rd: &RootDatum, i: usize) -> Result<RootDatum> {
    let (a, b) = rd.letter_pair(i);
    let mut word = rd.word.clone();
    word.swap(a, b);
    RootDatum::new(&word, rd.affine)
}

/// Reflection in the simple root with index `i`.
///
/// For odd reflections away from alpha_0 the images coincide with the simple
/// roots of the new datum. Through alpha_0 they agree with them only up to a
/// relabelling of weights and a shift by the null root.
pub fn reflect_simple(rd: &RootDatum, i: usize) -> Result<ReflectionResult> {
    rd.check_index(i)?;
    let odd = rd.is_odd(i);
    let root_images = reflect_roots(rd, &rd.simple_roots, rd.pos(i), odd);
    if !odd {
        return Ok(ReflectionResult { new_datum: rd.clone(), root_images, kind: ReflectionKind::Even });
    }
    Ok(ReflectionResult { new_datum: swapped_word(rd, i)?, root_images, kind: ReflectionKind::Odd })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidWord {
    pub start: RootDatum,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordResult {
    pub datum: RootDatum,
    /// Image of each simple root of the start datum under the composite.
    pub root_images: Vec<WeightVector>,
}

/// Left-to-right composition of simple reflections. The composite images
/// are tracked as actual weights in the start datum's labelling; step `k`
/// reflects in the root currently sitting at the given index.
pub fn apply_word(w: &GroupoidWord) -> Result<WordResult> {
    let mut current = w.start.clone();
    let mut images = w.start.simple_roots.clone();
    for (step, &i) in w.indices.iter().enumerate() {
        if !current.is_valid_index(i) {
            return Err(Error::InvalidWordStep { step, index: i });
        }
        let odd = current.is_odd(i);
        images = reflect_roots(&current, &images, current.pos(i), odd);
        if odd {
            current = swapped_word(&current, i)?;
        }
    }
    Ok(WordResult { datum: current, root_images: images })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub nodes: Vec<String>,
    /// (from, to, index of the odd reflection), sorted.
    pub edges: Vec<(String, String, usize)>,
}

impl Orbit {
    pub fn to_json(&self) -> Value {
        json!({
            "nodes": self.nodes,
            "edges": self.edges.iter().map(|(a, b, i)| json!([a, b, i])).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph orbit {\n");
        for n in &self.nodes {
            s.push_str(&format!("  \"{n}\";\n"));
        }
        for (a, b, i) in &self.edges {
            s.push_str(&format!("  \"{a}\" -> \"{b}\" [label=\"{i}\"];\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn default_orbit_depth(m: usize, n: usize) -> usize {
    2 * (m + n) * (m + n)
}

/// Breadth-first closure of E^m D^n under odd reflections. Nodes are exact
/// words; even reflections fix the word and contribute no edges.
pub fn orbit(m: usize, n: usize, affine: bool, max_depth: usize) -> Result<Orbit> {
    let start = RootDatum::new(&distinguished_word(m, n), affine)?;
    let mut seen: BTreeMap<Vec<Letter>, (usize, RootDatum)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.word.clone(), (0, start.clone()));
    queue.push_back(start);
    while let Some(rd) = queue.pop_front() {
        let depth = seen[&rd.word].0;
        if depth >= max_depth {
            continue;
        }
        for i in rd.indices() {
            if rd.is_odd(i) {
                let r = reflect_simple(&rd, i)?;
                if !seen.contains_key(&r.new_datum.word) {
                    seen.insert(r.new_datum.word.clone(), (depth + 1, r.new_datum.clone()));
                    queue.push_back(r.new_datum);
                }
            }
        }
    }
    // Edges are collected afterwards so that every reflection between two
    // retained nodes appears, including those leaving the last BFS layer.
    let mut edges = BTreeSet::new();
    for (_, rd) in seen.values() {
        for i in rd.indices() {
            if rd.is_odd(i) {
                let r = reflect_simple(rd, i)?;
                if seen.contains_key(&r.new_datum.word) {
                    edges.insert((rd.word_string(), r.new_datum.word_string(), i));
                }
            }
        }
    }
    let mut nodes: Vec<String> = seen.keys().map(|w| word_string(w)).collect();
    nodes.sort();
    let edges = edges.into_iter().collect();
    Ok(Orbit { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(w: &str) -> RootDatum {
        RootDatum::parse(w, false).unwrap()
    }

    #[test]
    fn odd_reflection_eed() {
        let r = reflect_simple(&rd("EED"), 2).unwrap();
        assert_eq!(r.kind, ReflectionKind::Odd);
        assert_eq!(r.new_datum.word_string(), "EDE");
        let imgs: Vec<String> = r.root_images.iter().map(|w| w.to_string()).collect();
        assert_eq!(imgs, vec!["e1-d1", "-e2+d1"]);
        assert_eq!(r.root_images, r.new_datum.simple_roots);
    }

    #[test]
    fn even_reflection_eed() {
        let start = rd("EED");
        let r = reflect_simple(&start, 1).unwrap();
        assert_eq!(r.new_datum.word_string(), "EED");
        assert_eq!(r.root_images[0], -start.root(1));
        assert_eq!(r.root_images[1], start.root(1) + start.root(2));
    }

    #[test]
    fn words() {
        let w = GroupoidWord { start: rd("EED"), indices: vec![2, 1] };
        assert_eq!(apply_word(&w).unwrap().datum.word_string(), "DEE");
        let w = GroupoidWord { start: rd("EED"), indices: vec![2, 2] };
        let out = apply_word(&w).unwrap();
        assert_eq!(out.datum, rd("EED"));
        assert_eq!(out.root_images, rd("EED").simple_roots);
        let w = GroupoidWord { start: rd("EED"), indices: vec![2, 7] };
        assert_eq!(apply_word(&w), Err(Error::InvalidWordStep { step: 1, index: 7 }));
        let w = GroupoidWord { start: rd("EED"), indices: vec![] };
        assert_eq!(apply_word(&w).unwrap().root_images, rd("EED").simple_roots);
    }

    #[test]
    fn orbit_small() {
        let o = orbit(2, 1, false, 4).unwrap();
        assert_eq!(o.nodes, vec!["DEE", "EDE", "EED"]);
        assert_eq!(orbit(2, 1, false, 0).unwrap().nodes.len(), 1);
        assert_eq!(orbit(2, 2, false, default_orbit_depth(2, 2)).unwrap().nodes.len(), 6);
    }
}
