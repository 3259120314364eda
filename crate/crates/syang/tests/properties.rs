use std::collections::BTreeSet;

use num_traits::One;
use proptest::prelude::*;

use syang::hopf::{counit, verify_counit, CoproductTable, Cutoffs};
use syang::idealcheck::{ideal_span, SpanBasis, Verdict};
use syang::matrixrep::{check_relations, even_reflection_conjugator, realize, SuperMatrixPoly};
use syang::presentations::{
    drinfeld_lift, drinfeld_relations, kac_moody_relations, minimalistic_catalog, minimalistic_relations,
    quantum_reflection, RelationSet,
};
use syang::roots::{all_words, shuffle_words};
use syang::weyl::{apply_word, orbit, reflect_simple, GroupoidWord, ReflectionKind};
use syang::{Element, GeneratorId, HbarPoly, RootDatum, TensorElement, Word, Q};

fn q(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

fn sign(p: u8) -> Q {
    if p == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Words up to length 6, finite data; affine data from length 3.
fn datum() -> impl Strategy<Value = RootDatum> {
    (2usize..=6, any::<u64>(), any::<bool>()).prop_map(|(len, bits, affine)| {
        let word: String = (0..len).map(|k| if bits >> k & 1 == 1 { 'E' } else { 'D' }).collect();
        RootDatum::parse(&word, affine && len >= 3).unwrap()
    })
}

/// Random element over a catalog: sums of words with small rational and
/// hbar coefficients.
fn element(catalog: &[GeneratorId], spec: &[(Vec<usize>, i64, i64, usize)]) -> Element<Q> {
    let mut e = Element::zero();
    for (letters, a, b, hpow) in spec {
        let w = Word(letters.iter().map(|&k| catalog[k % catalog.len()]).collect());
        e.add_term(w, &HbarPoly::monomial(q(*a, *b), *hpow));
    }
    e
}

fn spec() -> impl Strategy<Value = Vec<(Vec<usize>, i64, i64, usize)>> {
    prop::collection::vec((prop::collection::vec(0usize..64, 0..4), -3i64..=3, 1i64..=3, 0usize..2), 1..4)
}

/// The part of `e` of the given parity.
fn homogeneous(e: &Element<Q>, odd: bool) -> Element<Q> {
    let (even, oddp) = e.parity_parts();
    if odd {
        oddp
    } else {
        even
    }
}

fn eeedd() -> RootDatum {
    RootDatum::parse("EEEDD", true).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cartan_shape(rd in datum()) {
        let cm = rd.cartan_matrix();
        prop_assert!(cm.is_symmetric());
        let r = cm.entries.len();
        for a in 0..r {
            prop_assert_eq!(cm.entries[a][a] == 0, cm.parity[a] == 1);
            if cm.parity[a] == 0 {
                prop_assert_eq!(cm.entries[a][a].abs(), 2);
            }
            if a + 1 < r {
                prop_assert_eq!(cm.entries[a][a + 1].abs(), 1);
            }
        }
        if !rd.affine {
            let mn = rd.size();
            let roots = rd.positive_roots(0).unwrap();
            prop_assert_eq!(roots.len(), mn * (mn - 1) / 2);
            let m = rd.word.iter().filter(|l| l.parity() == 0).count();
            prop_assert_eq!(roots.iter().filter(|x| x.parity == 1).count(), m * (mn - m));
        }
    }

    #[test]
    fn reflections(rd in datum()) {
        for i in rd.indices() {
            let r = reflect_simple(&rd, i).unwrap();
            if r.kind == ReflectionKind::Even {
                prop_assert_eq!(&r.new_datum.word, &rd.word);
            } else {
                // Reflecting twice at the same odd index returns everything.
                let back = apply_word(&GroupoidWord { start: rd.clone(), indices: vec![i, i] }).unwrap();
                prop_assert_eq!(&back.datum, &rd);
                prop_assert_eq!(&back.root_images, &rd.simple_roots);
            }
        }
    }

    #[test]
    fn bracket_identities(sa in spec(), sb in spec(), sc in spec(), pa: bool, pb: bool, pc: bool) {
        let cat = minimalistic_catalog(&eeedd());
        let a = homogeneous(&element(&cat, &sa), pa);
        let b = homogeneous(&element(&cat, &sb), pb);
        let c = homogeneous(&element(&cat, &sc), pc);
        let (p, r, s) = (pa as u8, pb as u8, pc as u8);
        let anti = a.super_bracket(&b).add(&b.super_bracket(&a).scale(&sign(p * r)));
        prop_assert!(anti.is_zero());
        let jac = a.super_bracket(&b.super_bracket(&c)).scale(&sign(p * s))
            .add(&b.super_bracket(&c.super_bracket(&a)).scale(&sign(r * p)))
            .add(&c.super_bracket(&a.super_bracket(&b)).scale(&sign(s * r)));
        prop_assert!(jac.is_zero());
        prop_assert!(a.sub(&a).is_zero());
        prop_assert!(a.multiply(&b).terms().all(|(_, k)| !k.is_zero()));
    }

    #[test]
    fn substitution_is_multiplicative(sa in spec(), sb in spec(), i in 0usize..5) {
        let rd = eeedd();
        let (map, _) = quantum_reflection::<Q>(&rd, i).unwrap();
        let cat = minimalistic_catalog(&rd);
        let (a, b) = (element(&cat, &sa), element(&cat, &sb));
        let (ta, tb) = (a.substitute(&map).unwrap(), b.substitute(&map).unwrap());
        prop_assert_eq!(a.multiply(&b).substitute(&map).unwrap(), ta.multiply(&tb));
        let (a, b) = (homogeneous(&a, true), homogeneous(&b, false));
        prop_assert_eq!(
            a.super_bracket(&b).substitute(&map).unwrap(),
            homogeneous(&ta, true).super_bracket(&homogeneous(&tb, false))
        );
    }

    #[test]
    fn flip_is_an_involution(sa in spec(), sb in spec(), sc in spec(), sd in spec()) {
        let cat = minimalistic_catalog(&eeedd());
        let t = TensorElement::tensor(&[&element(&cat, &sa), &element(&cat, &sb)])
            .add(&TensorElement::tensor(&[&element(&cat, &sc), &element(&cat, &sd)]));
        prop_assert_eq!(t.flip().flip(), t);
    }

    #[test]
    fn conjugation_preserves_supertrace_form(xs in prop::collection::vec((0usize..15, -3i64..=3), 1..4),
                                             ys in prop::collection::vec((0usize..15, -3i64..=3), 1..4)) {
        let rd = RootDatum::parse("EEEDD", true).unwrap();
        let real = realize::<Q>(&rd, 3).unwrap();
        let gens: Vec<SuperMatrixPoly<Q>> = rd.indices().iter().flat_map(|&i| {
            let p = rd.parity_of(i);
            [GeneratorId::h(i, 0), GeneratorId::xp(i, 0, p), GeneratorId::xm(i, 0, p)]
        }).map(|g| real.generator(&g).unwrap().clone()).collect();
        let combo = |v: &[(usize, i64)]| v.iter().fold(real.zero_matrix(), |acc, (k, c)| acc.add_scaled(&gens[*k], &q(*c, 1)));
        let (x, y) = (combo(&xs), combo(&ys));
        for i in rd.indices().into_iter().filter(|&i| !rd.is_odd(i)) {
            let s = even_reflection_conjugator(&real, i).unwrap();
            prop_assert_eq!(s.conjugate(&x).mul(&s.conjugate(&y)).supertrace(), x.mul(&y).supertrace());
        }
    }
}

/// Every relation of every presentation is homogeneous and uses only its
/// catalog; reflection images keep parity; even reflections fix the word.
#[test]
fn presentations_are_well_formed() {
    for len in 2..=5 {
        for word in all_words(len) {
            for affine in [false, true] {
                if affine && len < 3 {
                    continue;
                }
                let text: String = word.iter().map(|l| l.as_char()).collect();
                let rd = RootDatum::parse(&text, affine).unwrap();
                kac_moody_relations::<Q>(&rd).validate().unwrap();
                minimalistic_relations::<Q>(&rd).validate().unwrap();
                drinfeld_relations::<Q>(&rd, 2).unwrap().validate().unwrap();
                for i in rd.indices() {
                    let (map, target) = quantum_reflection::<Q>(&rd, i).unwrap();
                    map.check_parity().unwrap();
                    if !rd.is_odd(i) {
                        assert_eq!(target.word, rd.word, "{text} {i}");
                    }
                }
            }
        }
    }
}

#[test]
fn lift_is_identity_on_shared_catalog() {
    let rd = RootDatum::parse("EEDED", false).unwrap();
    let map = drinfeld_lift::<Q>(&rd, 1).unwrap();
    for g in minimalistic_catalog(&rd) {
        assert_eq!(map.image(&g).unwrap(), &Element::gen(g), "{g}");
    }
}

#[test]
fn orbit_matches_shuffles_and_edges_reverse() {
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2), (2, 3), (4, 1), (3, 3), (4, 2)] {
        let o = orbit(m, n, false, 2 * (m + n) * (m + n)).unwrap();
        assert_eq!(o.nodes.len(), shuffle_words(m, n).len(), "{m},{n}");
        let edges: BTreeSet<_> = o.edges.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
        assert!(edges.iter().all(|(a, b)| edges.contains(&(b.clone(), a.clone()))));
    }
}

#[test]
fn kac_moody_relations_hold_in_realization() {
    for len in 2..=5 {
        for word in all_words(len) {
            let text: String = word.iter().map(|l| l.as_char()).collect();
            let rd = RootDatum::parse(&text, false).unwrap();
            let rep = check_relations(&realize::<Q>(&rd, 0).unwrap(), &kac_moody_relations(&rd)).unwrap();
            assert_eq!(rep.count(syang::report::Outcome::Verified), rep.entries.len(), "{text}");
        }
    }
}

fn build(rs: &RelationSet<Q>, support: &BTreeSet<GeneratorId>, bound: usize) -> SpanBasis<Q> {
    ideal_span(rs, support, bound).unwrap()
}

/// Random combinations u.rho.v are members, their witnesses re-expand to
/// them, and membership survives a larger bound and support.
#[test]
fn witnesses_and_monotonicity() {
    use rand::{Rng, SeedableRng};
    let rd = RootDatum::parse("EED", false).unwrap();
    let rs = kac_moody_relations::<Q>(&rd);
    let all: BTreeSet<GeneratorId> = rs.catalog.iter().copied().collect();
    let small: BTreeSet<GeneratorId> = all.iter().copied().filter(|g| g.index() == 1 || g.is_x()).collect();
    let (s3, s4, f4) = (build(&rs, &small, 3), build(&rs, &small, 4), build(&rs, &all, 4));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let gens: Vec<GeneratorId> = small.iter().copied().collect();
    let usable: Vec<_> = rs.relations.iter().filter(|r| r.element.generators().is_subset(&small) && !r.element.is_zero()).collect();
    for _ in 0..40 {
        let mut a = Element::<Q>::zero();
        for _ in 0..rng.gen_range(1..3) {
            let rel = usable[rng.gen_range(0..usable.len())];
            let room = 3 - rel.element.max_word_len().min(3);
            let u = Word((0..rng.gen_range(0..=room)).map(|_| gens[rng.gen_range(0..gens.len())]).collect());
            let c = q(rng.gen_range(1..4), rng.gen_range(1..3));
            a.add_assign(&Element::from_word(u, HbarPoly::constant(c)).multiply(&rel.element));
        }
        if a.is_zero() {
            continue;
        }
        for span in [&s3, &s4, &f4] {
            match span.is_member(&a).unwrap() {
                Verdict::Member { witness } => assert_eq!(span.reexpand(&witness), a),
                Verdict::NotFound { .. } => panic!("{a} not found"),
            }
        }
    }
}

fn counit_of_word(w: &Word) -> HbarPoly<Q> {
    counit(&Element::from_word(w.clone(), HbarPoly::one()))
}

#[test]
fn counit_on_all_generators() {
    // The axiom holds at any cutoff. Loop-shifted root vectors make the
    // affine table slow, so it keeps loop degree 0.
    for (word, affine, height) in [("EED", false, 2), ("EEDED", false, 4), ("EEDED", false, 1), ("EEEDD", true, 2)] {
        let rd = RootDatum::parse(word, affine).unwrap();
        let cut = Cutoffs { height, loop_degree: 0 };
        let table = CoproductTable::<Q>::new(&rd, &cut).unwrap();
        let rep = verify_counit(&table);
        assert_eq!(rep.count(syang::report::Outcome::Verified), rep.entries.len(), "{word}");
        for g in table.generators() {
            let op = table.op_image(g).unwrap();
            for slot in [0, 1] {
                let left = op.contract_factor(slot, &counit_of_word);
                let as_el = Element::from_terms(left.terms().map(|(ws, c)| (ws[0].clone(), c.clone())));
                assert_eq!(as_el, Element::gen(*g), "{word} {g} slot {slot}");
            }
        }
    }
}

/// The machine-word field gives the same verdicts on small data.
#[test]
fn rational64_agrees() {
    use num_rational::Rational64;
    use syang::idealcheck::{verify_hom, SupportPolicy};
    use syang::presentations::classical_reflection_map;
    let rd = RootDatum::parse("EEDED", false).unwrap();
    let small = check_relations(&realize::<Rational64>(&rd, 0).unwrap(), &kac_moody_relations(&rd)).unwrap();
    assert_eq!(small.count(syang::report::Outcome::Verified), small.entries.len());
    let verdicts = |r: syang::report::Report| r.entries.into_iter().map(|e| (e.label, e.verdict)).collect::<Vec<_>>();
    let (m64, t64) = classical_reflection_map::<Rational64>(&rd, 2).unwrap();
    let a = verify_hom(&m64, &kac_moody_relations(&rd), &kac_moody_relations(&t64), 4, SupportPolicy::Indices).unwrap();
    let (mq, tq) = classical_reflection_map::<Q>(&rd, 2).unwrap();
    let b = verify_hom(&mq, &kac_moody_relations(&rd), &kac_moody_relations(&tq), 4, SupportPolicy::Indices).unwrap();
    assert_eq!(verdicts(a), verdicts(b));
}
